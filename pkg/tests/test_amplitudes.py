"""Amplitude rules: chain evaluation against the path-enumeration oracle."""
import numpy as np
import pytest

from bornlab.amplitudes import (
    PATH_COUNT_GUARD,
    ResourceError,
    apply_filter,
    elementary_amplitude,
    path_count,
    path_sum_amplitude,
    setup_amplitude,
    wave_function_of,
)
from bornlab.dynamics import Dynamics
from bornlab.lattice import basis_spike
from bornlab.sampling import (
    random_and_pair,
    random_distributive_triple,
    random_or_pair,
    random_setup,
)
from bornlab.setups import Filter, Preparation, Setup, SpacetimePoint, and_compose, or_compose


@pytest.fixture
def dyn():
    return Dynamics(size=8, hopping=1.0, dt=0.2)


def pt(site, time):
    return SpacetimePoint(site, time)


class TestElementaryAmplitude:
    def test_same_point_same_time(self, dyn):
        assert elementary_amplitude(pt(3, 2), pt(3, 2), dyn) == 1.0 + 0j

    def test_same_time_different_site(self, dyn):
        assert elementary_amplitude(pt(4, 2), pt(3, 2), dyn) == 0j

    def test_parity_symmetry_of_uniform_ring(self, dyn):
        left = elementary_amplitude(pt(2, 3), pt(3, 0), dyn)
        right = elementary_amplitude(pt(4, 3), pt(3, 0), dyn)
        assert abs(left - right) < 1e-14

    def test_backward_time_rejected(self, dyn):
        with pytest.raises(ValueError, match="earlier"):
            elementary_amplitude(pt(0, 1), pt(0, 2), dyn)


class TestSetupAmplitude:
    def test_full_holes_filter_equals_no_filter(self, dyn):
        bare = Setup(pt(1, 0), (), pt(6, 5))
        full = Setup(pt(1, 0), (Filter(3, frozenset(range(8))),), pt(6, 5))
        assert abs(setup_amplitude(full, dyn) - setup_amplitude(bare, dyn)) < 1e-13

    def test_product_rule_for_and(self, dyn):
        rng = np.random.default_rng(21)
        for _ in range(25):
            a, b = random_and_pair(rng, 8)
            ab = and_compose(a, b)
            lhs = setup_amplitude(ab, dyn)
            rhs = setup_amplitude(a, dyn) * setup_amplitude(b, dyn)
            assert abs(lhs - rhs) < 1e-12

    def test_sum_rule_for_or(self, dyn):
        rng = np.random.default_rng(22)
        for _ in range(25):
            a1, a2 = random_or_pair(rng, 8)
            lhs = setup_amplitude(or_compose(a1, a2), dyn)
            rhs = setup_amplitude(a1, dyn) + setup_amplitude(a2, dyn)
            assert abs(lhs - rhs) < 1e-12

    def test_filter_site_out_of_range(self, dyn):
        s = Setup(pt(0, 0), (Filter(2, frozenset({11})),), pt(1, 4))
        with pytest.raises(ValueError, match="outside"):
            setup_amplitude(s, dyn)


class TestPathSum:
    def test_no_filters_reduces_to_elementary(self, dyn):
        s = Setup(pt(2, 0), (), pt(5, 4))
        assert path_sum_amplitude(s, dyn) == elementary_amplitude(pt(5, 4), pt(2, 0), dyn)

    def test_two_hole_filter_splits_into_single_holes(self, dyn):
        holes = (2, 5)
        s = Setup(pt(0, 0), (Filter(2, frozenset(holes)),), pt(4, 4))
        parts = [
            setup_amplitude(Setup(pt(0, 0), (Filter(2, frozenset({h})),), pt(4, 4)), dyn)
            for h in holes
        ]
        assert abs(path_sum_amplitude(s, dyn) - sum(parts)) < 1e-13

    def test_oracle_equivalence_on_random_setups(self, dyn):
        rng = np.random.default_rng(23)
        for _ in range(50):
            s = random_setup(rng, 8, max_filters=3, max_holes=4)
            gap = abs(setup_amplitude(s, dyn) - path_sum_amplitude(s, dyn))
            assert gap < 1e-11

    def test_path_count_guard(self):
        d = Dynamics(size=101, dt=0.1)
        filters = tuple(
            Filter(t, frozenset(range(101))) for t in (1, 2, 3)
        )
        s = Setup(pt(0, 0), filters, pt(0, 5))
        assert path_count(s) > PATH_COUNT_GUARD
        with pytest.raises(ResourceError, match="guard"):
            path_sum_amplitude(s, d)


class TestWaveFunction:
    def test_source_spike_with_no_filters(self, dyn):
        prep = Preparation(pt(3, 0), ())
        wf = wave_function_of(prep, dyn, 0)
        np.testing.assert_array_equal(wf.coefficients, basis_spike(8, 3).coefficients)

    def test_two_hole_superposition_structure(self, dyn):
        """Through a two-hole filter the state is alpha*psi1 + beta*psi2."""
        x1, x2, t0, t = 2, 5, 3, 7
        prep = Preparation(pt(0, 0), (Filter(t0, frozenset({x1, x2})),))
        combined = wave_function_of(prep, dyn, t)
        alpha = elementary_amplitude(pt(x1, t0), pt(0, 0), dyn)
        beta = elementary_amplitude(pt(x2, t0), pt(0, 0), dyn)
        psi1 = wave_function_of(Preparation(pt(x1, t0), ()), dyn, t)
        psi2 = wave_function_of(Preparation(pt(x2, t0), ()), dyn, t)
        expected = alpha * psi1.coefficients + beta * psi2.coefficients
        np.testing.assert_allclose(combined.coefficients, expected, atol=1e-13, rtol=0)

    def test_full_holes_filter_equals_filterless_pipeline(self, dyn):
        prep_full = Preparation(pt(1, 0), (Filter(2, frozenset(range(8))),))
        prep_bare = Preparation(pt(1, 0), ())
        a = wave_function_of(prep_full, dyn, 6).coefficients
        b = wave_function_of(prep_bare, dyn, 6).coefficients
        np.testing.assert_allclose(a, b, atol=1e-13, rtol=0)

    def test_time_inside_filter_window_rejected(self, dyn):
        prep = Preparation(pt(0, 0), (Filter(4, frozenset({1})),))
        with pytest.raises(ValueError, match="filter window"):
            wave_function_of(prep, dyn, 2)

    def test_time_label_in_physical_units(self, dyn):
        wf = wave_function_of(Preparation(pt(0, 0), ()), dyn, 5)
        assert wf.time == pytest.approx(5 * dyn.dt)


class TestProjectors:
    def test_filter_application_is_idempotent(self, dyn):
        psi = wave_function_of(Preparation(pt(0, 0), ()), dyn, 4)
        f = Filter(4, frozenset({1, 3, 6}))
        once = apply_filter(psi, f)
        twice = apply_filter(once, f)
        np.testing.assert_array_equal(once.coefficients, twice.coefficients)

    def test_amplitude_level_distributivity(self, dyn):
        rng = np.random.default_rng(32)
        for _ in range(20):
            a, b1, b2 = random_distributive_triple(rng, 8)
            lhs = setup_amplitude(and_compose(a, or_compose(b1, b2)), dyn)
            rhs = (setup_amplitude(and_compose(a, b1), dyn)
                   + setup_amplitude(and_compose(a, b2), dyn))
            assert abs(lhs - rhs) < 1e-12
