"""Inner product, norm and distance under explicit site measures."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bornlab.lattice import (
    Measure,
    WaveFunction,
    basis_spike,
    hilbert_distance_sq,
    inner_product,
    norm_sq,
    normalized,
)


def dot_oracle(weights, bra, ket):
    """Independent elementwise summation, plain Python complex arithmetic."""
    total = 0j
    for w, b, a in zip(weights, bra, ket):
        total += w * complex(b).conjugate() * complex(a)
    return total


def random_wf(rng, size):
    return WaveFunction(rng.standard_normal(size) + 1j * rng.standard_normal(size))


class TestInnerProduct:
    def test_spike_with_itself_flat(self):
        m = Measure.flat(4)
        s = basis_spike(4, 0)
        assert inner_product(s, s, m) == 1.0 + 0j

    def test_distinct_spikes_orthogonal_any_measure(self):
        m = Measure([1.0, 2.0, 0.5, 3.0])
        assert inner_product(basis_spike(4, 0), basis_spike(4, 1), m) == 0j

    def test_matches_elementwise_oracle(self):
        rng = np.random.default_rng(7)
        m = Measure([1.0, 2.0, 1.0, 2.0])
        phi, psi = random_wf(rng, 4), random_wf(rng, 4)
        expected = dot_oracle(m.weights, phi.coefficients, psi.coefficients)
        assert abs(inner_product(phi, psi, m) - expected) < 1e-14

    def test_dimension_mismatch(self):
        m = Measure.flat(4)
        with pytest.raises(ValueError, match="dimension mismatch"):
            inner_product(basis_spike(3, 0), basis_spike(4, 0), m)

    @settings(deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_conjugate_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        size = int(rng.integers(1, 9))
        m = Measure(rng.uniform(0.5, 2.0, size))
        phi, psi = random_wf(rng, size), random_wf(rng, size)
        lhs = inner_product(phi, psi, m)
        rhs = inner_product(psi, phi, m)
        assert abs(lhs - rhs.conjugate()) < 1e-14 * (1 + abs(lhs))

    @settings(deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_linearity_in_second_argument(self, seed):
        rng = np.random.default_rng(seed)
        size = 6
        m = Measure(rng.uniform(0.5, 2.0, size))
        phi, p1, p2 = (random_wf(rng, size) for _ in range(3))
        a, b = (complex(*rng.standard_normal(2)) for _ in range(2))
        combo = WaveFunction(a * p1.coefficients + b * p2.coefficients)
        lhs = inner_product(phi, combo, m)
        rhs = a * inner_product(phi, p1, m) + b * inner_product(phi, p2, m)
        assert abs(lhs - rhs) < 1e-12 * (1 + abs(lhs))

    def test_positivity(self):
        rng = np.random.default_rng(3)
        m = Measure(rng.uniform(0.5, 2.0, 8))
        psi = random_wf(rng, 8)
        val = inner_product(psi, psi, m)
        assert abs(val.imag) <= 1e-14 * val.real and val.real > 0.0
        zero = WaveFunction(np.zeros(8))
        assert inner_product(zero, zero, m) == 0j

    def test_flat_measure_reduces_to_unweighted_sum_exactly(self):
        rng = np.random.default_rng(11)
        phi, psi = random_wf(rng, 16), random_wf(rng, 16)
        flat = Measure.flat(16)
        unweighted = complex(np.sum(np.conj(phi.coefficients) * psi.coefficients))
        assert inner_product(phi, psi, flat) == unweighted


class TestDistance:
    def test_identical_states(self):
        rng = np.random.default_rng(2)
        psi = random_wf(rng, 5)
        assert hilbert_distance_sq(psi, psi, Measure.flat(5)) == 0.0

    def test_orthonormal_spikes_pythagoras(self):
        m = Measure.flat(4)
        assert hilbert_distance_sq(basis_spike(4, 0), basis_spike(4, 1), m) == 2.0

    def test_consistent_with_inner_product(self):
        rng = np.random.default_rng(5)
        m = Measure(rng.uniform(0.5, 2.0, 6))
        phi, psi = random_wf(rng, 6), random_wf(rng, 6)
        diff = WaveFunction(phi.coefficients - psi.coefficients)
        via_inner = inner_product(diff, diff, m).real
        assert abs(hilbert_distance_sq(phi, psi, m) - via_inner) < 1e-14 * (1 + via_inner)


class TestNormalization:
    def test_weighted_born_normalization(self):
        rng = np.random.default_rng(13)
        m = Measure([1.0, 2.0, 1.0, 2.0])
        psi = normalized(random_wf(rng, 4), m)
        total = float(np.sum(m.weights * np.abs(psi.coefficients) ** 2))
        assert abs(total - 1.0) < 1e-12

    def test_zero_state_rejected(self):
        with pytest.raises(ValueError, match="zero state"):
            normalized(WaveFunction(np.zeros(3)), Measure.flat(3))

    def test_norm_sq_positive(self):
        psi = WaveFunction([1.0, 1j])
        assert norm_sq(psi, Measure.flat(2)) == pytest.approx(2.0, abs=1e-15)


class TestValidation:
    def test_measure_rejects_nonpositive_weights(self):
        with pytest.raises(ValueError, match="strictly positive"):
            Measure([1.0, 0.0])
        with pytest.raises(ValueError, match="strictly positive"):
            Measure([1.0, -2.0])

    def test_wavefunction_rejects_nonfinite(self):
        with pytest.raises(ValueError, match="finite"):
            WaveFunction([1.0, np.inf])
        with pytest.raises(ValueError, match="finite"):
            WaveFunction([1.0, complex(0, np.nan)])

    def test_coefficients_are_read_only(self):
        psi = basis_spike(4, 1)
        with pytest.raises(ValueError):
            psi.coefficients[0] = 1.0
