"""Complex detectors: apparatus unitaries, normal observables, statistics."""
import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from bornlab.lattice import Measure, WaveFunction, basis_spike, normalized
from bornlab.observables import ComplexDetector, apparatus_unitary, build_observable, measure
from bornlab.sampling import random_measure, random_state


def spike_basis(size):
    return np.eye(size, dtype=complex)


def random_orthonormal(rng, size):
    g = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    q, _ = np.linalg.qr(g)
    return q.T  # rows orthonormal


def eigenvalue_multiset_gap(q, values):
    eigs = np.linalg.eigvals(q)
    cost = np.abs(eigs[:, None] - np.asarray(values)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


class TestApparatusUnitary:
    def test_spike_basis_identity(self):
        det = ComplexDetector(spike_basis(4), (0, 1, 2, 3))
        w = apparatus_unitary(det, Measure.flat(4))
        np.testing.assert_array_equal(w, np.eye(4))

    def test_spike_basis_permutation(self):
        targets = (2, 0, 3, 1)
        det = ComplexDetector(spike_basis(4), targets)
        w = apparatus_unitary(det, Measure.flat(4))
        expected = np.zeros((4, 4))
        for n, site in enumerate(targets):
            expected[site, n] = 1.0
        np.testing.assert_array_equal(w.real, expected)

    def test_fourier_basis_columnwise(self):
        det = ComplexDetector.fourier(4)
        m = Measure.flat(4)
        w = apparatus_unitary(det, m)
        assert np.max(np.abs(w.conj().T @ w - np.eye(4))) < 1e-13
        for n in range(4):
            np.testing.assert_allclose(w @ det.basis[n], basis_spike(4, n).coefficients,
                                       atol=1e-14, rtol=0)

    def test_unitarity_is_a_consequence_of_orthonormality(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            size = int(rng.integers(2, 12))
            det = ComplexDetector(random_orthonormal(rng, size),
                                  tuple(int(t) for t in rng.permutation(size)))
            w = apparatus_unitary(det, Measure.flat(size))
            assert np.max(np.abs(w.conj().T @ w - np.eye(size))) < 1e-12

    def test_weighted_measure_unitarity(self):
        rng = np.random.default_rng(11)
        size = 6
        m = random_measure(rng, size)
        basis = random_orthonormal(rng, size) / np.sqrt(m.weights)  # m-orthonormal rows
        det = ComplexDetector(basis, tuple(int(t) for t in rng.permutation(size)))
        w = apparatus_unitary(det, m)
        d = np.diag(m.weights)
        assert np.max(np.abs(w.conj().T @ d @ w - d)) < 1e-12

    def test_non_orthonormal_basis_rejected(self):
        basis = np.array([[1, 0], [1, 0]], dtype=complex)
        det = ComplexDetector(basis, (0, 1))
        with pytest.raises(ValueError, match="orthonormal"):
            apparatus_unitary(det, Measure.flat(2))

    def test_target_sites_must_be_bijection(self):
        with pytest.raises(ValueError, match="permutation"):
            ComplexDetector(spike_basis(3), (0, 0, 1))


class TestObservable:
    def test_real_values_give_hermitian(self):
        det = ComplexDetector.fourier(5, values=tuple(float(k) for k in range(5)))
        q = build_observable(det)
        assert np.max(np.abs(q - q.conj().T)) < 1e-13

    def test_phase_values_normal_but_not_hermitian(self):
        thetas = (0.3, 1.1, 2.0, 2.9)
        det = ComplexDetector.fourier(4, values=tuple(np.exp(1j * t) for t in thetas))
        q = build_observable(det)
        assert np.max(np.abs(q @ q.conj().T - q.conj().T @ q)) < 1e-13
        assert np.max(np.abs(q - q.conj().T)) > 0.1

    def test_commutator_vanishes_for_random_complex_values(self):
        rng = np.random.default_rng(13)
        vals = tuple(complex(a, b) for a, b in rng.standard_normal((8, 2)))
        det = ComplexDetector.fourier(8, values=vals)
        q = build_observable(det)
        assert np.max(np.abs(q @ q.conj().T - q.conj().T @ q)) < 1e-12

    def test_eigenvalues_are_the_detector_values(self):
        rng = np.random.default_rng(17)
        for size in (2, 5, 16):
            vals = tuple(complex(a, b) for a, b in rng.standard_normal((size, 2)))
            det = ComplexDetector(random_orthonormal(rng, size),
                                  tuple(range(size)), vals)
            assert eigenvalue_multiset_gap(build_observable(det), vals) < 1e-10

    def test_missing_values_rejected(self):
        det = ComplexDetector.fourier(3)
        with pytest.raises(ValueError, match="values"):
            build_observable(det)


class TestMeasurement:
    def test_basis_member_is_certain(self):
        det = ComplexDetector.fourier(4)
        m = Measure.flat(4)
        psi = WaveFunction(det.basis[1])
        probs = measure(psi, det, m)
        np.testing.assert_allclose(probs, [0, 1, 0, 0], atol=1e-13)

    def test_uniform_superposition_of_two_members(self):
        det = ComplexDetector.fourier(4)
        m = Measure.flat(4)
        psi = normalized(WaveFunction(det.basis[0] + det.basis[2]), m)
        probs = measure(psi, det, m)
        np.testing.assert_allclose(probs, [0.5, 0, 0.5, 0], atol=1e-13)

    def test_two_routes_agree_for_random_states(self):
        rng = np.random.default_rng(19)
        det = ComplexDetector.fourier(8)
        m = Measure.flat(8)
        for _ in range(10):
            psi = random_state(rng, 8, m)
            probs = measure(psi, det, m)
            direct = np.abs(det.basis.conj() @ psi.coefficients) ** 2
            np.testing.assert_allclose(probs, direct, atol=1e-12, rtol=0)

    def test_completeness(self):
        rng = np.random.default_rng(23)
        det = ComplexDetector.fourier(12)
        m = Measure.flat(12)
        for _ in range(5):
            probs = measure(random_state(rng, 12, m), det, m)
            assert abs(probs.sum() - 1.0) < 1e-12

    def test_unnormalized_state_rejected(self):
        det = ComplexDetector.fourier(3)
        with pytest.raises(ValueError, match="normalized"):
            measure(WaveFunction([1.0, 1.0, 0.0]), det, Measure.flat(3))
