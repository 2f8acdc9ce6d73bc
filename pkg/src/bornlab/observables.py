"""Complex detectors: analysis bases rotated onto position spikes.

A detector is an orthonormal analysis basis Phi_n together with a bijection
onto target sites x_n.  The apparatus is the single unitary W that sends
each Phi_n to the (measure-normalized) spike at x_n; reading out position
after W reproduces the projection probabilities |<Phi_n|psi>|^2 exactly.
What such a detector measures are the normal operators
Q = sum_n f_n |Phi_n><Phi_n| whose eigenvalues f_n may be complex.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .born import born_probability
from .dynamics import NumericalError
from .lattice import Measure, WaveFunction, norm_sq

__all__ = ["ComplexDetector", "apparatus_unitary", "build_observable", "measure"]


@dataclass(frozen=True, eq=False)
class ComplexDetector:
    """Rows of ``basis`` are the analysis states Phi_n; x_n = target_sites[n]."""

    basis: np.ndarray
    target_sites: tuple[int, ...]
    values: tuple[complex, ...] | None = None

    def __post_init__(self):
        basis = np.array(self.basis, dtype=np.complex128)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "target_sites", tuple(int(s) for s in self.target_sites))
        if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
            raise ValueError("analysis basis must be a square matrix of states")
        n = basis.shape[0]
        if sorted(self.target_sites) != list(range(n)):
            raise ValueError("target sites must be a permutation of all sites")
        if self.values is not None:
            vals = tuple(complex(v) for v in self.values)
            if len(vals) != n:
                raise ValueError("need one detector value per basis state")
            object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return self.basis.shape[0]

    @classmethod
    def fourier(cls, size: int, target_sites=None, values=None) -> "ComplexDetector":
        """Discrete-Fourier analysis basis (flat-measure orthonormal)."""
        n = np.arange(size)
        basis = np.exp(2j * np.pi * np.outer(n, n) / size) / np.sqrt(size)
        targets = tuple(range(size)) if target_sites is None else tuple(target_sites)
        return cls(basis, targets, values)


def _check_orthonormal(det: ComplexDetector, m: Measure, tol: float):
    gram = (det.basis * m.weights) @ det.basis.conj().T
    residual = float(np.max(np.abs(gram - np.eye(det.size))))
    if residual > tol:
        raise ValueError(f"analysis basis is not orthonormal under the measure "
                         f"(residual {residual:.3e})")


def apparatus_unitary(det: ComplexDetector, m: Measure, *, tol: float = 1e-10) -> np.ndarray:
    """W = sum_n |x_n><Phi_n|, with measure-normalized spikes |x_n>.

    For the flat measure the spikes are literal unit coefficients, and
    unitarity W^dagger W = I is a consequence of orthonormality alone.
    """
    if det.size != m.size:
        raise ValueError(f"detector has {det.size} sites, measure has {m.size}")
    _check_orthonormal(det, m, tol)
    w = np.zeros((det.size, det.size), dtype=np.complex128)
    spike_norms = np.sqrt(m.weights)
    for n, site in enumerate(det.target_sites):
        w[site, :] = m.weights * det.basis[n].conj() / spike_norms[site]
    return w


def build_observable(det: ComplexDetector) -> np.ndarray:
    """Q = sum_n f_n |Phi_n><Phi_n| (flat inner product); normal by construction."""
    if det.values is None:
        raise ValueError("detector has no values f_n to build an observable from")
    q = np.zeros((det.size, det.size), dtype=np.complex128)
    for f_n, phi in zip(det.values, det.basis):
        q += f_n * np.outer(phi, phi.conj())
    return q


def measure(psi: WaveFunction, det: ComplexDetector, m: Measure,
            *, tol: float = 1e-9) -> np.ndarray:
    """Outcome distribution Pr(n) for a normalized state.

    Computed by sending the state through the apparatus and reading
    position probabilities at the target sites; cross-checked against the
    direct projections |<Phi_n|psi>|^2, which must agree by unitarity.
    """
    total = norm_sq(psi, m)
    if abs(total - 1.0) > tol:
        raise ValueError(f"state is not normalized under the measure: <psi|psi> = {total}")
    w = apparatus_unitary(det, m)
    rotated = WaveFunction(w @ psi.coefficients, psi.time, m)
    via_apparatus = np.array([
        born_probability(rotated, site, m, tol=tol) for site in det.target_sites
    ])
    overlaps = (det.basis.conj() * m.weights) @ psi.coefficients
    via_projection = np.abs(overlaps) ** 2
    gap = float(np.max(np.abs(via_apparatus - via_projection)))
    if gap > 1e-10:
        raise NumericalError(f"apparatus and projection routes disagree by {gap:.3e}")
    return via_apparatus
