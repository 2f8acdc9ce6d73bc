"""Weighted complex state space over a finite 1-D lattice.

Every geometric quantity downstream (filter effects, detection
probabilities, curve lengths) reduces to one weighted sesquilinear form,

    <phi|psi> = sum_i w_i conj(B_i) A_i ,

where the per-site weights w_i are an explicit ``Measure``.  Flat space is
all-ones; a curved preset encodes per-cell volumes.  Measures are always
passed as arguments so the same coefficient data can be re-read under a
different weighting.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Measure",
    "WaveFunction",
    "basis_spike",
    "hilbert_distance_sq",
    "inner_product",
    "norm_sq",
    "normalized",
    "weighted_dot",
]


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Measure:
    """Strictly positive per-site weights w_i."""

    weights: np.ndarray

    def __post_init__(self):
        w = _frozen_array(self.weights, float)
        if w.size == 0:
            raise ValueError("measure needs at least one site")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("measure weights must be finite and strictly positive")
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.weights.size

    @classmethod
    def flat(cls, size: int) -> "Measure":
        return cls(np.ones(size))


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex coefficient vector A_i with a time label (steps * dt).

    The optional ``measure`` field records which weighting the state was
    prepared under; operations still take the measure explicitly.
    """

    coefficients: np.ndarray
    time: float = 0.0
    measure: Measure | None = None

    def __post_init__(self):
        c = _frozen_array(self.coefficients, np.complex128)
        if c.size == 0:
            raise ValueError("wave function needs at least one site")
        if not np.all(np.isfinite(c.real)) or not np.all(np.isfinite(c.imag)):
            raise ValueError("wave function coefficients must be finite")
        object.__setattr__(self, "coefficients", c)

    @property
    def size(self) -> int:
        return self.coefficients.size

    def with_coefficients(self, coefficients, time: float | None = None) -> "WaveFunction":
        return WaveFunction(coefficients, self.time if time is None else time, self.measure)


def basis_spike(size: int, site: int, time: float = 0.0) -> WaveFunction:
    """Unit coefficient at one site, zero elsewhere."""
    if not 0 <= site < size:
        raise ValueError(f"site {site} outside lattice of size {size}")
    c = np.zeros(size, dtype=np.complex128)
    c[site] = 1.0
    return WaveFunction(c, time)


def weighted_dot(bra: np.ndarray, ket: np.ndarray, weights: np.ndarray) -> complex:
    """sum_i w_i conj(bra_i) ket_i on raw arrays (antilinear in ``bra``).

    Grouped as w * (conj(bra) * ket) so that self-products are exactly real.
    """
    return complex(np.sum(weights * (np.conj(bra) * ket)))


def _check_dims(phi: WaveFunction, psi: WaveFunction, m: Measure):
    if phi.size != psi.size or phi.size != m.size:
        raise ValueError(
            f"dimension mismatch: phi has {phi.size}, psi has {psi.size}, "
            f"measure has {m.size} sites"
        )


def inner_product(phi: WaveFunction, psi: WaveFunction, m: Measure) -> complex:
    """Weighted inner product, antilinear in the first argument."""
    _check_dims(phi, psi, m)
    return weighted_dot(phi.coefficients, psi.coefficients, m.weights)


def norm_sq(psi: WaveFunction, m: Measure) -> float:
    """<psi|psi> under the measure; real and nonnegative by construction."""
    if psi.size != m.size:
        raise ValueError(f"dimension mismatch: psi has {psi.size}, measure has {m.size} sites")
    return float(np.sum(m.weights * np.abs(psi.coefficients) ** 2))


def hilbert_distance_sq(phi: WaveFunction, psi: WaveFunction, m: Measure) -> float:
    """||phi - psi||^2 under the measure."""
    _check_dims(phi, psi, m)
    diff = phi.coefficients - psi.coefficients
    return float(np.sum(m.weights * np.abs(diff) ** 2))


def normalized(psi: WaveFunction, m: Measure) -> WaveFunction:
    """Rescale so that <psi|psi> = 1 under ``m``."""
    n2 = norm_sq(psi, m)
    if n2 == 0.0:
        raise ValueError("cannot normalize the zero state")
    return WaveFunction(psi.coefficients / np.sqrt(n2), psi.time, m)
