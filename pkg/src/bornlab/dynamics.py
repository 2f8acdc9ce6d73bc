"""Lattice dynamics: a Cayley-form one-step propagator.

The generator is a nearest-neighbour tight-binding Hamiltonian

    H = -J sum_<ij> (|i><j| + |j><i|) + diag(V)          (gamma = 0)
    H -> H - i*gamma*diag(absorber)                       (gamma > 0)

and one time step is the Cayley (Crank-Nicolson) transform

    U = (I + i*H*dt/2)^{-1} (I - i*H*dt/2).

For Hermitian H this is unitary to rounding, which matters: the entropy
conservation runs must not confuse discretization error with genuine drift.
The anti-Hermitian term -i*gamma*diag(absorber) is the deliberate foil that
breaks norm conservation while reusing the same stepper.

``Dynamics`` stores the potential and absorber as tuples so instances are
hashable; the step operator is memoized per instance.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import WaveFunction

__all__ = ["Dynamics", "NumericalError", "evolve", "hamiltonian", "propagator", "step_operator"]


class NumericalError(RuntimeError):
    """Linear algebra failed in a way the physics says cannot happen."""


@dataclass(frozen=True)
class Dynamics:
    size: int
    hopping: float = 1.0
    potential: tuple[float, ...] | None = None
    gamma: float = 0.0
    absorber: tuple[float, ...] | None = None
    dt: float = 0.1
    boundary: str = "periodic"

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("lattice size must be at least 1")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if self.boundary not in ("periodic", "open"):
            raise ValueError(f"unknown boundary condition {self.boundary!r}")
        pot = tuple(float(v) for v in (self.potential if self.potential is not None
                                       else np.zeros(self.size)))
        absb = tuple(float(v) for v in (self.absorber if self.absorber is not None
                                        else np.zeros(self.size)))
        if len(pot) != self.size:
            raise ValueError(f"potential has {len(pot)} entries, lattice has {self.size}")
        if len(absb) != self.size:
            raise ValueError(f"absorber has {len(absb)} entries, lattice has {self.size}")
        if any(v < 0 for v in absb):
            raise ValueError("absorber entries must be nonnegative")
        object.__setattr__(self, "potential", pot)
        object.__setattr__(self, "absorber", absb)


def hamiltonian(d: Dynamics) -> np.ndarray:
    """Generator including the anti-Hermitian part when gamma > 0."""
    h = np.diag(np.asarray(d.potential, dtype=np.complex128))
    bonds = d.size if d.boundary == "periodic" else d.size - 1
    for i in range(bonds):
        j = (i + 1) % d.size
        h[i, j] += -d.hopping
        h[j, i] += -d.hopping
    if d.gamma > 0:
        h = h - 1j * d.gamma * np.diag(np.asarray(d.absorber, dtype=float))
    return h


@lru_cache(maxsize=64)
def step_operator(d: Dynamics) -> np.ndarray:
    """One-step Cayley propagator; cached per Dynamics, returned read-only."""
    h = hamiltonian(d)
    eye = np.eye(d.size, dtype=np.complex128)
    a = eye + 0.5j * d.dt * h
    b = eye - 0.5j * d.dt * h
    try:
        u = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:  # cannot occur for Hermitian h, guard anyway
        raise NumericalError(f"singular Cayley denominator: {exc}") from exc
    if not np.all(np.isfinite(u)):
        raise NumericalError("step operator has non-finite entries")
    u.setflags(write=False)
    return u


def propagator(d: Dynamics, t0: int, t1: int) -> np.ndarray:
    """Propagator across ``t1 - t0`` steps; identity when the times coincide."""
    if t1 < t0:
        raise ValueError(f"no backward propagation: t0={t0}, t1={t1}")
    steps = t1 - t0
    if steps == 0:
        return np.eye(d.size, dtype=np.complex128)
    return np.linalg.matrix_power(step_operator(d), steps)


def evolve(psi: WaveFunction, d: Dynamics, steps: int) -> WaveFunction:
    """Apply the step operator ``steps`` times; advances the time label."""
    if psi.size != d.size:
        raise ValueError(f"state has {psi.size} sites, dynamics has {d.size}")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if steps == 0:
        return psi
    u = step_operator(d)
    c = psi.coefficients
    for _ in range(steps):
        c = u @ c
    return WaveFunction(c, psi.time + steps * d.dt, psi.measure)
