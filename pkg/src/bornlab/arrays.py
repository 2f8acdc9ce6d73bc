"""Arrays of states and their entropy; the conservation experiment.

An array encodes uncertainty about the *preparation procedure*: a discrete
set of weighted states, or a weighted curve sampled at increasing parameter
values.  The discrete entropy is plain Shannon entropy of the weights.  The
curve entropy uses the Hilbert arc-length density as its reference measure,

    S = -sum_j dalpha_j * pbar_j * log(pbar_j / lbar_j),

with midpoint-averaged density pbar and chord-length density
lbar = ||state_{j+1} - state_j|| / dalpha, which makes the value invariant
under reparametrizing the curve (up to discretization error).

``entropy_drift`` evolves every sample state with the lattice stepper while
holding the weights fixed, and records the entropy and segment-length drift
per step.  With a Hermitian generator both are conserved to rounding; the
anti-Hermitian foil makes them move at first order.

Zero-length segments are an error, never a skip: the length sits in a
denominator and silently dropping a segment would bias the entropy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import Dynamics, step_operator
from .lattice import Measure, WaveFunction

__all__ = [
    "CurveArray",
    "DegenerateCurveError",
    "DiscreteArray",
    "DriftSample",
    "continuous_entropy",
    "discrete_entropy",
    "entropy_drift",
    "great_circle_curve",
    "segment_length",
    "segment_lengths",
]


class DegenerateCurveError(ValueError):
    """Two consecutive curve samples coincide (zero Hilbert distance)."""


@dataclass(frozen=True, eq=False)
class DiscreteArray:
    """Weighted finite set {(p_alpha, state_alpha)} under one measure."""

    probabilities: np.ndarray
    states: tuple[WaveFunction, ...]
    measure: Measure

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float).reshape(-1)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) != p.size:
            raise ValueError("one probability per state required")
        if np.any(p < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {p.sum()}")
        if any(s.size != self.measure.size for s in self.states):
            raise ValueError("all states must match the measure's lattice size")


def discrete_entropy(a: DiscreteArray) -> float:
    """Shannon entropy -sum p log p with 0 log 0 = 0."""
    p = a.probabilities[a.probabilities > 0]
    return float(-np.sum(p * np.log(p)))


@dataclass(frozen=True, eq=False)
class CurveArray:
    """Weighted curve sampled at strictly increasing parameter values.

    ``states`` is an (n_samples, size) complex matrix, one sample per row;
    ``densities`` holds the probability density at each sample and must
    integrate to 1 over the parameter range (trapezoid rule, 1e-6).
    States need not be normalized.
    """

    alphas: np.ndarray
    densities: np.ndarray
    states: np.ndarray
    measure: Measure

    def __post_init__(self):
        alphas = np.array(self.alphas, dtype=float).reshape(-1)
        dens = np.array(self.densities, dtype=float).reshape(-1)
        states = np.array(self.states, dtype=np.complex128)
        for arr in (alphas, dens, states):
            arr.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "densities", dens)
        object.__setattr__(self, "states", states)
        if alphas.size < 2:
            raise ValueError("a curve needs at least two samples")
        if np.any(np.diff(alphas) <= 0):
            raise ValueError("curve parameters must increase strictly")
        if dens.size != alphas.size or states.shape != (alphas.size, self.measure.size):
            raise ValueError("alphas, densities and states must agree in shape")
        if np.any(dens < 0):
            raise ValueError("densities must be nonnegative")
        total = float(np.trapezoid(dens, alphas))
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"density must integrate to 1 (trapezoid), got {total}")

    @property
    def n_samples(self) -> int:
        return self.alphas.size


def _segment_lengths(states: np.ndarray, alphas: np.ndarray, weights: np.ndarray) -> np.ndarray:
    diff = states[1:] - states[:-1]
    chords = np.sqrt(np.abs(diff) ** 2 @ weights)
    if np.any(chords == 0.0):
        j = int(np.argmin(chords))
        raise DegenerateCurveError(f"curve samples {j} and {j + 1} coincide")
    return chords / np.diff(alphas)


def segment_lengths(a: CurveArray) -> np.ndarray:
    """Discretized arc-length density, one value per segment."""
    return _segment_lengths(a.states, a.alphas, a.measure.weights)


def segment_length(a: CurveArray, j: int) -> float:
    """Length density of segment j (between samples j and j+1)."""
    if not 0 <= j < a.n_samples - 1:
        raise ValueError(f"segment index {j} out of range")
    return float(_segment_lengths(a.states[j:j + 2], a.alphas[j:j + 2], a.measure.weights)[0])


def _entropy_from_parts(alphas: np.ndarray, dens: np.ndarray, lengths: np.ndarray) -> float:
    dalpha = np.diff(alphas)
    p_mid = 0.5 * (dens[1:] + dens[:-1])
    active = p_mid > 0.0
    contrib = np.zeros_like(p_mid)
    contrib[active] = p_mid[active] * np.log(p_mid[active] / lengths[active])
    return float(-np.sum(dalpha * contrib))


def continuous_entropy(a: CurveArray) -> float:
    """Reparametrization-invariant curve entropy by the midpoint rule."""
    return _entropy_from_parts(a.alphas, a.densities, segment_lengths(a))


@dataclass(frozen=True)
class DriftSample:
    step: int
    entropy: float
    max_length_drift: float       # max_j |l_j(t) - l_j(0)|
    max_step_length_drift: float  # max_j |l_j(t) - l_j(t-1)|


def entropy_drift(a: CurveArray, d: Dynamics, steps: int) -> list[DriftSample]:
    """Evolve every sample state, weights held fixed; track S and lengths."""
    if d.size != a.measure.size:
        raise ValueError(f"dynamics has {d.size} sites, curve has {a.measure.size}")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    u_t = step_operator(d).T
    w = a.measure.weights
    states = np.array(a.states)
    lengths_0 = _segment_lengths(states, a.alphas, w)
    lengths_prev = lengths_0
    out = [DriftSample(0, _entropy_from_parts(a.alphas, a.densities, lengths_0), 0.0, 0.0)]
    for t in range(1, steps + 1):
        states = states @ u_t
        lengths = _segment_lengths(states, a.alphas, w)
        out.append(DriftSample(
            t,
            _entropy_from_parts(a.alphas, a.densities, lengths),
            float(np.max(np.abs(lengths - lengths_0))),
            float(np.max(np.abs(lengths - lengths_prev))),
        ))
        lengths_prev = lengths
    return out


def great_circle_curve(
    size: int,
    site_a: int,
    site_b: int,
    n_samples: int,
    alpha_max: float = np.pi / 2,
    measure: Measure | None = None,
) -> CurveArray:
    """Uniform-density arc cos(alpha)|a> + sin(alpha)|b> on [0, alpha_max].

    The endpoint states are measure-normalized spikes, so the arc has unit
    speed under the given measure.
    """
    m = measure if measure is not None else Measure.flat(size)
    if site_a == site_b:
        raise ValueError("great circle needs two distinct sites")
    alphas = np.linspace(0.0, alpha_max, n_samples)
    states = np.zeros((n_samples, size), dtype=np.complex128)
    states[:, site_a] = np.cos(alphas) / np.sqrt(m.weights[site_a])
    states[:, site_b] = np.sin(alphas) / np.sqrt(m.weights[site_b])
    densities = np.full(n_samples, 1.0 / alpha_max)
    return CurveArray(alphas, densities, states, m)
