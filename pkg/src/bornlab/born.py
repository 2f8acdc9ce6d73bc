"""Detection rule and squared-modulus probabilities from frequency filters.

The operational rule: if inserting a filter changes the state's evolution
negligibly, the blocked property will not be detected.  Applied to an
ensemble of N independent replicas and a filter that keeps only components
whose fraction of replicas at site k falls in a window [f-eps, f+eps], the
relative effect of the filter is exactly one minus a binomial window mass,

    1 - sum_{n/N in window} C(N,n) p^n (1-p)^(N-n),      p = w_k |A_k|^2 .

``born_distance_sq`` evaluates that number from the two excluded binomial
tails in log space, so values far below machine epsilon relative to 1 are
still meaningful.  ``enumerated_replica_distance_sq`` recomputes the same
quantity by brute-force enumeration of all size^N product-basis strings and
exists purely as the independent check of the reduction.

Window membership is decided with exact ``Fraction`` comparisons of n/N
against f-eps and f+eps, so boundary counts never flip with float rounding.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

import numpy as np
from scipy.special import gammaln, logsumexp

from .lattice import Measure, WaveFunction, norm_sq
from .setups import Filter

__all__ = [
    "DetectionVerdict",
    "FrequencyWindow",
    "Verdict",
    "born_distance_sq",
    "born_probability",
    "enumerated_replica_distance_sq",
    "filter_effect",
    "verdict",
]

RationalLike = Fraction | int | float | str


def _as_fraction(value: RationalLike, name: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValueError(f"{name} is not a rational number: {value!r}") from exc


@dataclass(frozen=True)
class FrequencyWindow:
    """Closed frequency window [f - epsilon, f + epsilon] inside [0, 1]."""

    f: Fraction
    epsilon: Fraction

    def __post_init__(self):
        f = _as_fraction(self.f, "f")
        eps = _as_fraction(self.epsilon, "epsilon")
        if not 0 < eps <= Fraction(1, 2):
            raise ValueError(f"epsilon must lie in (0, 1/2], got {eps}")
        if f - eps < 0 or f + eps > 1:
            raise ValueError(
                f"window [{f - eps}, {f + eps}] must lie inside [0, 1]"
            )
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "epsilon", eps)

    @property
    def lo(self) -> Fraction:
        return self.f - self.epsilon

    @property
    def hi(self) -> Fraction:
        return self.f + self.epsilon

    def count_bounds(self, n_replicas: int) -> tuple[int, int]:
        """Smallest and largest replica counts n with n/N inside the window."""
        n_lo = max(ceil(self.lo * n_replicas), 0)
        n_hi = min(floor(self.hi * n_replicas), n_replicas)
        return n_lo, n_hi

    def contains_count(self, n: int, n_replicas: int) -> bool:
        frac = Fraction(n, n_replicas)
        return self.lo <= frac <= self.hi


class Verdict(enum.Enum):
    NOT_DETECTED = "not-detected"
    CERTAIN = "certain"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class DetectionVerdict:
    effect: float
    status: Verdict


def filter_effect(psi: WaveFunction, p: Filter, m: Measure) -> float:
    """Relative Hilbert distance ||P psi - psi||^2 / <psi|psi>.

    Because P is a 0/1 diagonal projector this equals the blocked fraction
    of the state's weighted mass.
    """
    total = norm_sq(psi, m)
    if total == 0.0:
        raise ValueError("filter effect is undefined for the zero state")
    kept = float(np.sum(p.mask(psi.size) * m.weights * np.abs(psi.coefficients) ** 2))
    return min(max(1.0 - kept / total, 0.0), 1.0)


def verdict(effect: float, tau: float = 1e-9) -> DetectionVerdict:
    """Classify a filter effect: negligible, total, or in between."""
    if not 0.0 <= effect <= 1.0:
        raise ValueError(f"effect must lie in [0, 1], got {effect}")
    if effect <= tau:
        status = Verdict.NOT_DETECTED
    elif effect >= 1.0 - tau:
        status = Verdict.CERTAIN
    else:
        status = Verdict.INDETERMINATE
    return DetectionVerdict(effect, status)


def born_probability(psi: WaveFunction, k: int, m: Measure, *, tol: float = 1e-9) -> float:
    """Detection probability w_k |A_k|^2 for a normalized state."""
    total = norm_sq(psi, m)
    if abs(total - 1.0) > tol:
        raise ValueError(f"state is not normalized under the measure: <psi|psi> = {total}")
    if not 0 <= k < psi.size:
        raise ValueError(f"site {k} outside lattice of size {psi.size}")
    return float(m.weights[k]) * float(np.abs(psi.coefficients[k]) ** 2)


def _log_binom_pmf(n_replicas: int, p: float) -> np.ndarray:
    n = np.arange(n_replicas + 1)
    log_comb = (gammaln(n_replicas + 1) - gammaln(n + 1) - gammaln(n_replicas - n + 1))
    return log_comb + n * np.log(p) + (n_replicas - n) * np.log1p(-p)


def born_distance_sq(p: float, n_replicas: int, window: FrequencyWindow) -> float:
    """Exact finite-N effect of the frequency filter on the N-replica state.

    Equals the binomial probability mass outside the window, computed from
    the two tails via logsumexp.
    """
    if n_replicas < 1:
        raise ValueError("need at least one replica")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"per-replica probability must lie in [0, 1], got {p}")
    n_lo, n_hi = window.count_bounds(n_replicas)
    if n_lo > n_hi:
        return 1.0
    if p == 0.0:
        return 0.0 if n_lo == 0 else 1.0
    if p == 1.0:
        return 0.0 if n_hi == n_replicas else 1.0
    log_pmf = _log_binom_pmf(n_replicas, p)
    lower = float(np.exp(logsumexp(log_pmf[:n_lo]))) if n_lo > 0 else 0.0
    upper = float(np.exp(logsumexp(log_pmf[n_hi + 1:]))) if n_hi < n_replicas else 0.0
    return min(lower + upper, 1.0)


def enumerated_replica_distance_sq(
    psi: WaveFunction,
    k: int,
    window: FrequencyWindow,
    n_replicas: int,
    m: Measure | None = None,
    *,
    tol: float = 1e-9,
) -> float:
    """Brute-force ||P psi_N - psi_N||^2 over all size^N product-basis strings.

    Materializes the N-replica product state coefficient by coefficient:
    the string (s_1 ... s_N) carries coefficient prod_j A_{s_j} and weight
    prod_j w_{s_j}; blocked strings are those whose multiplicity of site k
    falls outside the window.  Exponential cost, small N only.
    """
    m = m if m is not None else Measure.flat(psi.size)
    total = norm_sq(psi, m)
    if abs(total - 1.0) > tol:
        raise ValueError("the replica construction assumes a normalized single-particle state")
    coeffs = psi.coefficients
    weights = m.weights
    blocked = 0.0
    for string in itertools.product(range(psi.size), repeat=n_replicas):
        if window.contains_count(string.count(k), n_replicas):
            continue
        amp = 1.0 + 0.0j
        w = 1.0
        for s in string:
            amp *= coeffs[s]
            w *= weights[s]
        blocked += w * abs(amp) ** 2
    return blocked
