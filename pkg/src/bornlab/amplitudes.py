"""Amplitudes of setups: chained matrix evaluation plus a path-sum oracle.

A setup's amplitude is the matrix element of the alternating product of
propagators and filter projectors,

    <x_f| U(t_f, t_N) P_N ... P_1 U(t_1, t_i) |x_i> .

Chaining ``and`` then multiplies amplitudes and widening a filter's holes
(``or``) adds them.  ``path_sum_amplitude`` evaluates the same number by
explicitly enumerating one hole per filter and summing over all paths; it is
deliberately kept as the slow, obviously-correct second route.
"""
from __future__ import annotations

import itertools
from math import prod

import numpy as np

from .dynamics import Dynamics, propagator
from .lattice import WaveFunction
from .setups import Filter, Preparation, Setup, SpacetimePoint

__all__ = [
    "PATH_COUNT_GUARD",
    "ResourceError",
    "apply_filter",
    "elementary_amplitude",
    "path_count",
    "path_sum_amplitude",
    "setup_amplitude",
    "wave_function_of",
]

PATH_COUNT_GUARD = 10**6


class ResourceError(RuntimeError):
    """Path enumeration would exceed the explicit path-count guard."""


def _check_site(site: int, size: int, what: str):
    if not 0 <= site < size:
        raise ValueError(f"{what} site {site} outside lattice of size {size}")


def apply_filter(psi: WaveFunction, f: Filter) -> WaveFunction:
    """Project onto the filter's holes (idempotent)."""
    return psi.with_coefficients(psi.coefficients * f.mask(psi.size))


def elementary_amplitude(xf: SpacetimePoint, xi: SpacetimePoint, d: Dynamics) -> complex:
    """Amplitude of the filterless setup from xi to xf."""
    if xf.time < xi.time:
        raise ValueError(f"detector time {xf.time} earlier than source time {xi.time}")
    _check_site(xi.site, d.size, "source")
    _check_site(xf.site, d.size, "detector")
    return complex(propagator(d, xi.time, xf.time)[xf.site, xi.site])


def _chain_through_filters(source: SpacetimePoint, filters: tuple[Filter, ...],
                           d: Dynamics) -> tuple[np.ndarray, int]:
    """Propagate a source spike through all filters; returns (vector, time)."""
    _check_site(source.site, d.size, "source")
    v = np.zeros(d.size, dtype=np.complex128)
    v[source.site] = 1.0
    t = source.time
    for f in filters:
        v = propagator(d, t, f.time) @ v
        v = v * f.mask(d.size)
        t = f.time
    return v, t


def setup_amplitude(a: Setup, d: Dynamics) -> complex:
    """Amplitude of a full setup via the propagator/projector chain."""
    v, t = _chain_through_filters(a.source, a.filters, d)
    _check_site(a.detector.site, d.size, "detector")
    v = propagator(d, t, a.detector.time) @ v
    return complex(v[a.detector.site])


def path_count(a: Setup) -> int:
    return prod(len(f.holes) for f in a.filters)


def path_sum_amplitude(a: Setup, d: Dynamics) -> complex:
    """Sum of elementary-amplitude products over every one-hole-per-filter path.

    Brute-force oracle for ``setup_amplitude``; enumeration order is fixed
    (lexicographic in sorted hole indices) so the sum is reproducible.
    """
    n_paths = path_count(a)
    if n_paths > PATH_COUNT_GUARD:
        raise ResourceError(f"{n_paths} paths exceed the guard of {PATH_COUNT_GUARD}")
    _check_site(a.source.site, d.size, "source")
    _check_site(a.detector.site, d.size, "detector")
    times = [a.source.time] + [f.time for f in a.filters] + [a.detector.time]
    legs = [propagator(d, times[k], times[k + 1]) for k in range(len(times) - 1)]
    total = 0.0 + 0.0j
    for path in itertools.product(*(sorted(f.holes) for f in a.filters)):
        stops = (a.source.site,) + path + (a.detector.site,)
        amp = 1.0 + 0.0j
        for k in range(len(legs)):
            amp *= legs[k][stops[k + 1], stops[k]]
        total += amp
    return complex(total)


def wave_function_of(prefix: Preparation, d: Dynamics, t: int) -> WaveFunction:
    """Amplitudes from the prefix to every site at step ``t``.

    ``t`` must not precede the last filter; the returned time label is in
    physical units (steps times dt).
    """
    last = prefix.filters[-1].time if prefix.filters else prefix.source.time
    if t < last:
        raise ValueError(f"requested time {t} lies inside the filter window (last event at {last})")
    v, t_cur = _chain_through_filters(prefix.source, prefix.filters, d)
    v = propagator(d, t_cur, t) @ v
    return WaveFunction(v, t * d.dt)
