"""Seeded random generators for states, measures and valid setups.

Everything takes a ``numpy.random.Generator`` so runs are reproducible from
a single seed.  The pair/triple builders construct operands that satisfy
the composition preconditions by construction (shared endpoints, disjoint
hole partitions), which is what the law checks need.
"""
from __future__ import annotations

import numpy as np

from .lattice import Measure, WaveFunction, normalized
from .setups import Filter, Setup, SpacetimePoint

__all__ = [
    "random_and_pair",
    "random_distributive_triple",
    "random_measure",
    "random_or_pair",
    "random_or_triple",
    "random_setup",
    "random_state",
]


def random_state(rng: np.random.Generator, size: int,
                 measure: Measure | None = None, normalize: bool = True) -> WaveFunction:
    """Complex Gaussian coefficients, optionally normalized under ``measure``."""
    m = measure if measure is not None else Measure.flat(size)
    c = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    psi = WaveFunction(c, 0.0, m)
    return normalized(psi, m) if normalize else psi


def random_measure(rng: np.random.Generator, size: int) -> Measure:
    return Measure(rng.uniform(0.5, 2.0, size))


def _random_filters(rng: np.random.Generator, size: int, times: list[int],
                    max_holes: int) -> tuple[Filter, ...]:
    filters = []
    for t in times:
        n_holes = int(rng.integers(1, min(max_holes, size) + 1))
        holes = rng.choice(size, size=n_holes, replace=False)
        filters.append(Filter(t, frozenset(int(h) for h in holes)))
    return tuple(filters)


def random_setup(rng: np.random.Generator, size: int = 8, max_filters: int = 3,
                 max_holes: int = 4, t_start: int = 0, t_end: int | None = None) -> Setup:
    """A valid random setup on the window [t_start, t_end]."""
    if t_end is None:
        t_end = t_start + int(rng.integers(2, 9))
    span = t_end - t_start
    if span < 2:
        raise ValueError("need at least two steps between source and detector")
    n_filters = int(rng.integers(0, min(max_filters, span - 1) + 1))
    times = sorted(rng.choice(np.arange(t_start + 1, t_end), size=n_filters,
                              replace=False).tolist())
    return Setup(
        SpacetimePoint(int(rng.integers(0, size)), t_start),
        _random_filters(rng, size, times, max_holes),
        SpacetimePoint(int(rng.integers(0, size)), t_end),
    )


def random_and_pair(rng: np.random.Generator, size: int = 8, **kw) -> tuple[Setup, Setup]:
    """Two setups with a.detector == b.source, so `and` is allowed."""
    t_mid = int(rng.integers(2, 7))
    a = random_setup(rng, size, t_start=0, t_end=t_mid, **kw)
    b = random_setup(rng, size, t_start=t_mid, t_end=t_mid + int(rng.integers(2, 7)), **kw)
    b = Setup(a.detector, b.filters, b.detector)
    return a, b


def _split_holes(rng: np.random.Generator, holes: frozenset[int],
                 parts: int) -> list[frozenset[int]]:
    sites = list(holes)
    rng.shuffle(sites)
    cuts = sorted(rng.choice(np.arange(1, len(sites)), size=parts - 1, replace=False).tolist())
    bounds = [0] + cuts + [len(sites)]
    return [frozenset(sites[bounds[i]:bounds[i + 1]]) for i in range(parts)]


def _with_wide_filter(rng: np.random.Generator, size: int, min_holes: int,
                      **kw) -> tuple[Setup, int]:
    """A setup guaranteed to own a filter with at least ``min_holes`` holes."""
    while True:
        s = random_setup(rng, size, **kw)
        wide = [i for i, f in enumerate(s.filters) if len(f.holes) >= min_holes]
        if wide:
            return s, int(rng.choice(wide))


def random_or_pair(rng: np.random.Generator, size: int = 8, **kw) -> tuple[Setup, Setup]:
    """Two `or`-composable setups whose union is a valid setup."""
    base, j = _with_wide_filter(rng, size, 2, **kw)
    part = _split_holes(rng, base.filters[j].holes, 2)
    variants = [
        Setup(base.source,
              base.filters[:j] + (Filter(base.filters[j].time, holes),) + base.filters[j + 1:],
              base.detector)
        for holes in part
    ]
    return variants[0], variants[1]


def random_or_triple(rng: np.random.Generator, size: int = 8, **kw) -> tuple[Setup, Setup, Setup]:
    base, j = _with_wide_filter(rng, size, 3, **kw)
    part = _split_holes(rng, base.filters[j].holes, 3)
    return tuple(
        Setup(base.source,
              base.filters[:j] + (Filter(base.filters[j].time, holes),) + base.filters[j + 1:],
              base.detector)
        for holes in part
    )


def random_distributive_triple(rng: np.random.Generator,
                               size: int = 8, **kw) -> tuple[Setup, Setup, Setup]:
    """(a, b1, b2) with a chainable before b1, b2 and b1, b2 `or`-composable."""
    t_mid = int(rng.integers(2, 7))
    a = random_setup(rng, size, t_start=0, t_end=t_mid, **kw)
    while True:
        b = random_setup(rng, size, t_start=t_mid, t_end=t_mid + int(rng.integers(3, 8)), **kw)
        wide = [i for i, f in enumerate(b.filters) if len(f.holes) >= 2]
        if wide:
            break
    b = Setup(a.detector, b.filters, b.detector)
    j = int(rng.choice(wide))
    part = _split_holes(rng, b.filters[j].holes, 2)
    b1, b2 = (
        Setup(b.source,
              b.filters[:j] + (Filter(b.filters[j].time, holes),) + b.filters[j + 1:],
              b.detector)
        for holes in part
    )
    return a, b1, b2
