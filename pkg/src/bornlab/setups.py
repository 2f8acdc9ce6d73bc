"""Experimental setups and their two composition relations.

A setup is a source point, a time-ordered list of filters (screens that are
opaque except at a set of holes), and a detector point.  Setups compose two
ways:

* ``and_compose(a, b)`` places ``b`` immediately after ``a``.  The meeting
  point is recorded as an explicit single-hole filter at the junction time,
  which is what makes the product rule for amplitudes hold mechanically.
* ``or_compose(a, b)`` merges the hole sets of one distinguished filter of
  two setups that are identical everywhere else; the hole sets must be
  disjoint.

Both constructors validate their preconditions fully and raise
``CompositionError`` rather than ever building a malformed setup.  Setup
equality is structural, so the algebraic laws (commutativity of ``or``,
associativity, distributivity of ``and`` over ``or``) can be checked with
plain ``==``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CompositionError",
    "Filter",
    "Preparation",
    "Setup",
    "SpacetimePoint",
    "and_compose",
    "or_compose",
]


class CompositionError(ValueError):
    """A setup composition whose preconditions fail."""


@dataclass(frozen=True)
class SpacetimePoint:
    site: int
    time: int

    def __post_init__(self):
        if self.site < 0:
            raise ValueError(f"site index must be nonnegative, got {self.site}")


@dataclass(frozen=True)
class Filter:
    """A screen at one instant, open at ``holes`` and opaque elsewhere."""

    time: int
    holes: frozenset[int]

    def __post_init__(self):
        holes = frozenset(int(h) for h in self.holes)
        if not holes:
            raise ValueError("a filter needs at least one hole")
        if any(h < 0 for h in holes):
            raise ValueError("hole indices must be nonnegative")
        object.__setattr__(self, "holes", holes)

    def mask(self, size: int) -> np.ndarray:
        """0/1 diagonal of the projector this filter applies."""
        if max(self.holes) >= size:
            raise ValueError(
                f"filter at t={self.time} has hole {max(self.holes)} outside "
                f"lattice of size {size}"
            )
        m = np.zeros(size)
        m[sorted(self.holes)] = 1.0
        return m

    def is_trivial(self, size: int) -> bool:
        """True when every site is open (equivalent to no filter at all)."""
        return self.holes == frozenset(range(size))


def _check_filter_times(source: SpacetimePoint, filters: tuple[Filter, ...],
                        detector_time: int | None):
    prev = source.time
    for f in filters:
        if f.time <= prev:
            raise ValueError(
                f"filter times must increase strictly after the source; "
                f"got filter at t={f.time} following t={prev}"
            )
        prev = f.time
    if detector_time is not None and detector_time <= prev:
        raise ValueError(
            f"detector time {detector_time} must lie strictly after t={prev}"
        )


@dataclass(frozen=True)
class Setup:
    """[detector, s_N, ..., s_1, source] with strictly increasing filter times."""

    source: SpacetimePoint
    filters: tuple[Filter, ...]
    detector: SpacetimePoint

    def __post_init__(self):
        object.__setattr__(self, "filters", tuple(self.filters))
        _check_filter_times(self.source, self.filters, self.detector.time)

    def without_detector(self) -> "Preparation":
        return Preparation(self.source, self.filters)


@dataclass(frozen=True)
class Preparation:
    """A setup prefix: source plus filters, detector not yet placed."""

    source: SpacetimePoint
    filters: tuple[Filter, ...]

    def __post_init__(self):
        object.__setattr__(self, "filters", tuple(self.filters))
        _check_filter_times(self.source, self.filters, None)


def and_compose(a: Setup, b: Setup) -> Setup:
    """Run ``a`` then ``b``; their meeting point becomes a single-hole filter.

    Requires ``a.detector == b.source`` in both site and time.
    """
    if a.detector != b.source:
        raise CompositionError(
            f"cannot chain: first setup ends at site {a.detector.site}, "
            f"t={a.detector.time} but second starts at site {b.source.site}, "
            f"t={b.source.time}"
        )
    junction = Filter(a.detector.time, frozenset({a.detector.site}))
    return Setup(a.source, a.filters + (junction,) + b.filters, b.detector)


def or_compose(a: Setup, b: Setup) -> Setup:
    """Merge the hole sets of the one filter where ``a`` and ``b`` differ.

    The operands must agree on source, detector and all filter times, differ
    at exactly one filter position, and have disjoint hole sets there.
    """
    if a.source != b.source or a.detector != b.detector:
        raise CompositionError("operands of `or` must share source and detector")
    if len(a.filters) != len(b.filters) or any(
        fa.time != fb.time for fa, fb in zip(a.filters, b.filters)
    ):
        raise CompositionError("operands of `or` must have identical filter times")
    differing = [i for i, (fa, fb) in enumerate(zip(a.filters, b.filters)) if fa != fb]
    if len(differing) != 1:
        raise CompositionError(
            f"operands of `or` must differ at exactly one filter, differ at "
            f"{len(differing)}"
        )
    j = differing[0]
    fa, fb = a.filters[j], b.filters[j]
    if fa.holes & fb.holes:
        raise CompositionError(
            f"holes of the distinguished filter overlap at sites "
            f"{sorted(fa.holes & fb.holes)}"
        )
    merged = Filter(fa.time, fa.holes | fb.holes)
    return Setup(a.source, a.filters[:j] + (merged,) + a.filters[j + 1:], a.detector)
