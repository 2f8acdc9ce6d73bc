"""Line-oriented text format for describing setups, with `and`/`or` directives.

Grammar (version 1, `#` starts a comment anywhere):

    version 1
    lattice 8                      # optional; enables site range checks

    setup NAME
      source SITE @ TIME
      filter @ TIME holes H1, H2   # zero or more, in increasing time order
      detector SITE @ TIME
    end

    compose NAME = LEFT and RIGHT
    compose NAME = LEFT or RIGHT

    result NAME                    # optional when exactly one name is defined

Compose directives are expanded through the setup algebra, so every
composition validity rule applies to parsed input; violations surface as
``SetupSemanticError`` carrying the line and column of the directive.
"""
from __future__ import annotations

import re

from .setups import CompositionError, Filter, Setup, SpacetimePoint, and_compose, or_compose

__all__ = [
    "SetupDocumentError",
    "SetupSemanticError",
    "SetupSyntaxError",
    "parse_setup",
    "serialize_setup",
]

DOCUMENT_VERSION = 1


class SetupDocumentError(ValueError):
    """Problem in a setup document, annotated with its position."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        self.reason = message
        super().__init__(f"line {line}, column {column}: {message}")


class SetupSyntaxError(SetupDocumentError):
    pass


class SetupSemanticError(SetupDocumentError):
    pass


_NAME = r"[A-Za-z_][A-Za-z0-9_-]*"
_RULES = {
    "version": re.compile(r"version\s+(\d+)\s*$"),
    "lattice": re.compile(r"lattice\s+(\d+)\s*$"),
    "setup": re.compile(rf"setup\s+({_NAME})\s*$"),
    "source": re.compile(r"source\s+(\d+)\s*@\s*(-?\d+)\s*$"),
    "filter": re.compile(r"filter\s*@\s*(-?\d+)\s+holes\s+(\d+(?:\s*,\s*\d+)*)\s*$"),
    "detector": re.compile(r"detector\s+(\d+)\s*@\s*(-?\d+)\s*$"),
    "end": re.compile(r"end\s*$"),
    "compose": re.compile(rf"compose\s+({_NAME})\s*=\s*({_NAME})\s+(and|or)\s+({_NAME})\s*$"),
    "result": re.compile(rf"result\s+({_NAME})\s*$"),
}


def _statements(text: str):
    """Yield (line_no, column, keyword, match) for every non-blank statement."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        column = body.index(stripped[0]) + 1
        keyword = stripped.split(None, 1)[0]
        rule = _RULES.get(keyword)
        if rule is None:
            raise SetupSyntaxError(f"unknown directive {keyword!r}", line_no, column)
        match = rule.match(stripped)
        if match is None:
            raise SetupSyntaxError(
                f"malformed {keyword!r} directive: {stripped!r}",
                line_no, column + len(keyword),
            )
        yield line_no, column, keyword, match


class _BlockState:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.source: SpacetimePoint | None = None
        self.filters: list[Filter] = []
        self.detector: SpacetimePoint | None = None


def _check_site(site: int, lattice: int | None, what: str, line: int, column: int):
    if lattice is not None and site >= lattice:
        raise SetupSemanticError(
            f"{what} {site} outside declared lattice of size {lattice}", line, column
        )


def parse_setup(text: str, lattice_size: int | None = None) -> Setup:
    """Parse a document and return its result setup.

    ``lattice_size`` adds site range checks on top of any ``lattice``
    declaration inside the document.
    """
    named: dict[str, Setup] = {}
    result_name: str | None = None
    version_seen = False
    lattice = lattice_size
    block: _BlockState | None = None
    last_line = 1

    for line_no, column, keyword, match in _statements(text):
        last_line = line_no
        if not version_seen:
            if keyword != "version":
                raise SetupSyntaxError("document must start with a version directive",
                                       line_no, column)
            if int(match.group(1)) != DOCUMENT_VERSION:
                raise SetupSemanticError(
                    f"unsupported document version {match.group(1)}", line_no, column)
            version_seen = True
            continue

        if block is not None:
            if keyword == "source":
                if block.source is not None:
                    raise SetupSemanticError("duplicate source in setup block", line_no, column)
                site, time = int(match.group(1)), int(match.group(2))
                _check_site(site, lattice, "source site", line_no, column)
                block.source = SpacetimePoint(site, time)
            elif keyword == "filter":
                if block.source is None:
                    raise SetupSemanticError("filter declared before source", line_no, column)
                if block.detector is not None:
                    raise SetupSemanticError("filter declared after detector", line_no, column)
                time = int(match.group(1))
                holes = frozenset(int(h) for h in re.split(r"\s*,\s*", match.group(2)))
                for h in sorted(holes):
                    _check_site(h, lattice, "filter hole", line_no, column)
                prev = block.filters[-1].time if block.filters else block.source.time
                if time <= prev:
                    raise SetupSemanticError(
                        f"filter times must increase strictly: t={time} after t={prev}",
                        line_no, column)
                block.filters.append(Filter(time, holes))
            elif keyword == "detector":
                if block.source is None:
                    raise SetupSemanticError("detector declared before source", line_no, column)
                site, time = int(match.group(1)), int(match.group(2))
                _check_site(site, lattice, "detector site", line_no, column)
                prev = block.filters[-1].time if block.filters else block.source.time
                if time <= prev:
                    raise SetupSemanticError(
                        f"detector time {time} must lie strictly after t={prev}",
                        line_no, column)
                block.detector = SpacetimePoint(site, time)
            elif keyword == "end":
                if block.source is None or block.detector is None:
                    raise SetupSemanticError(
                        f"setup {block.name!r} needs a source and a detector",
                        line_no, column)
                named[block.name] = Setup(block.source, tuple(block.filters), block.detector)
                block = None
            else:
                raise SetupSyntaxError(
                    f"{keyword!r} directive not allowed inside a setup block",
                    line_no, column)
            continue

        if keyword == "version":
            raise SetupSemanticError("duplicate version directive", line_no, column)
        if keyword == "lattice":
            declared = int(match.group(1))
            if declared < 1:
                raise SetupSemanticError("lattice size must be positive", line_no, column)
            if lattice_size is not None and declared != lattice_size:
                raise SetupSemanticError(
                    f"document declares lattice {declared}, caller expects {lattice_size}",
                    line_no, column)
            lattice = declared
        elif keyword == "setup":
            name = match.group(1)
            if name in named:
                raise SetupSemanticError(f"duplicate setup name {name!r}", line_no, column)
            block = _BlockState(name, line_no)
        elif keyword == "compose":
            name, left, op, right = match.groups()
            if name in named:
                raise SetupSemanticError(f"duplicate setup name {name!r}", line_no, column)
            for ref in (left, right):
                if ref not in named:
                    raise SetupSemanticError(f"unknown setup name {ref!r}", line_no, column)
            try:
                combine = and_compose if op == "and" else or_compose
                named[name] = combine(named[left], named[right])
            except CompositionError as exc:
                raise SetupSemanticError(f"invalid `{op}` composition: {exc}",
                                         line_no, column) from exc
        elif keyword == "result":
            result_name = match.group(1)
            if result_name not in named:
                raise SetupSemanticError(f"unknown setup name {result_name!r}",
                                         line_no, column)
        else:
            raise SetupSyntaxError(f"{keyword!r} directive only allowed inside a setup block",
                                   line_no, column)

    if not version_seen:
        raise SetupSyntaxError("empty document (missing version directive)", 1)
    if block is not None:
        raise SetupSyntaxError(f"setup {block.name!r} is never closed with `end`",
                               block.line)
    if result_name is None:
        if len(named) == 1:
            result_name = next(iter(named))
        else:
            raise SetupSemanticError(
                f"document defines {len(named)} setups; add a `result` directive",
                last_line)
    return named[result_name]


def serialize_setup(setup: Setup, name: str = "main", lattice_size: int | None = None) -> str:
    """Render a setup as a version-1 document that parses back to equality."""
    lines = [f"version {DOCUMENT_VERSION}"]
    if lattice_size is not None:
        lines.append(f"lattice {lattice_size}")
    lines.append(f"setup {name}")
    lines.append(f"  source {setup.source.site} @ {setup.source.time}")
    for f in setup.filters:
        holes = ", ".join(str(h) for h in sorted(f.holes))
        lines.append(f"  filter @ {f.time} holes {holes}")
    lines.append(f"  detector {setup.detector.site} @ {setup.detector.time}")
    lines.append("end")
    lines.append(f"result {name}")
    return "\n".join(lines) + "\n"
