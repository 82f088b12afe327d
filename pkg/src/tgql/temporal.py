"""Temporal elements: sets of disjoint closed integer intervals.

An interval is written ``[start-end]`` where ``end`` is either a fixed
instant or the open-ended marker ``Now``.  A temporal element is a set of
intervals kept in normal form: sorted ascending, pairwise disjoint and
non-adjacent (``[1-2],[3-4]`` collapses to ``[1-4]``).  ``Now`` compares
greater than every fixed instant and is resolved to a concrete instant
only when a query supplies one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


class MalformedInterval(ValueError):
    """Raised for intervals whose start lies after their end."""


class _NowType:
    """Sentinel for the open end of time.  Orders after every instant."""

    _instance = None

    def __new__(cls) -> "_NowType":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Now"

    def __deepcopy__(self, memo: dict) -> "_NowType":
        return self

    def __reduce__(self):
        return (_NowType, ())


NOW = _NowType()

Instant = int
End = Union[int, _NowType]


def _end_le(a: End, b: End) -> bool:
    """a <= b where Now is greater than every fixed instant."""
    if b is NOW:
        return True
    if a is NOW:
        return False
    return a <= b


def _end_min(a: End, b: End) -> End:
    return a if _end_le(a, b) else b


@dataclass(frozen=True, order=False)
class Interval:
    """Closed interval over integer instants, possibly ending at Now."""

    start: int
    end: End

    def __post_init__(self) -> None:
        if not isinstance(self.start, int) or isinstance(self.start, bool):
            raise MalformedInterval(f"interval start must be an integer, got {self.start!r}")
        if self.end is not NOW:
            if not isinstance(self.end, int) or isinstance(self.end, bool):
                raise MalformedInterval(f"interval end must be an integer or Now, got {self.end!r}")
            if self.end < self.start:
                raise MalformedInterval(f"interval start {self.start} lies after end {self.end}")

    def resolve_end(self, now_value: int) -> int:
        return now_value if self.end is NOW else self.end

    def contains(self, t: int, now_value: int) -> bool:
        return self.start <= t <= self.resolve_end(now_value)

    def __str__(self) -> str:
        return f"[{self.start}-{self.end}]"


@dataclass(frozen=True)
class TemporalElement:
    """Normalized set of disjoint, non-adjacent intervals."""

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        prev: Interval | None = None
        for iv in self.intervals:
            if prev is not None:
                if prev.end is NOW:
                    raise ValueError(f"interval after open end: {prev} then {iv}")
                if iv.start <= prev.end + 1:
                    raise ValueError(f"intervals overlap or touch: {prev} then {iv}")
            prev = iv

    def is_empty(self) -> bool:
        return not self.intervals

    def has_now(self) -> bool:
        return bool(self.intervals) and self.intervals[-1].end is NOW

    def fixed_instants(self) -> Iterator[int]:
        """Every fixed endpoint appearing in the element."""
        for iv in self.intervals:
            yield iv.start
            if iv.end is not NOW:
                yield iv.end

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __str__(self) -> str:
        return format_element(self)


EMPTY_ELEMENT = TemporalElement()


def _sort_key(iv: Interval) -> tuple[int, int, int]:
    if iv.end is NOW:
        return (iv.start, 1, 0)
    return (iv.start, 0, iv.end)


def normalize(intervals: Iterable[Interval]) -> TemporalElement:
    """Sort and merge overlapping or adjacent intervals into normal form."""
    pending = sorted(intervals, key=_sort_key)
    merged: list[Interval] = []
    for iv in pending:
        if merged:
            cur = merged[-1]
            if cur.end is NOW or iv.start <= cur.end + 1:
                if cur.end is NOW or _end_le(iv.end, cur.end):
                    continue
                merged[-1] = Interval(cur.start, iv.end)
                continue
        merged.append(iv)
    return TemporalElement(tuple(merged))


def contains_instant(element: TemporalElement, t: int, now_value: int) -> bool:
    """True when instant t falls inside the element, resolving Now."""
    return any(iv.contains(t, now_value) for iv in element)


def intersects(element: TemporalElement, window: Interval, now_value: int) -> bool:
    """True when the element overlaps the window, resolving Now on both sides."""
    w_end = window.resolve_end(now_value)
    if w_end < window.start:
        return False
    for iv in element:
        e = iv.resolve_end(now_value)
        if e < iv.start:
            continue
        if iv.start <= w_end and window.start <= e:
            return True
    return False


def subset_of(inner: TemporalElement, outer: TemporalElement) -> bool:
    """Symbolic containment: every inner interval lies within one outer interval.

    Now is treated as a single unresolved point beyond all instants, so
    [5-Now] is a subset of [1-Now] but not of [1-9999].
    """
    j = 0
    outs = outer.intervals
    for iv in inner:
        while j < len(outs) and not _end_le(iv.end, outs[j].end):
            j += 1
        if j == len(outs) or outs[j].start > iv.start:
            return False
    return True


def intersect_elements(a: TemporalElement, b: TemporalElement) -> TemporalElement:
    """Symbolic intersection of two elements (Now meets Now at Now)."""
    out: list[Interval] = []
    i = j = 0
    av, bv = a.intervals, b.intervals
    while i < len(av) and j < len(bv):
        lo = max(av[i].start, bv[j].start)
        hi = _end_min(av[i].end, bv[j].end)
        if hi is NOW or lo <= hi:
            out.append(Interval(lo, hi))
        if av[i].end is NOW:
            j += 1
        elif bv[j].end is NOW:
            i += 1
        elif av[i].end < bv[j].end:  # type: ignore[operator]
            i += 1
        elif bv[j].end < av[i].end:  # type: ignore[operator]
            j += 1
        else:
            i += 1
            j += 1
    return normalize(out)


def union_elements(a: TemporalElement, b: TemporalElement) -> TemporalElement:
    return normalize(list(a) + list(b))


_INTERVAL_RE = re.compile(r"\[\s*(-?\d+)\s*-\s*(-?\d+|Now)\s*\]")


def parse_interval(text: str) -> Interval:
    """Parse the text form ``[1986-1989]`` or ``[1990-Now]``."""
    m = _INTERVAL_RE.fullmatch(text.strip())
    if m is None:
        raise MalformedInterval(f"not an interval: {text!r}")
    start = int(m.group(1))
    end: End = NOW if m.group(2) == "Now" else int(m.group(2))
    return Interval(start, end)


def parse_element(text: str) -> TemporalElement:
    """Parse ``[[1986-1989],[1995-Now]]`` (or ``[]``) into normal form."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise MalformedInterval(f"not a temporal element: {text!r}")
    body = s[1:-1].strip()
    if not body:
        return EMPTY_ELEMENT
    intervals: list[Interval] = []
    pos = 0
    while True:
        m = _INTERVAL_RE.match(body, pos)
        if m is None:
            raise MalformedInterval(f"bad interval at offset {pos} in {text!r}")
        end: End = NOW if m.group(2) == "Now" else int(m.group(2))
        intervals.append(Interval(int(m.group(1)), end))
        pos = m.end()
        if pos == len(body):
            break
        if body[pos] != ",":
            raise MalformedInterval(f"expected ',' at offset {pos} in {text!r}")
        pos += 1
        while pos < len(body) and body[pos] == " ":
            pos += 1
    return normalize(intervals)


def format_interval(iv: Interval) -> str:
    return str(iv)


def format_element(element: TemporalElement) -> str:
    if element.is_empty():
        return "[]"
    return "[" + ",".join(str(iv) for iv in element) + "]"
