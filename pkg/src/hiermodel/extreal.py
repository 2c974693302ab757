"""Exact arithmetic on the two-point compactification of the rationals.

Finite values are :class:`fractions.Fraction`; the ideal points are the float
infinities ``-inf`` and ``+inf``.  Mixed comparisons between the two are exact
in Python, so intervals can be ordered and intersected without any rounding.
Arithmetic is only ever performed on finite endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import FormatError, GeometryError

ExtRational = Union[Fraction, float]

NEG_INF: float = -math.inf
POS_INF: float = math.inf


def ext(value) -> ExtRational:
    """Coerce ints, Fractions, strings and infinities to an extended rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise FormatError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if math.isinf(value):
            return value
        raise FormatError("finite floats are not accepted; use exact rationals")
    if isinstance(value, str):
        return parse_ext(value)
    raise FormatError(f"not an extended rational: {value!r}")


def is_finite(x: ExtRational) -> bool:
    return not (isinstance(x, float) and math.isinf(x))


def parse_ext(text: str) -> ExtRational:
    s = text.strip()
    if s in ("-inf", "-infinity"):
        return NEG_INF
    if s in ("+inf", "inf", "+infinity", "infinity"):
        return POS_INF
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {text!r}") from exc


def format_ext(x: ExtRational) -> str:
    """Serialize as ``"p/q"`` (or ``"p"``), ``"-inf"`` or ``"+inf"``."""
    if not is_finite(x):
        return "+inf" if x > 0 else "-inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class Interval:
    """A closed interval ``[lo, hi]`` of extended rationals with ``lo < hi``."""

    lo: ExtRational
    hi: ExtRational

    def __post_init__(self):
        if not self.lo < self.hi:
            raise GeometryError(f"degenerate interval [{format_ext(self.lo)}, {format_ext(self.hi)}]")

    @classmethod
    def of(cls, lo, hi) -> "Interval":
        return cls(ext(lo), ext(hi))

    def __str__(self):
        return f"[{format_ext(self.lo)},{format_ext(self.hi)}]"

    def contains_point(self, t: ExtRational) -> bool:
        return self.lo <= t <= self.hi

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def interior_meets(self, other: "Interval") -> bool:
        """True iff the open interiors intersect."""
        return max(self.lo, other.lo) < min(self.hi, other.hi)

    def touches(self, other: "Interval") -> bool:
        """True iff the closed intervals intersect (possibly in one point)."""
        return max(self.lo, other.lo) <= min(self.hi, other.hi)

    def intersection(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo < hi else None

    @property
    def bounded(self) -> bool:
        return is_finite(self.lo) and is_finite(self.hi)

    def interior_point(self) -> Fraction:
        """A canonical finite point strictly inside the interval."""
        lo, hi = self.lo, self.hi
        if is_finite(lo) and is_finite(hi):
            return (Fraction(lo) + Fraction(hi)) / 2
        if is_finite(lo):
            return Fraction(lo) + 1
        if is_finite(hi):
            return Fraction(hi) - 1
        return Fraction(0)

    def to_json(self) -> list:
        return [format_ext(self.lo), format_ext(self.hi)]

    @classmethod
    def from_json(cls, data) -> "Interval":
        try:
            lo, hi = data
        except (TypeError, ValueError) as exc:
            raise FormatError(f"interval must be a pair, got {data!r}") from exc
        return cls(parse_ext(lo), parse_ext(hi))


def breakpoints(intervals: Iterable[Interval], within: Interval) -> list:
    """Sorted distinct endpoints of ``intervals`` that lie in ``within`` (ends included)."""
    pts = {within.lo, within.hi}
    for iv in intervals:
        for t in (iv.lo, iv.hi):
            if within.lo <= t <= within.hi:
                pts.add(t)
    return sorted(pts)


def elementary_intervals(intervals: Iterable[Interval], within: Interval) -> list:
    pts = breakpoints(intervals, within)
    return [Interval(a, b) for a, b in zip(pts, pts[1:])]


def union_covers(pieces: Iterable[Interval], target: Interval) -> bool:
    """Exact check that the closed union of ``pieces`` contains ``target``."""
    reach = target.lo
    for iv in sorted(pieces):
        if iv.hi <= reach:
            continue
        if iv.lo > reach:
            return False
        reach = iv.hi
        if reach >= target.hi:
            return True
    return reach >= target.hi


def merge_touching(intervals: Iterable[Interval]) -> list:
    """Merge intervals whose closures intersect; returns a sorted disjoint list."""
    out: list = []
    for iv in sorted(intervals):
        if out and iv.lo <= out[-1].hi:
            if iv.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, iv.hi)
        else:
            out.append(iv)
    return out
