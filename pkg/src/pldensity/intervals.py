"""Rational intervals and finite unions of intervals.

Openness is deliberately not tracked.  Every set handled here is a finite
union of intervals, and all quantities of interest (measure, density) ignore
endpoints, so an :class:`IntervalSet` is best read as a set *up to a null
set*.  In that spirit, zero-length parts are dropped on construction.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Tuple, Union

from .rational import RatLike, as_rat


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval ``[lo, hi]`` with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __init__(self, lo: RatLike, hi: RatLike):
        lo, hi = as_rat(lo), as_rat(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


PartLike = Union[Interval, Tuple[RatLike, RatLike]]


def _as_interval(p: PartLike) -> Interval:
    return p if isinstance(p, Interval) else Interval(*p)


class IntervalSet:
    """Sorted disjoint union of intervals, with positive gaps between parts.

    Overlapping or touching parts are merged and zero-length parts dropped,
    so two IntervalSets compare equal iff they agree up to finitely many
    points.
    """

    __slots__ = ("_parts", "_los")

    def __init__(self, parts: Iterable[PartLike] = ()):
        items = sorted((_as_interval(p) for p in parts), key=lambda iv: (iv.lo, iv.hi))
        self._parts = tuple(self._merge(items))
        self._los = None

    @staticmethod
    def _merge(items: Sequence[Interval]) -> Iterator[Interval]:
        cur_lo = cur_hi = None
        for iv in items:
            if iv.lo == iv.hi:
                continue
            if cur_lo is None:
                cur_lo, cur_hi = iv.lo, iv.hi
            elif iv.lo <= cur_hi:
                if iv.hi > cur_hi:
                    cur_hi = iv.hi
            else:
                yield Interval(cur_lo, cur_hi)
                cur_lo, cur_hi = iv.lo, iv.hi
        if cur_lo is not None:
            yield Interval(cur_lo, cur_hi)

    @classmethod
    def _from_sorted(cls, parts: Sequence[Interval]) -> "IntervalSet":
        # caller guarantees sorted, positive length, positive gaps
        obj = cls.__new__(cls)
        obj._parts = tuple(parts)
        obj._los = None
        return obj

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls._from_sorted(())

    @property
    def parts(self) -> Tuple[Interval, ...]:
        return self._parts

    def __iter__(self) -> Iterator[Interval]:
        return iter(self._parts)

    def __len__(self) -> int:
        return len(self._parts)

    def __bool__(self) -> bool:
        return bool(self._parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._parts == other._parts

    def __hash__(self) -> int:
        return hash(self._parts)

    def __repr__(self) -> str:
        if not self._parts:
            return "IntervalSet(∅)"
        body = ", ".join(f"({p.lo}, {p.hi})" for p in self._parts)
        return "IntervalSet{" + body + "}"

    # -- measure -----------------------------------------------------------

    def measure(self) -> Fraction:
        return sum((p.length for p in self._parts), Fraction(0))

    def measure_in(self, lo: Fraction, hi: Fraction) -> Fraction:
        """Measure of the intersection with ``[lo, hi]``."""
        if lo >= hi or not self._parts:
            return Fraction(0)
        if self._los is None:
            self._los = [p.lo for p in self._parts]
        i = max(bisect_right(self._los, lo) - 1, 0)
        total = Fraction(0)
        for p in self._parts[i:]:
            if p.lo >= hi:
                break
            a, b = max(p.lo, lo), min(p.hi, hi)
            if a < b:
                total += b - a
        return total

    @property
    def endpoints(self) -> Tuple[Fraction, ...]:
        out = []
        for p in self._parts:
            out.append(p.lo)
            out.append(p.hi)
        return tuple(out)

    def bounds(self) -> Interval | None:
        if not self._parts:
            return None
        return Interval(self._parts[0].lo, self._parts[-1].hi)

    def contains_point(self, x) -> bool:
        """Closed-part membership (endpoints count)."""
        if self._los is None:
            self._los = [p.lo for p in self._parts]
        i = bisect_right(self._los, x) - 1
        return i >= 0 and x <= self._parts[i].hi

    # -- algebra ------------------------------------------------------------

    def clip(self, lo: RatLike, hi: RatLike) -> "IntervalSet":
        lo, hi = as_rat(lo), as_rat(hi)
        out = []
        for p in self._parts:
            a, b = max(p.lo, lo), min(p.hi, hi)
            if a < b:
                out.append(Interval(a, b))
        return IntervalSet._from_sorted(out)

    def intersect(self, other: "IntervalSet | Interval") -> "IntervalSet":
        if isinstance(other, Interval):
            return self.clip(other.lo, other.hi)
        out = []
        i = j = 0
        A, B = self._parts, other._parts
        while i < len(A) and j < len(B):
            a, b = max(A[i].lo, B[j].lo), min(A[i].hi, B[j].hi)
            if a < b:
                out.append(Interval(a, b))
            if A[i].hi < B[j].hi:
                i += 1
            else:
                j += 1
        return IntervalSet(out)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self._parts + other._parts)

    def complement_in(self, iv: Interval) -> "IntervalSet":
        out = []
        cur = iv.lo
        for p in self._parts:
            if p.hi <= iv.lo:
                continue
            if p.lo >= iv.hi:
                break
            if p.lo > cur:
                out.append(Interval(cur, p.lo))
            cur = max(cur, p.hi)
        if cur < iv.hi:
            out.append(Interval(cur, iv.hi))
        return IntervalSet(out)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        b = self.bounds()
        if b is None:
            return self
        return self.intersect(other.complement_in(b))

    def issubset(self, other: "IntervalSet") -> bool:
        """Exact containment, part by part."""
        for p in self._parts:
            k = bisect_left([q.hi for q in other._parts], p.hi)
            if k >= len(other._parts):
                return False
            q = other._parts[k]
            if not (q.lo <= p.lo and p.hi <= q.hi):
                return False
        return True

    def __or__(self, other):
        return self.union(other)

    def __and__(self, other):
        return self.intersect(other)

    def __sub__(self, other):
        return self.difference(other)
