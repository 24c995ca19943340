"""Continuous piecewise-linear functions with exact rational knots."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import Iterable, Iterator, List, Sequence, Tuple

from .errors import DomainError
from .intervals import Interval
from .rational import RatLike, as_rat

Knot = Tuple[Fraction, Fraction]
Segment = Tuple[Fraction, Fraction, Fraction, Fraction]


class PLFunction:
    """Piecewise-linear interpolant of a strictly x-sorted knot sequence.

    Exact repeats of a knot are dropped.  Collinear interior knots are kept,
    since they record how a function was built; :meth:`simplify` removes
    them.  Equality is pointwise, i.e. it compares simplified knot lists.
    """

    __slots__ = ("xs", "ys", "_simple")

    def __init__(self, knots: Iterable[Tuple[RatLike, RatLike]]):
        xs: List[Fraction] = []
        ys: List[Fraction] = []
        for x, y in knots:
            x, y = as_rat(x), as_rat(y)
            if xs and x == xs[-1]:
                if y != ys[-1]:
                    raise ValueError(f"two values at x={x}: {ys[-1]} and {y}")
                continue
            if xs and x < xs[-1]:
                raise ValueError("knot x-coordinates must be strictly increasing")
            xs.append(x)
            ys.append(y)
        if len(xs) < 2:
            raise ValueError("a PLFunction needs at least 2 distinct knots")
        self.xs = tuple(xs)
        self.ys = tuple(ys)
        self._simple = None

    @classmethod
    def _raw(cls, xs: Sequence[Fraction], ys: Sequence[Fraction]) -> "PLFunction":
        obj = cls.__new__(cls)
        obj.xs = tuple(xs)
        obj.ys = tuple(ys)
        obj._simple = None
        return obj

    @classmethod
    def constant(cls, value: RatLike, lo: RatLike = 0, hi: RatLike = 1) -> "PLFunction":
        v = as_rat(value)
        return cls([(lo, v), (hi, v)])

    @classmethod
    def linear(cls, lo: RatLike, ylo: RatLike, hi: RatLike, yhi: RatLike) -> "PLFunction":
        return cls([(lo, ylo), (hi, yhi)])

    # -- basic access -------------------------------------------------------

    @property
    def knots(self) -> Tuple[Knot, ...]:
        return tuple(zip(self.xs, self.ys))

    @property
    def domain(self) -> Interval:
        return Interval(self.xs[0], self.xs[-1])

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def n_segments(self) -> int:
        return len(self.xs) - 1

    def __repr__(self) -> str:
        if len(self.xs) <= 8:
            body = ", ".join(f"({x}, {y})" for x, y in zip(self.xs, self.ys))
        else:
            body = f"{len(self.xs)} knots on [{self.xs[0]}, {self.xs[-1]}]"
        return f"PLFunction({body})"

    def segments(self) -> Iterator[Segment]:
        xs, ys = self.xs, self.ys
        for i in range(len(xs) - 1):
            yield xs[i], ys[i], xs[i + 1], ys[i + 1]

    def slopes(self) -> List[Fraction]:
        return [(y1 - y0) / (x1 - x0) for x0, y0, x1, y1 in self.segments()]

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x: RatLike) -> Fraction:
        x = as_rat(x)
        xs = self.xs
        if x < xs[0] or x > xs[-1]:
            raise DomainError(f"x={x} outside domain [{xs[0]}, {xs[-1]}]")
        i = bisect_left(xs, x)
        if xs[i] == x:
            return self.ys[i]
        x0, x1 = xs[i - 1], xs[i]
        y0, y1 = self.ys[i - 1], self.ys[i]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    eval = __call__

    def segment_index(self, x: Fraction) -> int:
        """Index of the segment containing ``x`` (the right one at a knot)."""
        i = bisect_right(self.xs, x) - 1
        return min(max(i, 0), len(self.xs) - 2)

    def right_slope(self, x: RatLike) -> Fraction | None:
        """Slope just to the right of ``x``; None at the right end."""
        x = as_rat(x)
        if x >= self.xs[-1]:
            return None
        i = self.segment_index(x)
        return (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])

    # -- derived functions --------------------------------------------------

    def restrict(self, iv: Interval) -> "PLFunction":
        """The function on ``iv`` (which must lie in the domain)."""
        lo, hi = iv.lo, iv.hi
        if lo < self.xs[0] or hi > self.xs[-1]:
            raise DomainError(f"{iv} not inside domain {self.domain}")
        if lo == hi:
            raise DomainError("cannot restrict to a degenerate interval")
        i = bisect_right(self.xs, lo)
        j = bisect_left(self.xs, hi)
        xs = [lo] + list(self.xs[i:j]) + [hi]
        ys = [self(lo)] + list(self.ys[i:j]) + [self(hi)]
        return PLFunction._raw(xs, ys)

    def __neg__(self) -> "PLFunction":
        return PLFunction._raw(self.xs, [-y for y in self.ys])

    def scale(self, factor: RatLike) -> "PLFunction":
        c = as_rat(factor)
        return PLFunction._raw(self.xs, [c * y for y in self.ys])

    def shift(self, offset: RatLike) -> "PLFunction":
        c = as_rat(offset)
        return PLFunction._raw(self.xs, [y + c for y in self.ys])

    def _combine(self, other: "PLFunction", sign: int) -> "PLFunction":
        if self.xs[0] != other.xs[0] or self.xs[-1] != other.xs[-1]:
            raise DomainError("functions must share a domain")
        xs = sorted(set(self.xs) | set(other.xs))
        if sign > 0:
            ys = [self(x) + other(x) for x in xs]
        else:
            ys = [self(x) - other(x) for x in xs]
        return PLFunction._raw(xs, ys)

    def __add__(self, other: "PLFunction") -> "PLFunction":
        return self._combine(other, +1)

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        return self._combine(other, -1)

    def simplify(self) -> "PLFunction":
        """Drop interior knots where the slope does not change."""
        if self._simple is None:
            xs, ys = [self.xs[0]], [self.ys[0]]
            for i in range(1, len(self.xs) - 1):
                x0, y0 = xs[-1], ys[-1]
                x1, y1 = self.xs[i], self.ys[i]
                x2, y2 = self.xs[i + 1], self.ys[i + 1]
                if (y1 - y0) * (x2 - x1) != (y2 - y1) * (x1 - x0):
                    xs.append(x1)
                    ys.append(y1)
            xs.append(self.xs[-1])
            ys.append(self.ys[-1])
            self._simple = PLFunction._raw(xs, ys)
            self._simple._simple = self._simple
        return self._simple

    def __eq__(self, other) -> bool:
        if not isinstance(other, PLFunction):
            return NotImplemented
        a, b = self.simplify(), other.simplify()
        return a.xs == b.xs and a.ys == b.ys

    def __hash__(self) -> int:
        s = self.simplify()
        return hash((s.xs, s.ys))

    def same_knots(self, other: "PLFunction") -> bool:
        """Stricter than ``==``: identical knot sequences."""
        return self.xs == other.xs and self.ys == other.ys

    # -- shape queries ------------------------------------------------------

    def max_abs_slope(self) -> Fraction:
        return max(abs(s) for s in self.slopes())

    def max_abs(self) -> Fraction:
        return max(abs(y) for y in self.ys)

    def is_strictly_increasing(self) -> bool:
        return all(y1 > y0 for y0, y1 in zip(self.ys, self.ys[1:]))

    def flat_segments(self) -> List[Interval]:
        return [Interval(x0, x1) for x0, y0, x1, y1 in self.segments() if y0 == y1]

    def local_maxima(self) -> List[Fraction]:
        """Knots that are strict-or-weak local maxima of the function.

        An endpoint counts when the adjacent segment moves away from it
        downwards (or is flat).
        """
        ys, out = self.ys, []
        n = len(ys)
        for i in range(n):
            left_ok = i == 0 or ys[i - 1] <= ys[i]
            right_ok = i == n - 1 or ys[i + 1] <= ys[i]
            if left_ok and right_ok:
                out.append(self.xs[i])
        return out


def sup_distance(f: PLFunction, g: PLFunction) -> Fraction:
    """Exact sup-metric distance of two PL functions on a common domain."""
    return (f - g).max_abs()
