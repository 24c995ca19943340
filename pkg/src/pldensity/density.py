"""Level sets, Lebesgue measure and interval densities of PL functions.

All results are exact.  Crossing points are found by rational line
intersection on each linear piece, so a superlevel set of a PL function is
an :class:`IntervalSet` with rational endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import DomainError, ParameterError
from .intervals import Interval, IntervalSet
from .plfunc import PLFunction
from .rational import RatLike, as_rat

Point = Tuple[RatLike, RatLike]


def eval_at(f: PLFunction, x: RatLike) -> Fraction:
    return f(x)


def _check_inside(f: PLFunction, iv: Interval) -> None:
    if iv.lo < f.xs[0] or iv.hi > f.xs[-1]:
        raise DomainError(f"{iv} not inside domain {f.domain}")


def sup_on(f: PLFunction, iv: Interval) -> Fraction:
    """Maximum of ``f`` on ``iv``; attained at a knot or an endpoint."""
    _check_inside(f, iv)
    best = max(f(iv.lo), f(iv.hi))
    for x, y in zip(f.xs, f.ys):
        if iv.lo < x < iv.hi and y > best:
            best = y
    return best


def inf_on(f: PLFunction, iv: Interval) -> Fraction:
    return -sup_on(-f, iv)


def _pieces(f: PLFunction, iv: Interval):
    _check_inside(f, iv)
    if iv.lo == iv.hi:
        return
    yield from f.restrict(iv).segments()


def level_set(f: PLFunction, y: RatLike, iv: Interval, *, above: bool = True,
              strict: bool = True) -> IntervalSet:
    """``{x in iv : f(x) > y}`` and its three siblings (``>=``, ``<``, ``<=``).

    ``above=False`` flips the comparison.  Sets are returned up to null sets,
    so a level set that is a single point comes back empty.
    """
    y = as_rat(y)
    out: List[Interval] = []
    sgn = 1 if above else -1

    def ok(v: Fraction) -> bool:
        d = sgn * (v - y)
        return d > 0 if strict else d >= 0

    for x0, y0, x1, y1 in _pieces(f, iv):
        in0, in1 = ok(y0), ok(y1)
        if in0 and in1:
            out.append(Interval(x0, x1))
        elif in0 or in1:
            # y0 != y1 here, so the crossing is well defined
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            out.append(Interval(x0, xc) if in0 else Interval(xc, x1))
    return IntervalSet(out)


def superlevel(f: PLFunction, y: RatLike, iv: Interval) -> IntervalSet:
    """The set ``H_y = {x in iv : f(x) > y}``."""
    return level_set(f, y, iv, above=True, strict=True)


def preimage_measure(f: PLFunction, y: RatLike) -> Fraction:
    """Total length of the horizontal pieces of ``f`` at height ``y``."""
    y = as_rat(y)
    return sum((x1 - x0 for x0, y0, x1, y1 in f.segments() if y0 == y1 == y), Fraction(0))


def measure(s: IntervalSet) -> Fraction:
    return s.measure()


def density(e: IntervalSet, iv: Interval) -> Fraction:
    """``λ(E ∩ I) / λ(I)``; degenerate intervals are rejected."""
    if iv.hi <= iv.lo:
        raise ParameterError(f"density over degenerate interval {iv}")
    return e.measure_in(iv.lo, iv.hi) / (iv.hi - iv.lo)


def density_sequence(e: IntervalSet, x: RatLike, radii: Sequence[RatLike]) -> List[Fraction]:
    """Densities of ``e`` in the symmetric windows ``(x - r, x + r)``."""
    x = as_rat(x)
    rs = [as_rat(r) for r in radii]
    if any(r <= 0 for r in rs):
        raise ParameterError("radii must be positive")
    if any(b >= a for a, b in zip(rs, rs[1:])):
        raise ParameterError("radii must be strictly decreasing")
    return [density(e, Interval(x - r, x + r)) for r in rs]


def diffquot_set(f: PLFunction, x0: RatLike, iv: Interval) -> IntervalSet:
    """Points of ``iv`` where ``(f(x) - f(x0)) / (x - x0) >= 0``.

    To the right of ``x0`` this is ``f(x) >= f(x0)``, to the left it is
    ``f(x) <= f(x0)``.  The point ``x0`` itself is a null set and omitted.
    """
    x0 = as_rat(x0)
    _check_inside(f, iv)
    if x0 not in iv:
        raise DomainError(f"x0={x0} not in {iv}")
    c = f(x0)
    parts = IntervalSet()
    if x0 < iv.hi:
        parts = parts | level_set(f, c, Interval(x0, iv.hi), above=True, strict=False)
    if x0 > iv.lo:
        parts = parts | level_set(f, c, Interval(iv.lo, x0), above=False, strict=False)
    return parts


@dataclass(frozen=True)
class AffinePair:
    """Graph map ``(x, y) -> (T(x), S(y))`` with both maps affine.

    Applying the pair to ``f`` produces ``S ∘ f ∘ T⁻¹`` on ``T(domain f)``.
    The insertion of a seed into a decreasing piece ``[a, b]`` is the pair
    with ``T(t) = a + (b - a) t`` and ``S(y) = y f(a) + (1 - y) f(b)``; see
    :meth:`insertion`.
    """

    T_scale: Fraction
    T_shift: Fraction
    S_scale: Fraction
    S_shift: Fraction

    def __post_init__(self):
        for name in ("T_scale", "T_shift", "S_scale", "S_shift"):
            object.__setattr__(self, name, as_rat(getattr(self, name)))
        if self.T_scale == 0:
            raise ParameterError("T_scale must be nonzero")

    @classmethod
    def identity(cls) -> "AffinePair":
        return cls(1, 0, 1, 0)

    @classmethod
    def insertion(cls, a: RatLike, b: RatLike, fa: RatLike, fb: RatLike) -> "AffinePair":
        """Pair carrying a seed on ``[0, 1]`` (with seed(0)=1, seed(1)=0) onto
        the piece from ``(a, fa)`` to ``(b, fb)``."""
        a, b, fa, fb = map(as_rat, (a, b, fa, fb))
        return cls(b - a, a, fa - fb, fb)

    def T(self, x: RatLike) -> Fraction:
        return self.T_scale * as_rat(x) + self.T_shift

    def S(self, y: RatLike) -> Fraction:
        return self.S_scale * as_rat(y) + self.S_shift

    def T_inv(self, x: RatLike) -> Fraction:
        return (as_rat(x) - self.T_shift) / self.T_scale


def affine_transform(f: PLFunction, pair: AffinePair) -> PLFunction:
    """Image of the graph of ``f`` under ``pair``."""
    xs = [pair.T_scale * x + pair.T_shift for x in f.xs]
    ys = [pair.S_scale * y + pair.S_shift for y in f.ys]
    if pair.T_scale < 0:
        xs.reverse()
        ys.reverse()
    return PLFunction._raw(xs, ys)


def dq(p0: Point, p1: Point) -> Fraction:
    """Difference quotient ``(y1 - y0) / (x1 - x0)`` of two plane points."""
    x0, y0 = map(as_rat, p0)
    x1, y1 = map(as_rat, p1)
    if x0 == x1:
        raise ParameterError("difference quotient of points with equal x")
    return (y1 - y0) / (x1 - x0)
