"""Self-affine insertion constructions.

Level 0 is a seed ``s``; level ``n+1`` replaces every maximal decreasing
piece of level ``n`` by an endpoint-matched affine copy of ``s``.  Because
each seed starts and ends with an increasing piece, level ``n`` is also ``s``
with each decreasing piece replaced by a copy of level ``n-1``.  That second
description drives :func:`lazy_eval`, which costs ``O(n)`` affine steps.

Materialized levels are held as integer numerators over the common
denominators ``xden**(n+1)`` and ``yden**(n+1)``, where ``xden``/``yden``
are the knot-spacing and value denominators of the seed.  numpy does the
bulk work; int64 is used while the magnitudes provably fit and Python
integers (object arrays) otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .density import AffinePair, affine_transform, level_set
from .errors import DomainError, ParameterError, PreconditionError, ResourceError
from .intervals import Interval
from .plfunc import PLFunction
from .rational import RatLike, as_rat
from .seeds import FIXED_H, ORNSTEIN_G, SeedFunction

DEFAULT_CAP = 10**7
_INT64_SAFE = 2**62


# ---------------------------------------------------------------------------
# insertion
# ---------------------------------------------------------------------------


def decreasing_runs(f: PLFunction) -> List[Tuple[int, int]]:
    """Knot-index pairs ``(i, j)`` of the maximal decreasing runs of ``f``."""
    runs, ys = [], f.ys
    i, n = 0, len(ys)
    while i < n - 1:
        if ys[i + 1] < ys[i]:
            j = i + 1
            while j < n - 1 and ys[j + 1] < ys[j]:
                j += 1
            runs.append((i, j))
            i = j
        else:
            i += 1
    return runs


def insert_seed(f: PLFunction, seed: SeedFunction) -> PLFunction:
    """Replace each maximal decreasing piece of ``f`` by a copy of ``seed``."""
    runs = decreasing_runs(f)
    if not runs:
        return f
    xs, ys = [], []
    prev = 0
    for i, j in runs:
        xs.extend(f.xs[prev:i])
        ys.extend(f.ys[prev:i])
        copy = affine_transform(seed.base, AffinePair.insertion(f.xs[i], f.xs[j], f.ys[i], f.ys[j]))
        xs.extend(copy.xs[:-1])
        ys.extend(copy.ys[:-1])
        prev = j
    xs.extend(f.xs[prev:])
    ys.extend(f.ys[prev:])
    return PLFunction._raw(xs, ys)


# ---------------------------------------------------------------------------
# lazy construction and materialization
# ---------------------------------------------------------------------------


def _seed_grid(seed: SeedFunction) -> Tuple[int, int, Tuple[int, ...], Tuple[int, ...]]:
    """Common denominators and integer numerators of the seed's knots."""
    xden = lcm(*(x.denominator for x in seed.xs))
    yden = lcm(*(y.denominator for y in seed.ys))
    tn = tuple(int(x * xden) for x in seed.xs)
    yn = tuple(int(y * yden) for y in seed.ys)
    return xden, yden, tn, yn


def segment_counts(seed: SeedFunction, n: int) -> Tuple[int, int]:
    """``(increasing, decreasing)`` piece counts of level ``n``."""
    inc, dec = seed.n_increasing, seed.n_decreasing
    for _ in range(n):
        inc, dec = inc + dec * seed.n_increasing, dec * seed.n_decreasing
    return inc, dec


@dataclass(frozen=True)
class ScaledPL:
    """Knots ``(X[i] / Dx, Y[i] / Dy)`` with integer numerator arrays."""

    X: np.ndarray
    Y: np.ndarray
    Dx: int
    Dy: int

    def __len__(self) -> int:
        return len(self.X)

    @property
    def n_segments(self) -> int:
        return len(self.X) - 1

    def to_plfunction(self) -> PLFunction:
        Dx, Dy = self.Dx, self.Dy
        xs = [Fraction(int(v), Dx) for v in self.X]
        ys = [Fraction(int(v), Dy) for v in self.Y]
        return PLFunction._raw(xs, ys)

    def max_drop(self) -> Fraction:
        """Largest fall ``f(a) - f(b)`` over single decreasing pieces."""
        d = self.Y[:-1] - self.Y[1:]
        return Fraction(int(d.max()), self.Dy) if len(d) else Fraction(0)


@dataclass(frozen=True)
class _Step:
    """Output of one vectorized insertion with parent bookkeeping."""

    child: ScaledPL
    parent_seg: np.ndarray
    offset: np.ndarray
    decreasing: np.ndarray


def _fits_int64(*bounds: int) -> bool:
    return all(abs(b) < _INT64_SAFE for b in bounds)


def _insert_scaled(p: ScaledPL, seed: SeedFunction) -> _Step:
    xden, yden, tn, yn = _seed_grid(seed)
    X, Y = p.X, p.Y
    bound_x = int(abs(X).max()) * xden * 2 + 1
    bound_y = int(abs(Y).max()) * yden * 2 * (max(abs(v) for v in yn) + 1) + 1
    dtype = np.int64 if (X.dtype == np.int64 and _fits_int64(bound_x, bound_y)) else object
    if dtype is object:
        X, Y = X.astype(object), Y.astype(object)
    m = len(tn) - 1
    dec = Y[1:] < Y[:-1]
    counts = np.where(dec, m, 1)
    total = int(counts.sum())
    seg = np.repeat(np.arange(len(dec)), counts)
    starts = np.cumsum(counts) - counts
    off = np.arange(total) - np.repeat(starts, counts)
    t_arr = np.array(tn, dtype=dtype)[off]
    v_arr = np.array(yn, dtype=dtype)[off]
    A, B = X[seg], X[seg + 1]
    FA, FB = Y[seg], Y[seg + 1]
    d = dec[seg]
    # increasing pieces only contribute their left knot (offset 0, t=0, v=1)
    Xc = A * xden + np.where(d, t_arr * (B - A), 0)
    Yc = np.where(d, FB * yden + v_arr * (FA - FB), FA * yden)
    Xc = np.append(Xc, X[-1] * xden).astype(dtype)
    Yc = np.append(Yc, Y[-1] * yden).astype(dtype)
    return _Step(ScaledPL(Xc, Yc, p.Dx * xden, p.Dy * yden), seg, off, d)


def _seed_scaled(seed: SeedFunction) -> ScaledPL:
    xden, yden, tn, yn = _seed_grid(seed)
    return ScaledPL(np.array(tn, dtype=np.int64), np.array(yn, dtype=np.int64), xden, yden)


@dataclass(frozen=True)
class LazyConstruction:
    """A seed together with a depth; ``depth=None`` means point queries only."""

    seed: SeedFunction
    depth: Optional[int] = 0
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.depth is not None and self.depth < 0:
            raise ParameterError("depth must be non-negative")

    def projected_segments(self, n: Optional[int] = None) -> int:
        n = self.depth if n is None else n
        if n is None:
            raise ParameterError("infinite depth has no segment count")
        return sum(segment_counts(self.seed, n))

    def at(self, depth: Optional[int]) -> "LazyConstruction":
        return LazyConstruction(self.seed, depth, self.cap)

    def __call__(self, x: RatLike) -> Fraction:
        if self.depth is None:
            raise ParameterError("use enclose_h_infinity for the limit function")
        return lazy_eval(self, self.depth, x)


def _check_cap(c: LazyConstruction, n: int) -> None:
    if c.depth is None and n is None:
        raise ParameterError("cannot materialize the limit")
    count = c.projected_segments(n)
    if count > c.cap:
        raise ResourceError(
            f"level {n} of {c.seed.name} has {count} segments, above the cap {c.cap}")


def iter_scaled_levels(c: LazyConstruction, n: int):
    """Yield ``(level, ScaledPL, step)`` for levels ``0..n``; ``step`` is the
    insertion record that produced the level (None at level 0)."""
    _check_cap(c, n)
    cur = _seed_scaled(c.seed)
    yield 0, cur, None
    for k in range(1, n + 1):
        step = _insert_scaled(cur, c.seed)
        cur = step.child
        yield k, cur, step


def materialize_scaled(c: LazyConstruction) -> ScaledPL:
    if c.depth is None:
        raise ParameterError("cannot materialize the limit")
    last = None
    for _, last, _ in iter_scaled_levels(c, c.depth):
        pass
    return last


def materialize(c: LazyConstruction) -> PLFunction:
    """The exact level-``depth`` function (subject to the segment cap)."""
    return materialize_scaled(c).to_plfunction()


def lazy_eval(c: LazyConstruction | SeedFunction, n: int, x: RatLike) -> Fraction:
    """Value of level ``n`` at ``x`` by descent through nested seed copies."""
    seed = c.seed if isinstance(c, LazyConstruction) else c
    if n < 0:
        raise ParameterError("level must be non-negative")
    t = as_rat(x)
    if not 0 <= t <= 1:
        raise DomainError(f"x={t} outside [0, 1]")
    xs, ys = seed.xs, seed.ys
    up = seed.increasing
    scale, shift = Fraction(1), Fraction(0)
    for level in range(n, -1, -1):
        i = seed.base.segment_index(t)
        if level == 0 or up[i] or t == xs[i] or t == xs[i + 1]:
            return scale * seed(t) + shift
        fa, fb = ys[i], ys[i + 1]
        shift += scale * fb
        scale *= fa - fb
        t = (t - xs[i]) / (xs[i + 1] - xs[i])
    raise AssertionError("unreachable")


def lazy_segment(seed: SeedFunction, n: int, x: RatLike) -> Tuple[Interval, bool, int]:
    """Maximal piece of level ``n`` containing ``x``.

    Returns the piece, whether it is increasing, and the level at which it
    was created (increasing pieces created at level ``k`` never change).
    """
    t = as_rat(x)
    lo, width = Fraction(0), Fraction(1)
    xs, up = seed.xs, seed.increasing
    for level in range(n + 1):
        i = seed.base.segment_index(t)
        a, b = xs[i], xs[i + 1]
        if up[i] or level == n:
            return Interval(lo + width * a, lo + width * b), up[i], level
        lo, width = lo + width * a, width * (b - a)
        t = (t - a) / (b - a)
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# tabulated reports
# ---------------------------------------------------------------------------


@dataclass
class Table:
    """Exact tabular report; the CLI renders it as text or CSV."""

    kind: str
    columns: Tuple[str, ...]
    rows: List[Tuple] = field(default_factory=list)
    checks: List[Tuple[str, bool]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(flag for _, flag in self.checks)


# ---------------------------------------------------------------------------
# the original seed: divergence
# ---------------------------------------------------------------------------


def nested_intervals_g(n: int) -> List[Interval]:
    """``I_1 = [3/7, 4/7]`` and ``I_k = [a_{k-1} + 3/7^k, a_{k-1} + 4/7^k]``."""
    if n < 1:
        raise ParameterError("n must be at least 1")
    out, a = [], Fraction(0)
    for k in range(1, n + 1):
        iv = Interval(a + Fraction(3, 7**k), a + Fraction(4, 7**k))
        out.append(iv)
        a = iv.lo
    return out


@dataclass(frozen=True)
class DivergenceLevel:
    n: int
    interval: Interval  # I_{n+1}
    drop: Fraction  # g_n(right end) - g_n(left end) on I_{n+1}
    left_value: Fraction  # g_n at the left end of I_{n+1}
    left_value_reading_b: Fraction  # g_n at the left end of I_n (other reading)
    formula: Fraction  # 1 + sum_{i<=n} (1/3)(5/3)^i
    ratio: Optional[Fraction]  # |drop_n| / |drop_{n-1}|
    at_half: Optional[Fraction]  # g_n(1/2), when tabulated


@dataclass(frozen=True)
class DivergenceReport:
    levels: Tuple[DivergenceLevel, ...]
    half_strictly_increasing: bool
    half_exceeds_10: bool

    @property
    def ratios_exact(self) -> bool:
        return all(l.ratio == Fraction(5, 3) for l in self.levels if l.ratio is not None)

    @property
    def drops_match(self) -> bool:
        return all(l.drop == -Fraction(5, 3) ** (l.n + 1) for l in self.levels)

    @property
    def formula_reading_a(self) -> bool:
        return all(l.left_value == l.formula for l in self.levels)

    @property
    def formula_reading_b(self) -> bool:
        return all(l.left_value_reading_b == l.formula for l in self.levels)

    def table(self) -> Table:
        t = Table("divergence", ("n", "I_lo", "I_hi", "drop", "left_value", "formula",
                                 "left_value_at_I_n", "ratio", "g_n(1/2)"))
        for l in self.levels:
            t.rows.append((l.n, l.interval.lo, l.interval.hi, l.drop, l.left_value, l.formula,
                           l.left_value_reading_b, l.ratio, l.at_half))
        t.checks += [
            ("drop ratios equal 5/3", self.ratios_exact),
            ("drops equal -(5/3)^(n+1)", self.drops_match),
            ("left end of I_(n+1) matches partial sums", self.formula_reading_a),
        ]
        t.notes += [
            f"left end of I_n matches partial sums: {self.formula_reading_b}",
            f"g_n(1/2) strictly increasing: {self.half_strictly_increasing}",
            f"g_n(1/2) exceeds 10: {self.half_exceeds_10}",
        ]
        return t


def divergence_report(n_max: int, half_levels: Optional[int] = 64) -> DivergenceReport:
    """Drops and left-end values of ``g_n`` along the nested central pieces.

    Level ``n`` restricted to ``I_{n+1}``'s parent copy is ``S_n ∘ g`` in local
    coordinates with ``S_{n+1} = S_n ∘ (v ↦ -1/3 + 5/3 v)``, so each level is
    O(1).  The column ``g_n(1/2)`` is filled by :func:`lazy_eval` for
    ``n <= half_levels``.
    """
    if n_max < 0:
        raise ParameterError("n_max must be non-negative")
    if n_max > 10**4:
        raise ResourceError("divergence report is limited to 10^4 levels")
    g = ORNSTEIN_G
    fa, fb = g.ys[3], g.ys[4]
    scale, shift = Fraction(1), Fraction(0)
    ivs = nested_intervals_g(n_max + 1)
    levels: List[DivergenceLevel] = []
    formula = Fraction(1)
    prev_drop = None
    prev_left = Fraction(0)  # left end of I_0 := [0, 1]
    half_vals = []
    for n in range(n_max + 1):
        left = scale * fa + shift
        right = scale * fb + shift
        drop = right - left
        formula += Fraction(1, 3) * Fraction(5, 3) ** n
        reading_b = lazy_eval(g, n, ivs[n - 1].lo) if n >= 1 else g(prev_left)
        half = None
        if half_levels is not None and n <= half_levels:
            half = lazy_eval(g, n, Fraction(1, 2))
            half_vals.append(half)
        ratio = None if prev_drop is None else abs(drop) / abs(prev_drop)
        levels.append(DivergenceLevel(n, ivs[n], drop, left, reading_b, formula, ratio, half))
        prev_drop = drop
        shift += scale * fb
        scale *= fa - fb
    inc = all(b > a for a, b in zip(half_vals, half_vals[1:]))
    return DivergenceReport(tuple(levels), inc, any(v > 10 for v in half_vals))


# ---------------------------------------------------------------------------
# the repaired seed: convergence and enclosures
# ---------------------------------------------------------------------------


def chord_gap(seed: SeedFunction = FIXED_H) -> Fraction:
    """``C = max |s(x) - (1 - x)|`` over the knots of the seed."""
    return max(abs(y - (1 - x)) for x, y in zip(seed.xs, seed.ys))


@dataclass(frozen=True)
class ConvergenceLevel:
    n: int
    segments: int
    max_drop: Fraction
    sup_diff: Fraction  # ||s_{n+1} - s_n||
    bound: Fraction  # (3/4)^n C for the repaired seed; generally C * drop0^n


@dataclass(frozen=True)
class ConvergenceReport:
    seed: str
    C: Fraction
    levels: Tuple[ConvergenceLevel, ...]

    @property
    def drop_ratio(self) -> Fraction:
        return self.levels[0].max_drop

    @property
    def drops_geometric(self) -> bool:
        q = self.drop_ratio
        return all(l.max_drop == q ** (l.n + 1) for l in self.levels)

    @property
    def within_bound(self) -> bool:
        return all(l.sup_diff <= l.bound for l in self.levels)

    def table(self) -> Table:
        t = Table("convergence", ("n", "segments", "max_drop", "sup_diff", "bound"))
        for l in self.levels:
            t.rows.append((l.n, l.segments, l.max_drop, l.sup_diff, l.bound))
        t.checks += [(f"max_drop_n = ({self.drop_ratio})^(n+1)", self.drops_geometric),
                     ("sup_diff <= bound", self.within_bound)]
        t.notes.append(f"C = {self.C}")
        return t


def _sup_diff(step: _Step, parent: ScaledPL, seed: SeedFunction) -> Fraction:
    """``max |child - parent|`` over the child's knots, evaluated exactly.

    The parent is linear on each of its pieces, so at a child knot with
    parent piece ``(A, B)`` and local parameter ``t = tn/xden`` its value is
    ``FA + (FB - FA) t``.  Both functions are linear between child knots.
    """
    xden, yden, tn, _ = _seed_grid(seed)
    child = step.child
    seg, off = step.parent_seg, step.offset
    dtype = child.Y.dtype
    if dtype == np.int64 and not _fits_int64(int(abs(child.Y).max()) * xden * 4 + 1):
        dtype = object
    Y = parent.Y.astype(dtype)
    CY = child.Y.astype(dtype)
    FA, FB = Y[seg], Y[seg + 1]
    t_arr = np.where(step.decreasing, np.array(tn, dtype=dtype)[off], 0)
    # common denominator Dy_child * xden
    parent_val = FA * yden * xden + (FB - FA) * yden * t_arr
    diff = CY[:-1] * xden - parent_val
    num = int(abs(diff).max())
    return Fraction(num, child.Dy * xden)


def convergence_report(n_max: int, seed: SeedFunction = FIXED_H, cap: int = DEFAULT_CAP
                       ) -> ConvergenceReport:
    """Per level ``n <= n_max``: exact max drop and ``||s_{n+1} - s_n||``."""
    if n_max < 0:
        raise ParameterError("n_max must be non-negative")
    c = LazyConstruction(seed, n_max + 1, cap)
    C = chord_gap(seed)
    q = None
    levels: List[ConvergenceLevel] = []
    prev = None
    for k, cur, step in iter_scaled_levels(c, n_max + 1):
        if step is not None:
            n = k - 1
            drop = prev.max_drop()
            q = drop if q is None else q
            sd = _sup_diff(step, prev, seed)
            levels.append(ConvergenceLevel(n, prev.n_segments, drop, sd, C * q ** n))
        prev = cur
    return ConvergenceReport(seed.name, C, tuple(levels))


def tail_bound(N: int, seed: SeedFunction = FIXED_H) -> Fraction:
    """``sum_{k >= N} ||s_{k+1} - s_k|| <= C q^{N+1} / (1 - q)``, q the drop."""
    q = max(a - b for a, b in zip(seed.ys, seed.ys[1:]))
    if not q < 1:
        raise PreconditionError(f"seed {seed.name} does not contract (max drop {q})")
    return chord_gap(seed) * q ** (N + 1) / (1 - q)


def enclose_h_infinity(x: RatLike, N: int, seed: SeedFunction = FIXED_H) -> Interval:
    """Rational interval containing the limit value at ``x`` (and every
    level ``M >= N``)."""
    if N < 0:
        raise ParameterError("N must be non-negative")
    v = lazy_eval(seed, N, x)
    tail = tail_bound(N, seed)
    return Interval(v - tail, v + tail)


# ---------------------------------------------------------------------------
# property (b') certificates
# ---------------------------------------------------------------------------

PATH_ALIASES = {"first": "0", "central": "2", "last": "5"}


def parse_path(path: str | Sequence[int], seed: SeedFunction = FIXED_H) -> Tuple[int, ...]:
    """Digits naming decreasing pieces of the seed (0 = leftmost).

    Aliases: ``first``, ``central`` (the lower of the two middle pieces)
    and ``last``.  The sequence repeats periodically.
    """
    if isinstance(path, str):
        text = PATH_ALIASES.get(path, path)
        if not text or not text.isdigit():
            raise ParameterError(f"bad path {path!r}")
        digits = tuple(int(ch) for ch in text)
    else:
        digits = tuple(int(d) for d in path)
    k = seed.n_decreasing
    if not digits or any(not 0 <= d < k for d in digits):
        raise ParameterError(f"path digits must lie in 0..{k - 1}")
    return digits


def path_point(path: Sequence[int], seed: SeedFunction = FIXED_H) -> Fraction:
    """The point shared by all nested pieces chosen by the periodic path."""
    dec = seed.decreasing_indices
    scale, shift = Fraction(1), Fraction(0)
    for d in path:
        i = dec[d]
        a, b = seed.xs[i], seed.xs[i + 1]
        shift += scale * a
        scale *= b - a
    # fixed point of x -> shift + scale x
    return shift / (1 - scale)


@dataclass(frozen=True)
class BPrimeLevel:
    n: int
    interval: Interval  # I_n, normalized
    measure_unnormalized: Fraction  # 13 * |I_n|
    lower_bound: Fraction  # certified density over all increasing pieces
    neighbour_bound: Fraction  # only the pieces adjacent to I_{n+1}
    optimistic_bound: Fraction
    status: str  # certified | inconclusive | below
    needed_N: Optional[int] = None


@dataclass(frozen=True)
class BPrimeCertificate:
    path: Tuple[int, ...]
    x0: Fraction
    N: int
    y0_enclosure: Interval
    levels: Tuple[BPrimeLevel, ...]
    threshold: Fraction = Fraction(1, 26)

    @property
    def ok(self) -> bool:
        return all(l.status == "certified" for l in self.levels)

    @property
    def measures_ok(self) -> bool:
        return all(l.measure_unnormalized == Fraction(1, 13) ** (l.n - 1) for l in self.levels)

    def table(self) -> Table:
        t = Table("bprime", ("n", "I_lo", "I_hi", "m_I_unnormalized", "lower_bound",
                             "neighbour_bound", "status", "needed_N"))
        for l in self.levels:
            t.rows.append((l.n, l.interval.lo, l.interval.hi, l.measure_unnormalized,
                           l.lower_bound, l.neighbour_bound, l.status, l.needed_N))
        t.checks += [(f"lower_bound >= {self.threshold} at every level", self.ok),
                     ("m(I_n) = (1/13)^(n-1)", self.measures_ok)]
        t.notes += [f"x0 = {self.x0}", f"h_inf(x0) in [{self.y0_enclosure.lo}, {self.y0_enclosure.hi}]",
                    f"enclosure depth N = {self.N}"]
        return t


def _side_sets(seed: SeedFunction, t0: Fraction, v_left: Fraction, v_right: Fraction,
               only: Optional[Tuple[int, ...]] = None) -> Tuple[Fraction, Fraction]:
    """Measures (in seed coordinates) of the favourable parts of increasing
    pieces left of ``t0`` (``s <= v_left``) and right of it (``s >= v_right``).

    Also returns the sensitivity ``sum length/rise`` of the pieces used.
    """
    f = seed.base
    mass, sens = Fraction(0), Fraction(0)
    for i, up in enumerate(seed.increasing):
        if not up or (only is not None and i not in only):
            continue
        a, b = seed.xs[i], seed.xs[i + 1]
        piece = Interval(a, b)
        if b <= t0:
            mass += level_set(f, v_left, piece, above=False, strict=False).measure()
        elif a >= t0:
            mass += level_set(f, v_right, piece, above=True, strict=False).measure()
        else:
            continue
        sens += (b - a) / (seed.ys[i + 1] - seed.ys[i])
    return mass, sens


def bprime_check(x0_path: str | Sequence[int], n_max: int, N: int,
                 seed: SeedFunction = FIXED_H, threshold: RatLike = Fraction(1, 26)
                 ) -> BPrimeCertificate:
    """Certified lower bounds on ``Δ(E_n, I_n)`` for ``n = 0..n_max``.

    ``E_n`` is taken over the increasing pieces of the level-``n`` copy on
    ``I_n``, where the limit function is already final.  The unknown value
    at ``x0`` is replaced by its enclosure at depth ``N``: a point counts
    only if it is favourable against every value in that enclosure.
    """
    path = parse_path(x0_path, seed)
    threshold = as_rat(threshold)
    if n_max < 0:
        raise ParameterError("n_max must be non-negative")
    if N <= n_max:
        raise PreconditionError(f"enclosure depth N={N} must exceed n_max={n_max}")
    x0 = path_point(path, seed)
    y_enc = enclose_h_infinity(x0, N, seed)
    width = y_enc.length
    tail_of = lambda M: 2 * tail_bound(M, seed)  # noqa: E731
    dec = seed.decreasing_indices
    xscale = seed.xs[-1] - seed.xs[0]

    lo, w = Fraction(0), Fraction(1)  # I_n = [lo, lo + w]
    s_scale, s_shift = Fraction(1), Fraction(0)  # level-n copy: y = s_shift + s_scale * s(t)
    levels: List[BPrimeLevel] = []
    for n in range(n_max + 1):
        t0 = (x0 - lo) / w
        v_lo = (y_enc.lo - s_shift) / s_scale
        v_hi = (y_enc.hi - s_shift) / s_scale
        cert, sens = _side_sets(seed, t0, v_lo, v_hi)
        opt, _ = _side_sets(seed, t0, v_hi, v_lo)
        i_next = dec[path[n % len(path)]]
        neigh, _ = _side_sets(seed, t0, v_lo, v_hi, only=(i_next - 1, i_next + 1))
        needed = None
        if cert >= threshold:
            status = "certified"
        elif opt >= threshold:
            status = "inconclusive"
            # losing at most sens * (width in seed units) of mass
            M = N
            while opt - sens * tail_of(M) / s_scale < threshold and M < N + 10_000:
                M += 1
            needed = M
        else:
            status = "below"
        levels.append(BPrimeLevel(n, Interval(lo, lo + w), seed.n_segments * w / xscale, cert, neigh, opt,
                                  status, needed))
        # descend into the chosen decreasing piece
        a, b = seed.xs[i_next], seed.xs[i_next + 1]
        fa, fb = seed.ys[i_next], seed.ys[i_next + 1]
        lo, w = lo + w * a, w * (b - a)
        s_shift, s_scale = s_shift + s_scale * fb, s_scale * (fa - fb)
    return BPrimeCertificate(path, x0, N, y_enc, tuple(levels), threshold)
