"""Banach–Mazur game in ``C[0, 1]`` with the insertion strategy for P2.

P2 answers a ball ``B_r(c)`` by partitioning ``[0, 1]`` into ``m`` equal
pieces and, on each piece ``J``, replacing ``c`` by its chord plus a
vertically scaled copy of ``w = h - ℓ`` (``h`` the repaired seed on
``[0, 1]``, ``ℓ(t) = 1 - t``).  In local coordinates the new center is
``A (h(t) - (1 - t) + σ t) + const`` with ``|σ| <= 1``; since ``1 + σ >= 0``
the shear can only help the difference quotient, so every margin point of
``h`` is a margin point of the new center.

Ball centers are kept symbolic (:class:`PLCenter`, :class:`Perturbed`,
:class:`Inserted`) because the knot count of P2's answers grows with the
Lipschitz constant of P1's play and explodes after a few rounds.  Every
quantity the nesting argument needs (values on one piece, Lipschitz
bounds, distance bounds) is available exactly from the symbolic form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Dict, List, Optional, Tuple, Union

from .density import dq, inf_on, level_set, sup_on
from .errors import CertificateError, FormatError, ParameterError
from .formats import content_lines, dump_pl, read_pl
from .intervals import Interval
from .ornstein import chord_gap
from .plfunc import PLFunction
from .rational import RatLike, as_rat, format_rat, parse_rat
from .seeds import FIXED_H

SEED = FIXED_H
C_SEED = chord_gap(SEED)  # max |w|
W = PLFunction._raw(SEED.xs, [y - (1 - x) for x, y in zip(SEED.xs, SEED.ys)])
W_SLOPE = W.max_abs_slope()


# ---------------------------------------------------------------------------
# symbolic centers
# ---------------------------------------------------------------------------


class Center:
    """A continuous function on ``[0, 1]`` given symbolically."""

    def __call__(self, x: RatLike) -> Fraction:
        x = as_rat(x)
        memo = self._memo
        v = memo.get(x)
        if v is None:
            if not 0 <= x <= 1:
                raise ParameterError(f"x={x} outside [0, 1]")
            v = self._eval(x)
            memo[x] = v
        return v

    def _eval(self, x: Fraction) -> Fraction:  # pragma: no cover - abstract
        raise NotImplementedError

    def lipschitz(self) -> Fraction:  # pragma: no cover - abstract
        raise NotImplementedError

    def materialize(self, max_knots: int = 10**5) -> PLFunction:  # pragma: no cover
        raise NotImplementedError

    def restrict(self, J: Interval) -> PLFunction:
        """Exact PL form on ``J`` when the center is PL there with known knots."""
        return self.materialize().restrict(J)


@dataclass(frozen=True, eq=True)
class PLCenter(Center):
    f: PLFunction
    _memo: Dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def _eval(self, x):
        return self.f(x)

    def lipschitz(self) -> Fraction:
        return self.f.max_abs_slope()

    def materialize(self, max_knots: int = 10**5) -> PLFunction:
        return self.f


@dataclass(frozen=True, eq=True)
class Perturbed(Center):
    """``base + pert`` with ``pert`` a PL function on ``[0, 1]``."""

    base: Center
    pert: PLFunction
    _memo: Dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def _eval(self, x):
        return self.base(x) + self.pert(x)

    def lipschitz(self) -> Fraction:
        return self.base.lipschitz() + self.pert.max_abs_slope()

    def materialize(self, max_knots: int = 10**5) -> PLFunction:
        return self.base.materialize(max_knots) + self.pert


@dataclass(frozen=True, eq=True)
class Inserted(Center):
    """On ``J_i = [i/m, (i+1)/m]``: chord of ``base`` plus ``A · w`` rescaled."""

    base: Center
    m: int
    A: Fraction
    _memo: Dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def piece_index(self, x: Fraction) -> int:
        return min(int(x * self.m), self.m - 1)

    def piece(self, i: int) -> Interval:
        return Interval(Fraction(i, self.m), Fraction(i + 1, self.m))

    def _eval(self, x):
        i = self.piece_index(x)
        lo, hi = Fraction(i, self.m), Fraction(i + 1, self.m)
        t = (x - lo) * self.m
        c0, c1 = self.base(lo), self.base(hi)
        return c0 + (c1 - c0) * t + self.A * W(t)

    def restrict_piece(self, i: int) -> PLFunction:
        """Exact PL form on ``J_i`` (14 knots)."""
        lo = Fraction(i, self.m)
        c0, c1 = self.base(lo), self.base(Fraction(i + 1, self.m))
        xs = [lo + t / self.m for t in W.xs]
        ys = [c0 + (c1 - c0) * t + self.A * w for t, w in zip(W.xs, W.ys)]
        return PLFunction._raw(xs, ys)

    def shear(self, i: int) -> Fraction:
        """``σ`` on piece ``i``: chord rise over ``A``."""
        lo, hi = self.piece(i)
        return (self.base(hi) - self.base(lo)) / self.A

    def lipschitz(self) -> Fraction:
        return self.base.lipschitz() + self.A * self.m * W_SLOPE

    def distance_bound(self) -> Fraction:
        """Upper bound for ``||self - base||``: chord error plus ``A·C``."""
        return self.base.lipschitz() / self.m + self.A * C_SEED

    def materialize(self, max_knots: int = 10**5) -> PLFunction:
        if self.m * (len(W.xs) - 1) + 1 > max_knots:
            raise ParameterError(f"{self.m} pieces exceed the knot budget")
        base = self.base.materialize(max_knots)
        xs, ys = [], []
        for i in range(self.m):
            p = self.restrict_piece(i)
            xs.extend(p.xs[:-1])
            ys.extend(p.ys[:-1])
        xs.append(Fraction(1))
        ys.append(base(1))
        return PLFunction._raw(xs, ys)


def zero_center() -> PLCenter:
    return PLCenter(PLFunction.constant(0))


# ---------------------------------------------------------------------------
# balls, parameters, certified alpha
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    center: Center
    radius: Fraction

    def __post_init__(self):
        if self.radius <= 0:
            raise ParameterError("ball radius must be positive")


@dataclass(frozen=True)
class WitnessPair:
    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction


@dataclass(frozen=True)
class StrategyParams:
    """Everything P2 commits to in one move.

    ``partition`` is the uniform ``m``-piece partition; it is exposed as a
    property to avoid storing ``m`` intervals.
    """

    m: int
    A: Fraction
    mu: Fraction
    eta: Fraction
    delta: Fraction
    alpha: Fraction
    witnesses: Tuple[WitnessPair, ...] = ()

    @property
    def partition(self) -> List[Interval]:
        return [Interval(Fraction(i, self.m), Fraction(i + 1, self.m)) for i in range(self.m)]

    def invariant_checks(self, radius: Fraction) -> List[Tuple[str, bool]]:
        return [
            ("delta > 0", self.delta > 0),
            ("delta <= min(r/2, mu/4, eta/4)",
             self.delta <= min(radius / 2, self.mu / 4, self.eta / 4)),
            ("mu - 2 delta > 0", self.mu - 2 * self.delta > 0),
            ("eta - 2 delta > 0", self.eta - 2 * self.delta > 0),
            ("alpha > 0", self.alpha > 0),
        ]


# seed-coordinate margins: a quarter of the shortest rising piece, and half
# the least rise over that distance
ETA_T = min(b - a for (a, b), up in zip(zip(SEED.xs, SEED.xs[1:]), SEED.increasing) if up) / 4
MU_T = min(s for s in SEED.base.slopes() if s > 0) * ETA_T / 2


def _margin_mass(f: PLFunction, J: Interval, x0: Fraction, y0_hi: Fraction, y0_lo: Fraction,
                 x_right: Fraction, x_left: Fraction, mu: Fraction) -> Fraction:
    """``λ{x >= x_right : f >= y0_hi + mu} + λ{x <= x_left : f <= y0_lo - mu}`` in ``J``."""
    mass = Fraction(0)
    if x_right < J.hi:
        mass += level_set(f, y0_hi + mu, Interval(max(x_right, J.lo), J.hi),
                          above=True, strict=False).measure()
    if x_left > J.lo:
        mass += level_set(f, y0_lo - mu, Interval(J.lo, min(x_left, J.hi)),
                          above=False, strict=False).measure()
    return mass


@lru_cache(maxsize=None)
def certified_alpha(cells: int = 13 * 16) -> Fraction:
    """Half the minimum, over all ``t0 ∈ [0, 1]``, of the seed's margin mass.

    ``[0, 1]`` is cut into ``cells`` equal cells; on a cell ``[s, s']`` every
    ``t0`` sees at least the mass computed against the cell's extreme
    values and extreme offsets.  Halving gives a strict bound.
    """
    h = SEED.base
    worst = None
    for k in range(cells):
        cell = Interval(Fraction(k, cells), Fraction(k + 1, cells))
        lb = _margin_mass(h, Interval(0, 1), cell.lo, sup_on(h, cell), inf_on(h, cell),
                          cell.hi + ETA_T, cell.lo - ETA_T, MU_T)
        worst = lb if worst is None else min(worst, lb)
    if worst <= 0:
        raise CertificateError("seed margin mass is not bounded away from zero")
    return worst / 2


def margin_density(f: PLFunction, J: Interval, x0: RatLike, mu: Fraction, eta: Fraction
                   ) -> Fraction:
    """Exact ``Δ(E^mu_{x0} \\ B_eta(x0), J)`` for ``f`` PL on ``J``."""
    x0 = as_rat(x0)
    y0 = f(x0)
    return _margin_mass(f, J, x0, y0, y0, x0 + eta, x0 - eta, mu) / J.length


# ---------------------------------------------------------------------------
# moves
# ---------------------------------------------------------------------------


def _corner_dqs(w: WitnessPair, delta: Fraction) -> List[Fraction]:
    out = []
    for dx0 in (-delta, delta):
        for dy0 in (-delta, delta):
            for dx1 in (-delta, delta):
                for dy1 in (-delta, delta):
                    out.append(dq((w.x0 + dx0, w.y0 + dy0), (w.x1 + dx1, w.y1 + dy1)))
    return out


def _witness(f: PLFunction, J: Interval, x0: Fraction, mu: Fraction, eta: Fraction
             ) -> Optional[WitnessPair]:
    y0 = f(x0)
    if x0 + eta < J.hi:
        right = level_set(f, y0 + mu, Interval(x0 + eta, J.hi), above=True, strict=False)
        if right:
            x1 = max(right.parts, key=lambda p: p.length).midpoint
            return WitnessPair(x0, x1, y0, f(x1))
    if x0 - eta > J.lo:
        left = level_set(f, y0 - mu, Interval(J.lo, x0 - eta), above=False, strict=False)
        if left:
            x1 = max(left.parts, key=lambda p: p.length).midpoint
            return WitnessPair(x0, x1, y0, f(x1))
    return None


def p2_move(b: Ball) -> Tuple[Ball, StrategyParams]:
    """The insertion answer to ``b``: a ball nested in ``b`` plus its parameters."""
    r = b.radius
    L = b.center.lipschitz()
    A = r / (4 * C_SEED)
    step = min(r / 8, A)
    m = max(1, ceil(L / step)) if L > 0 else 1
    g = Inserted(b.center, m, A)
    mu = A * MU_T
    eta = ETA_T / m
    delta = min(r / 2, mu / 4, eta / 4)
    alpha = certified_alpha()
    witnesses = []
    for i in sorted({0, m // 2, m - 1}):
        J = g.piece(i)
        w = _witness(g.restrict_piece(i), J, J.midpoint, mu, eta)
        if w is not None:
            witnesses.append(w)
    params = StrategyParams(m, A, mu, eta, delta, alpha, tuple(witnesses))
    return Ball(g, delta), params


def p1_random(b: Ball, rng_seed: int, grid: int = 1000) -> Ball:
    """Random PL perturbation of sup-norm ``<= r/4``; new radius ``r/4``."""
    rng = random.Random(rng_seed)
    k = rng.randint(2, 8)
    q = b.radius / 4
    knots = [(Fraction(i, k - 1), q * Fraction(rng.randint(-grid, grid), grid)) for i in range(k)]
    return Ball(Perturbed(b.center, PLFunction(knots)), q)


def p1_monotone_shift(b: Ball, rng_seed: int = 0) -> Ball:
    """Adversary tilting the center upward by a linear ramp of height ``r/4``."""
    q = b.radius / 4
    return Ball(Perturbed(b.center, PLFunction([(0, -q), (1, q)])), q)


ADVERSARIES = {"random": p1_random, "monotone-shift": p1_monotone_shift}


# ---------------------------------------------------------------------------
# transcripts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Play:
    role: str  # "P1" or "P2"
    ball: Ball
    distance_bound: Fraction  # upper bound on ||center - previous center||
    distance_exact: bool
    params: Optional[StrategyParams] = None


@dataclass(frozen=True)
class SampleRecord:
    move: int  # index into plays
    piece: int
    x0: Fraction
    density: Fraction
    alpha: Fraction

    @property
    def ok(self) -> bool:
        return self.density > self.alpha


@dataclass(frozen=True)
class GameTranscript:
    plays: Tuple[Play, ...]
    samples: Tuple[SampleRecord, ...] = ()
    start: Ball = field(default_factory=lambda: Ball(zero_center(), Fraction(1)))

    @property
    def radii(self) -> List[Fraction]:
        return [p.ball.radius for p in self.plays]

    def nesting_checks(self) -> List[Tuple[str, Fraction, Fraction, bool]]:
        out = []
        prev = self.start
        for k, p in enumerate(self.plays):
            lhs = p.distance_bound + p.ball.radius
            out.append((f"nest@{k}", lhs, prev.radius, lhs < prev.radius))
            prev = p.ball
        return out

    def dq_checks(self) -> List[Tuple[str, Fraction, bool]]:
        out = []
        for k, p in enumerate(self.plays):
            if p.params is None:
                continue
            for w in p.params.witnesses:
                worst = min(_corner_dqs(w, p.params.delta))
                out.append((f"dq@{k}", worst, worst > 0))
        return out

    def all_checks(self) -> List[Tuple[str, bool]]:
        checks = [(name, ok) for name, _, _, ok in self.nesting_checks()]
        checks += [(name, ok) for name, _, ok in self.dq_checks()]
        checks.append(("radii strictly decreasing",
                       all(b < a for a, b in zip([self.start.radius] + self.radii, self.radii))))
        for k, p in enumerate(self.plays):
            if p.params is not None:
                checks += [(f"{n}@{k}", ok) for n, ok in p.params.invariant_checks(
                    self.plays[k - 1].ball.radius if k else self.start.radius)]
                if p.params.witnesses == ():
                    checks.append((f"witness@{k}", False))
        checks += [(f"sample@{s.move}:{s.piece}", s.ok) for s in self.samples]
        return checks

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.all_checks())


def _sample_pieces(g: Inserted, rng: random.Random, count: int) -> List[int]:
    picks = {0, g.m - 1}
    while len(picks) < min(count, g.m):
        picks.add(rng.randrange(g.m))
    return sorted(picks)


def _sample_report(plays: List[Play], rng_seed: int, per_move: int) -> List[SampleRecord]:
    """Margin densities of the last P2 center at sampled points."""
    rng = random.Random(rng_seed ^ 0x5EED)
    for k in range(len(plays) - 1, -1, -1):
        p = plays[k]
        if p.params is None:
            continue
        g = p.ball.center
        out = []
        for i in _sample_pieces(g, rng, per_move):
            J = g.piece(i)
            f = g.restrict_piece(i)
            for x0 in (J.lo, J.midpoint, J.lo + J.length * Fraction(rng.randint(0, 999), 1000), J.hi):
                d = margin_density(f, J, x0, p.params.mu, p.params.eta)
                out.append(SampleRecord(k, i, x0, d, p.params.alpha))
        return out
    return []


def replay(moves: List[Tuple[str, object]]) -> GameTranscript:
    """Rebuild a transcript from P1 perturbations and P2 parameter choices."""
    prev = Ball(zero_center(), Fraction(1))
    plays = []
    for role, data in moves:
        if role == "P1":
            pert, radius = data
            ball = Ball(Perturbed(prev.center, pert), radius)
            plays.append(Play("P1", ball, pert.max_abs(), True))
        else:
            ball, params = p2_move(prev)
            if (params.m, params.A, params.delta) != (data.m, data.A, data.delta):
                raise FormatError("recorded P2 parameters do not match the strategy")
            plays.append(Play("P2", ball, ball.center.distance_bound(), False, params))
        prev = ball
    return GameTranscript(tuple(plays))


def simulate(rounds: int, rng_seed: int, adversary: str = "random",
             samples_per_move: int = 4) -> GameTranscript:
    """Alternate P1 (``adversary``) and P2 moves from the unit ball at 0."""
    if rounds < 1:
        raise ParameterError("rounds must be at least 1")
    try:
        p1 = ADVERSARIES[adversary]
    except KeyError:
        raise ParameterError(f"unknown adversary {adversary!r}") from None
    rng = random.Random(rng_seed)
    prev = Ball(zero_center(), Fraction(1))
    plays: List[Play] = []
    for _ in range(rounds):
        b1 = p1(prev, rng.getrandbits(32))
        plays.append(Play("P1", b1, b1.center.pert.max_abs(), True))
        b2, params = p2_move(b1)
        plays.append(Play("P2", b2, b2.center.distance_bound(), False, params))
        prev = b2
    samples = _sample_report(plays, rng_seed, samples_per_move)
    return GameTranscript(tuple(plays), tuple(samples))


# ---------------------------------------------------------------------------
# limit certification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaleRecord:
    move: int
    piece: int
    x0: Fraction
    mu: Fraction
    slack: Fraction  # mu - 2 D_k
    density: Fraction
    alpha: Fraction
    decreasing_piece: bool

    @property
    def ok(self) -> bool:
        return self.slack > 0 and self.density > self.alpha and self.decreasing_piece


@dataclass(frozen=True)
class LimitReport:
    records: Tuple[ScaleRecord, ...]
    shear_ok: bool

    @property
    def ok(self) -> bool:
        return self.shear_ok and all(r.ok for r in self.records)

    @property
    def scales(self) -> List[int]:
        return sorted({r.move for r in self.records})


def verify_limit_scales(t: GameTranscript, samples: int, rng_seed: int = 0) -> LimitReport:
    """Certify, for sampled points at every P2 scale, that every function in
    the final ball has a DQ-positive set of density above that move's alpha.

    Any ``φ`` in the final ball is within ``D_k`` (later distance bounds
    plus the final radius) of the move-``k`` center ``g``, so
    ``g(x) - g(x0) >= mu`` forces ``φ(x) - φ(x0) >= mu - 2 D_k``.
    """
    rng = random.Random(rng_seed)
    plays = t.plays
    final_r = plays[-1].ball.radius
    records = []
    shear_ok = True
    for k, p in enumerate(plays):
        if p.params is None:
            continue
        D = final_r + sum(q.distance_bound for q in plays[k + 1:])
        g: Inserted = p.ball.center
        prm = p.params
        pieces = _sample_pieces(g, rng, samples)
        for i in pieces:
            if abs(g.shear(i)) > 1:
                shear_ok = False
            J = g.piece(i)
            f = g.restrict_piece(i)
            dec = any(s < 0 for s in f.slopes())
            x0 = J.lo + J.length * Fraction(rng.randint(0, 10**6), 10**6)
            d = margin_density(f, J, x0, prm.mu, prm.eta)
            rec = ScaleRecord(k, i, x0, prm.mu, prm.mu - 2 * D, d, prm.alpha, dec)
            if not rec.ok:
                raise CertificateError(f"scale check failed: {rec}")
            records.append(rec)
    return LimitReport(tuple(records), shear_ok)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def dump_transcript(t: GameTranscript) -> str:
    lines = [f"GAME v1 {len(t.plays)}"]
    for p in t.plays:
        lines.append(f"{p.role} {format_rat(p.ball.radius)}")
        if p.role == "P1":
            lines.append(dump_pl(p.ball.center.pert).rstrip("\n"))
        else:
            q = p.params
            lines.append("STRAT " + " ".join([str(q.m)] + [format_rat(v) for v in
                                              (q.A, q.mu, q.eta, q.delta, q.alpha)]))
    return "\n".join(lines) + "\n"


def load_transcript(text: str) -> GameTranscript:
    lines = content_lines(text)
    if not lines:
        raise FormatError("empty transcript")
    head = lines[0].split()
    if len(head) != 3 or head[:2] != ["GAME", "v1"] or not head[2].isdigit():
        raise FormatError(f"bad transcript header {lines[0]!r}")
    n = int(head[2])
    rest = lines[1:]
    moves = []
    for _ in range(n):
        if not rest:
            raise FormatError("transcript truncated")
        tag = rest[0].split()
        if len(tag) != 2 or tag[0] not in ("P1", "P2"):
            raise FormatError(f"bad play line {rest[0]!r}")
        radius = parse_rat(tag[1])
        rest = rest[1:]
        if tag[0] == "P1":
            pert, rest = read_pl(rest)
            moves.append(("P1", (pert, radius)))
        else:
            if not rest or not rest[0].startswith("STRAT "):
                raise FormatError("P2 play without STRAT line")
            f = rest[0].split()[1:]
            if len(f) != 6 or not f[0].isdigit():
                raise FormatError(f"bad STRAT line {rest[0]!r}")
            vals = [parse_rat(v) for v in f[1:]]
            moves.append(("P2", StrategyParams(int(f[0]), *vals)))
            rest = rest[1:]
    if rest:
        raise FormatError("trailing data after transcript")
    t = replay(moves)
    for p, (role, data) in zip(t.plays, moves):
        if p.ball.radius != (data[1] if role == "P1" else data.delta):
            raise FormatError(f"{role} radius mismatch")
        if role == "P2" and (p.params.mu, p.params.eta, p.params.alpha) != (data.mu, data.eta, data.alpha):
            raise FormatError("P2 parameter mismatch")
    return t
