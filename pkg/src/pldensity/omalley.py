"""High-density components and the nested search for an approximate maximum.

The central object is ``G_ε(H, I)``: the union of all open subintervals
``J`` of ``I`` on which ``H`` has density greater than ``ε``.  With

    F(t) = λ(H ∩ [I.lo, t]) - ε (t - I.lo)

an interval ``(s, t)`` qualifies iff ``F(t) > F(s)``, so a point ``x`` is
covered iff the running minimum of ``F`` on ``[I.lo, x]`` lies strictly
below the running maximum of ``F`` on ``[x, I.hi]``.  Both envelopes are
piecewise linear, and the components come out with exact rational
endpoints.

On top of that sit :func:`omalley_step` (one application of the lemma that
produces ``(y1, (a1, b1))`` from ``(y0, (a0, b0))``), the iterated search
:func:`approx_max_search`, and the increasing/witness dichotomy
:func:`monotonicity_witness`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .density import density, sup_on, superlevel
from .errors import CertificateError, FormatError, ParameterError, PreconditionError
from .intervals import Interval, IntervalSet
from .plfunc import PLFunction
from .rational import RatLike, as_rat, format_rat, parse_rat

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# G_eps components
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentList:
    """Connected components of ``G_ε(H, I)``, sorted left to right."""

    components: Tuple[Interval, ...]
    query: Interval
    eps: Fraction

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i) -> Interval:
        return self.components[i]

    def measure(self) -> Fraction:
        return sum((c.length for c in self.components), Fraction(0))

    def as_set(self) -> IntervalSet:
        return IntervalSet(self.components)

    def largest(self) -> Interval:
        """Component of maximal length; the leftmost one on ties."""
        best = self.components[0]
        for c in self.components[1:]:
            if c.length > best.length:
                best = c
        return best


def excess_function(h: IntervalSet, iv: Interval, eps: Fraction) -> PLFunction:
    """``F(t) = λ(H ∩ [lo, t]) - ε (t - lo)`` on ``iv`` as a PL function."""
    lo, hi = iv.lo, iv.hi
    xs, ys = [lo], [Fraction(0)]
    mass = Fraction(0)
    for p in h.clip(lo, hi):
        if p.lo > xs[-1]:
            xs.append(p.lo)
            ys.append(mass - eps * (p.lo - lo))
        mass += p.length
        xs.append(p.hi)
        ys.append(mass - eps * (p.hi - lo))
    if xs[-1] < hi:
        xs.append(hi)
        ys.append(mass - eps * (hi - lo))
    return PLFunction._raw(xs, ys)


def _running_min(xs: Sequence[Fraction], ys: Sequence[Fraction]):
    out_x, out_y = [xs[0]], [ys[0]]
    cur = ys[0]
    for i in range(1, len(xs)):
        x0, y0, x1, y1 = xs[i - 1], ys[i - 1], xs[i], ys[i]
        if y1 >= cur:
            out_x.append(x1)
            out_y.append(cur)
            continue
        if y0 > cur:
            xc = x0 + (cur - y0) * (x1 - x0) / (y1 - y0)
            out_x.append(xc)
            out_y.append(cur)
        out_x.append(x1)
        out_y.append(y1)
        cur = y1
    return out_x, out_y


def prefix_min(f: PLFunction) -> PLFunction:
    """``x -> min f[lo, x]``."""
    xs, ys = _running_min(f.xs, f.ys)
    return PLFunction(zip(xs, ys))


def suffix_max(f: PLFunction) -> PLFunction:
    """``x -> max f[x, hi]``, via the running minimum of the mirrored graph."""
    xs, ys = _running_min([-x for x in reversed(f.xs)], [-y for y in reversed(f.ys)])
    return PLFunction(zip((-x for x in reversed(xs)), (-y for y in reversed(ys))))


def _check_eps(eps: Fraction) -> None:
    if not 0 < eps < 1:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")


def g_epsilon(h: IntervalSet, iv: Interval, eps: RatLike) -> ComponentList:
    """Components of the union of open ``J ⊆ iv`` with ``Δ(H, J) > eps``."""
    eps = as_rat(eps)
    _check_eps(eps)
    if iv.length <= 0 or h.measure_in(iv.lo, iv.hi) == 0:
        return ComponentList((), iv, eps)
    F = excess_function(h, iv, eps)
    gap = suffix_max(F) - prefix_min(F)
    comps = superlevel(gap, 0, iv)
    return ComponentList(comps.parts, iv, eps)


def max_straddling_density(h: IntervalSet, iv: Interval, p: RatLike) -> Optional[Fraction]:
    """Supremum of ``Δ(H, (s, t))`` over open ``(s, t) ⊆ iv`` containing ``p``.

    For a fixed right end the chord slope of the cumulative measure is
    monotone along each linear piece, so the supremum is attained with both
    ends at breakpoints (or at ``p`` itself, as a limit).  Returns None when
    ``p`` is not interior to ``iv``: then no such interval exists.
    """
    p = as_rat(p)
    if not iv.lo < p < iv.hi:
        return None
    pts = {iv.lo, iv.hi, p}
    for q in h.clip(iv.lo, iv.hi):
        pts.add(q.lo)
        pts.add(q.hi)
    left = sorted(x for x in pts if x <= p)
    right = sorted(x for x in pts if x >= p)
    cum = {x: h.measure_in(iv.lo, x) for x in pts}
    best = Fraction(0)
    for s in left:
        for t in right:
            if s < t:
                d = (cum[t] - cum[s]) / (t - s)
                if d > best:
                    best = d
    return best


@dataclass(frozen=True)
class BoundCheck:
    lhs: Fraction
    rhs: Fraction
    ok: bool


def g_epsilon_measure_bound_check(h: IntervalSet, iv: Interval, eps: RatLike) -> BoundCheck:
    """``λ(G_ε(H, I)) <= 2 λ(H ∩ I) / ε``, both sides exact."""
    eps = as_rat(eps)
    comps = g_epsilon(h, iv, eps)
    lhs = comps.measure()
    rhs = 2 * h.measure_in(iv.lo, iv.hi) / eps
    return BoundCheck(lhs, rhs, lhs <= rhs)


# ---------------------------------------------------------------------------
# one step of the lemma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ItemCheck:
    item: str
    lhs: Fraction
    relation: str
    rhs: Fraction
    ok: bool

    def __str__(self) -> str:
        flag = "ok" if self.ok else "FAILED"
        return f"({self.item}) {self.lhs} {self.relation} {self.rhs}: {flag}"


_RELATIONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def _item(name: str, lhs, rel: str, rhs) -> ItemCheck:
    return ItemCheck(name, lhs, rel, rhs, _RELATIONS[rel](lhs, rhs))


def lemma_items(f: PLFunction, a0, b0, y0, a1, b1, y1, eps) -> Tuple[ItemCheck, ...]:
    """Evaluate the six conclusions of the lemma for a candidate answer.

    Item 1 is split in two (left and right strictness); item 6 is checked
    separately at both endpoints by exact maximisation over straddling
    intervals.  A seventh record confirms that ``(a1, b1)`` is a component
    of ``G_ε(H_{y1}, (a0, b0))``.
    """
    a0, b0, y0, a1, b1, y1, eps = map(as_rat, (a0, b0, y0, a1, b1, y1, eps))
    outer = Interval(a0, b0)
    h0 = superlevel(f, y0, outer)
    h1 = superlevel(f, y1, outer)
    s_left = max_straddling_density(h1, outer, a1)
    s_right = max_straddling_density(h1, outer, b1)
    items = [
        _item("1L", a0, "<", a1),
        _item("1R", b1, "<", b0),
        _item("2", b1 - a1, "<", (b0 - a0) / 2),
        _item("3", max(f(a0), f(b0), y0), "<", y1),
        _item("4", max(f(a1), f(b1)), "<=", y1),
        _item("5", density(h0, Interval(a1, b1)), ">", HALF),
        _item("6L", s_left if s_left is not None else Fraction(0), "<=", eps),
        _item("6R", s_right if s_right is not None else Fraction(0), "<=", eps),
    ]
    if 0 < eps < 1:
        comps = g_epsilon(h1, outer, eps).components
        hit = Fraction(int(Interval(a1, b1) in comps))
    else:
        hit = Fraction(0)
    items.append(_item("component", hit, ">=", Fraction(1)))
    return tuple(items)


@dataclass(frozen=True)
class InnerStage:
    """One pass of the inner recursion: level ``r`` and component ``(c, d)``."""

    r: Fraction
    c: Fraction
    d: Fraction
    alpha: Fraction
    delta: Fraction
    target: Fraction
    g_measure: Fraction


@dataclass(frozen=True)
class LemmaStepResult:
    """``(y1, (a1, b1))`` together with the checked conclusions."""

    a0: Fraction
    b0: Fraction
    y0: Fraction
    eps: Fraction
    y1: Fraction
    a1: Fraction
    b1: Fraction
    alpha: Fraction
    delta: Fraction
    inner: Tuple[InnerStage, ...]
    items: Tuple[ItemCheck, ...]

    @property
    def ok(self) -> bool:
        return all(it.ok for it in self.items)

    @property
    def interval(self) -> Interval:
        return Interval(self.a1, self.b1)

    def recheck(self, f: PLFunction) -> Tuple[ItemCheck, ...]:
        """Recompute every item from scratch for ``f``."""
        return lemma_items(f, self.a0, self.b0, self.y0, self.a1, self.b1, self.y1, self.eps)


def _anchored_radius(h: IntervalSet, c: Fraction, d: Fraction, level: Fraction) -> Fraction:
    """First ``t > 0`` with ``λ(h ∩ [c, c+t]) >= level·t``, capped at ``d - c``.

    Requires ``c`` to lie outside ``h`` locally, so the excess starts out
    negative and every anchored interval shorter than the result has
    density below ``level``.
    """
    t0, k0 = Fraction(0), Fraction(0)
    pos = c
    pieces = []
    for p in h.clip(c, d):
        if p.lo > pos:
            pieces.append((p.lo - c, -level))
        pieces.append((p.hi - c, 1 - level))
        pos = p.hi
    if pos < d:
        pieces.append((d - c, -level))
    for t1, slope in pieces:
        k1 = k0 + slope * (t1 - t0)
        if t0 > 0 and k1 >= 0:
            return t0 - k0 / slope
        t0, k0 = t1, k1
    return d - c


def _mirror(h: IntervalSet, c: Fraction, d: Fraction) -> IntervalSet:
    return IntervalSet(Interval(c + d - p.hi, c + d - p.lo) for p in h.clip(c, d))


def anchored_delta(f: PLFunction, alpha: Fraction, c: Fraction, d: Fraction,
                   eps: Fraction) -> Fraction:
    """Exact ``δ`` for which intervals in ``[c, d]`` anchored at ``c`` or ``d``
    with length ``< δ`` have ``Δ(H_α, ·) < ε/2``."""
    h = superlevel(f, alpha, Interval(c, d))
    level = eps / 2
    return min(_anchored_radius(h, c, d, level), _anchored_radius(_mirror(h, c, d), c, d, level))


def _select_level(f: PLFunction, c: Fraction, d: Fraction, alpha: Fraction, s: Fraction,
                  eps: Fraction, target: Fraction, max_probes: int = 4000):
    iv = Interval(c, d)
    gap = s - alpha
    for j in range(1, max_probes + 1):
        y = s - gap / (2 ** j)
        comps = g_epsilon(superlevel(f, y, iv), iv, eps)
        m = comps.measure()
        if m < target and len(comps):
            return y, comps, m
    raise PreconditionError("level search did not terminate; is f flat near its maximum?")


def _require_step_preconditions(f: PLFunction, a0, b0, y0, eps) -> Fraction:
    if not a0 < b0:
        raise PreconditionError(f"need a0 < b0, got [{a0}, {b0}]")
    if eps <= 0:
        raise ParameterError("eps must be positive")
    fr = f.restrict(Interval(a0, b0))
    flats = fr.flat_segments()
    if flats:
        raise PreconditionError(f"flat segment {flats[0]} at height {fr(flats[0].lo)}")
    s0 = sup_on(f, Interval(a0, b0))
    if not s0 > max(f(a0), f(b0)):
        raise PreconditionError("sup on [a0, b0] is attained at an endpoint (f monotone there?)")
    if not y0 < s0:
        raise PreconditionError(f"need y0 < sup = {s0}")
    return s0


def omalley_step(f: PLFunction, a0: RatLike, b0: RatLike, y0: RatLike, eps: RatLike,
                 max_inner: int = 500) -> LemmaStepResult:
    """Find ``y1 > y0`` and a component ``(a1, b1)`` satisfying items (1)-(6).

    Follows the constructive proof: fix ``α`` halfway between
    ``max(f(a0), f(b0), y0)`` and ``sup f``, compute the anchored ``δ``,
    raise the level until ``G_ε`` is smaller than ``min(δ, half-length)``,
    and descend through components until ``H_{y0}`` has density above 1/2.
    """
    a0, b0, y0, eps = map(as_rat, (a0, b0, y0, eps))
    _require_step_preconditions(f, a0, b0, y0, eps)
    # G_eps needs eps < 1; a smaller tolerance only strengthens item (6)
    eps_g = eps if eps < 1 else HALF
    h_y0 = superlevel(f, y0, Interval(a0, b0))

    c, d, r = a0, b0, y0
    inner: List[InnerStage] = []
    for _ in range(max_inner):
        s = sup_on(f, Interval(c, d))
        alpha = (max(f(c), f(d), r) + s) / 2
        delta = anchored_delta(f, alpha, c, d, eps_g)
        target = min(delta, (d - c) / 2)
        r_new, comps, m = _select_level(f, c, d, alpha, s, eps_g, target)
        comp = comps.largest()
        if not (c < comp.lo and comp.hi < d and max(f(c), f(d), r) < r_new
                and max(f(comp.lo), f(comp.hi)) <= r_new):
            raise CertificateError(f"inner recursion broke an invariant at {comp}")
        inner.append(InnerStage(r_new, comp.lo, comp.hi, alpha, delta, target, m))
        c, d, r = comp.lo, comp.hi, r_new
        if density(h_y0, comp) > HALF:
            break
    else:
        raise PreconditionError("inner recursion did not reach density 1/2")

    items = lemma_items(f, a0, b0, y0, c, d, r, eps)
    res = LemmaStepResult(a0, b0, y0, eps, r, c, d, inner[0].alpha, inner[0].delta,
                          tuple(inner), items)
    if not res.ok:
        bad = "; ".join(str(it) for it in items if not it.ok)
        raise CertificateError(f"lemma items failed: {bad}")
    return res


# ---------------------------------------------------------------------------
# nested search and the dichotomy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StrictIncrease:
    """No approximate maximum is needed: ``f(x1) < f(x2)`` (or f increases)."""

    x1: Fraction
    x2: Fraction
    f1: Fraction
    f2: Fraction
    reason: str = "no approximate maximum required"


@dataclass(frozen=True)
class Stage:
    k: int
    a: Fraction
    b: Fraction
    y: Fraction
    step: Optional[LemmaStepResult] = field(default=None, compare=False)

    @property
    def eps(self) -> Optional[Fraction]:
        return stage_eps(self.k) if self.k else None


def stage_eps(k: int) -> Fraction:
    """Density tolerance used at stage ``k >= 1``.

    ``1/(k+1)`` rather than ``1/k``: at ``ε = 1`` no interval qualifies, and a
    smaller tolerance only strengthens item (6).
    """
    return Fraction(1, k + 1)


@dataclass(frozen=True)
class MaxSearchCertificate:
    """Nested intervals ``(a_k, b_k)`` and levels ``y_k`` around a point ``x0``.

    ``branch`` is ``"nested"`` for the full construction, ``"flat"`` when a
    horizontal piece supplies the point directly, and ``"endpoint"`` when
    the left end already carries the maximum.  The last two hold a single
    degenerate stage ``[x0, x0]``.
    """

    a: Fraction
    b: Fraction
    branch: str
    stages: Tuple[Stage, ...]
    enclosure: Interval

    @property
    def intervals(self) -> List[Interval]:
        return [Interval(s.a, s.b) for s in self.stages]

    @property
    def levels(self) -> List[Fraction]:
        return [s.y for s in self.stages]

    @property
    def width(self) -> Fraction:
        return self.enclosure.length

    def structural_checks(self) -> List[ItemCheck]:
        out = []
        for prev, cur in zip(self.stages, self.stages[1:]):
            out.append(_item(f"i@{cur.k}L", prev.a, "<", cur.a))
            out.append(_item(f"i@{cur.k}R", cur.b, "<", prev.b))
            out.append(_item(f"ii@{cur.k}", cur.b - cur.a, "<", (prev.b - prev.a) / 2))
            out.append(_item(f"y@{cur.k}", prev.y, "<", cur.y))
        return out


def _choose_right_end(f: PLFunction) -> Fraction:
    """A point ``b'`` with ``f(b') < sup f[a, b']`` (f not increasing)."""
    top = max(f.ys)
    if f.ys[-1] < top:
        return f.xs[-1]
    for i in range(len(f.ys) - 1):
        if f.ys[i + 1] < f.ys[i]:
            return f.xs[i + 1]
    raise PreconditionError("function is increasing")


def approx_max_search(f: PLFunction, a: RatLike, b: RatLike, k_max: int = 20
                      ) -> Union[MaxSearchCertificate, StrictIncrease]:
    """Nested search for a point where ``f`` has an approximate maximum.

    Returns :class:`StrictIncrease` when ``f`` is strictly increasing on
    ``[a, b]``.  For PL inputs the point found is a genuine local maximum;
    its enclosure has width at most ``(b - a) / 2**k_max``.
    """
    a, b = as_rat(a), as_rat(b)
    if not a < b:
        raise ParameterError("need a < b")
    if k_max < 1:
        raise ParameterError("k_max must be positive")
    fr = f.restrict(Interval(a, b))
    if fr.is_strictly_increasing():
        return StrictIncrease(a, b, fr(a), fr(b))

    flats = fr.flat_segments()
    if flats:
        best = flats[0]
        for s in flats[1:]:
            if s.length > best.length:
                best = s
        m = best.midpoint
        return MaxSearchCertificate(a, b, "flat", (Stage(0, m, m, fr(m)),), Interval(m, m))

    b1 = _choose_right_end(fr)
    s0 = sup_on(fr, Interval(a, b1))
    if fr(a) == s0:
        return MaxSearchCertificate(a, b, "endpoint", (Stage(0, a, a, s0),), Interval(a, a))

    stages = [Stage(0, a, b1, max(fr(a), fr(b1)))]
    for k in range(1, k_max + 1):
        prev = stages[-1]
        step = omalley_step(fr, prev.a, prev.b, prev.y, stage_eps(k))
        stages.append(Stage(k, step.a1, step.b1, step.y1, step))
    last = stages[-1]
    return MaxSearchCertificate(a, b, "nested", tuple(stages), Interval(last.a, last.b))


@dataclass(frozen=True)
class Witness:
    """Approximate-maximum point with a nonpositive slope to its right."""

    x0: Fraction
    enclosure: Interval
    value: Fraction
    right_slope: Optional[Fraction]
    certificate: MaxSearchCertificate


def monotonicity_witness(f: PLFunction, x1: RatLike, x2: RatLike, k_max: int = 20
                         ) -> Union[StrictIncrease, Witness]:
    """Either ``f(x1) < f(x2)`` or a point blocking strict increase.

    When ``f(x1) >= f(x2)`` the approximate maximum of ``f`` on ``[x1, x2]``
    is located and, for PL ``f``, identified with the local-maximum knot in
    its enclosure; the slope just right of that point is then ``<= 0``
    (or the point is ``x2``).
    """
    x1, x2 = as_rat(x1), as_rat(x2)
    if not x1 < x2:
        raise ParameterError("need x1 < x2")
    f1, f2 = f(x1), f(x2)
    if f1 < f2:
        return StrictIncrease(x1, x2, f1, f2)
    cert = approx_max_search(f, x1, x2, k_max)
    if isinstance(cert, StrictIncrease):  # cannot happen when f1 >= f2
        raise CertificateError("search reported increase although f(x1) >= f(x2)")
    fr = f.restrict(Interval(x1, x2))
    if cert.branch in ("flat", "endpoint"):
        x0 = cert.enclosure.lo
    else:
        enc = cert.enclosure
        cands = [x for x in fr.local_maxima() if x in enc]
        if not cands:
            raise CertificateError(f"no local maximum knot inside {enc}")
        x0 = max(cands, key=lambda x: (fr(x), -x))
    slope = fr.right_slope(x0)
    if slope is not None and slope > 0:
        raise CertificateError(f"right slope {slope} at {x0} is positive")
    return Witness(x0, cert.enclosure, fr(x0), slope, cert)


# ---------------------------------------------------------------------------
# certificate text format
# ---------------------------------------------------------------------------


def dump_certificate(cert: MaxSearchCertificate) -> str:
    lines = [f"CERT v1 {len(cert.stages)} {cert.branch}"]
    for s in cert.stages:
        lines.append(f"{s.k} {format_rat(s.a)} {format_rat(s.b)} {format_rat(s.y)}")
    return "\n".join(lines) + "\n"


def load_certificate(text: str, a: RatLike = None, b: RatLike = None) -> MaxSearchCertificate:
    """Parse a certificate.  ``a``/``b`` default to the stage-0 interval."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty certificate")
    head = lines[0].split()
    if len(head) != 4 or head[:2] != ["CERT", "v1"]:
        raise FormatError(f"bad certificate header {lines[0]!r}")
    if not head[2].isdigit():
        raise FormatError(f"bad stage count {head[2]!r}")
    n, branch = int(head[2]), head[3]
    if branch not in ("nested", "flat", "endpoint"):
        raise FormatError(f"unknown branch {branch!r}")
    if len(lines) - 1 != n or n < 1:
        raise FormatError(f"expected {n} stage rows, got {len(lines) - 1}")
    stages = []
    for row in lines[1:]:
        fields = row.split()
        if len(fields) != 4:
            raise FormatError(f"bad stage row {row!r}")
        stages.append(Stage(int(fields[0]), *(parse_rat(x) for x in fields[1:])))
    if [s.k for s in stages] != list(range(n)):
        raise FormatError("stage indices must run 0..n-1")
    if branch != "nested" and (n != 1 or stages[0].a != stages[0].b):
        raise FormatError(f"{branch} certificate must hold one degenerate stage")
    last = stages[-1]
    enc = Interval(last.a, last.b)
    lo = as_rat(a) if a is not None else stages[0].a
    hi = as_rat(b) if b is not None else stages[0].b
    return MaxSearchCertificate(lo, hi, branch, tuple(stages), enc)


def verify_certificate(f: PLFunction, cert: MaxSearchCertificate) -> List[ItemCheck]:
    """Re-check a nested certificate against ``f`` without re-running the search."""
    checks = list(cert.structural_checks())
    if cert.branch != "nested":
        st = cert.stages[0]
        x0 = st.a
        checks.append(_item("value", f(x0), ">=", st.y))
        checks.append(_item("value", f(x0), "<=", st.y))
        slope = f.right_slope(x0)
        if cert.branch == "flat":
            left = f.right_slope(x0 - (x0 - f.xs[0]) / 2**64) if x0 > f.xs[0] else None
            checks.append(_item("flat-right", slope if slope is not None else Fraction(1), "<=", Fraction(0)))
            checks.append(_item("flat-right", slope if slope is not None else Fraction(1), ">=", Fraction(0)))
            checks.append(_item("flat-left", left if left is not None else Fraction(1), ">=", Fraction(0)))
        elif slope is not None:
            checks.append(_item("right-slope", slope, "<=", Fraction(0)))
        return checks
    for prev, cur in zip(cert.stages, cert.stages[1:]):
        for it in lemma_items(f, prev.a, prev.b, prev.y, cur.a, cur.b, cur.y, stage_eps(cur.k)):
            checks.append(ItemCheck(f"{it.item}@{cur.k}", it.lhs, it.relation, it.rhs, it.ok))
    return checks
