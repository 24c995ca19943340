"""Independent reference computations used only by the tests.

They deliberately avoid the library's envelope method and level-set code:
crossings are found by float sign scans and bisection, coverage by direct
enumeration of candidate intervals, local maxima by scanning knots.
"""

from fractions import Fraction

import numpy as np


def crossings_by_scan(xs, ys, y, samples=64, tol=1e-12):
    """Float crossings of level ``y`` found by sign scan plus bisection."""
    xs = [float(v) for v in xs]
    ys = [float(v) for v in ys]
    y = float(y)

    def f(x):
        return float(np.interp(x, xs, ys)) - y

    grid = np.linspace(xs[0], xs[-1], samples * len(xs))
    grid = np.unique(np.concatenate([grid, xs]))
    out = []
    for a, b in zip(grid, grid[1:]):
        fa, fb = f(a), f(b)
        if fa == 0 or fa * fb >= 0:
            continue
        lo, hi = a, b
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if f(lo) * f(mid) <= 0:
                hi = mid
            else:
                lo = mid
        out.append((lo + hi) / 2)
    return out


def exact_superlevel_parts(xs, ys, y):
    """Own exact crossing computation on each piece (for item checks)."""
    parts = []
    for x0, y0, x1, y1 in zip(xs, ys, xs[1:], ys[1:]):
        if y0 > y and y1 > y:
            parts.append([x0, x1])
        elif y0 > y or y1 > y:
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            parts.append([x0, xc] if y0 > y else [xc, x1])
    merged = []
    for p in parts:
        if p[1] <= p[0]:
            continue
        if merged and merged[-1][1] >= p[0]:
            merged[-1][1] = max(merged[-1][1], p[1])
        else:
            merged.append(list(p))
    return [tuple(p) for p in merged]


def measure_in(parts, lo, hi):
    return sum((max(Fraction(0), min(b, hi) - max(a, lo)) for a, b in parts), Fraction(0))


def brute_max_straddle(parts, lo, hi, p):
    """Max density of ``parts`` over (s, t) ⊆ [lo, hi] with s <= p <= t,
    enumerating every candidate pair of breakpoints."""
    pts = {lo, hi, p}
    for a, b in parts:
        for v in (a, b):
            if lo <= v <= hi:
                pts.add(v)
    best = Fraction(0)
    for s in pts:
        for t in pts:
            if s <= p <= t and s < t:
                best = max(best, measure_in(parts, s, t) / (t - s))
    return best


def gepsilon_grid_oracle(parts, lo, hi, eps, grid):
    """Coverage flags on ``grid``: some candidate (s, t) ∋ x has density > eps.

    Candidate endpoints are the breakpoints of the set plus ``x`` itself
    and a uniform auxiliary grid; floats throughout.
    """
    lo, hi, eps = float(lo), float(hi), float(eps)
    bps = sorted({lo, hi} | {float(v) for a, b in parts for v in (a, b) if lo <= v <= hi}
                 | set(np.linspace(lo, hi, 41).tolist()))
    P = [(float(a), float(b)) for a, b in parts]

    def cum(t):
        return sum(max(0.0, min(b, t) - max(a, lo)) for a, b in P if min(b, t) > max(a, lo))

    bps = np.array(bps)
    cb = np.array([cum(t) for t in bps])
    flags = []
    for x in grid:
        cx = cum(x)
        L = np.append(bps[bps <= x], x)
        CL = np.append(cb[bps <= x], cx)
        R = np.append(bps[bps >= x], x)
        CR = np.append(cb[bps >= x], cx)
        dt = R[None, :] - L[:, None]
        dm = CR[None, :] - CL[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = np.where(dt > 1e-15, dm / dt, -1.0)
        flags.append(bool((dens > eps + 1e-12).any()))
    return flags


def knot_scan_local_maxima(f, a, b):
    """Local maxima of ``f`` restricted to ``[a, b]`` by scanning its knots."""
    xs = [a] + [x for x in f.xs if a < x < b] + [b]
    ys = [f(x) for x in xs]
    out = []
    for i in range(len(xs)):
        left = i == 0 or ys[i - 1] <= ys[i]
        right = i == len(xs) - 1 or ys[i + 1] <= ys[i]
        if left and right:
            out.append(xs[i])
    return out


def independent_items_5_6(f, a0, b0, y0, a1, b1, y1, eps):
    """Items (5) and (6) of the lemma, recomputed from scratch."""
    xs = [a0] + [x for x in f.xs if a0 < x < b0] + [b0]
    ys = [f(x) for x in xs]
    h0 = exact_superlevel_parts(xs, ys, y0)
    h1 = exact_superlevel_parts(xs, ys, y1)
    item5 = measure_in(h0, a1, b1) / (b1 - a1) > Fraction(1, 2)
    item6 = all(brute_max_straddle(h1, a0, b0, p) <= eps for p in (a1, b1))
    return item5, item6


def path_fixed_point_value(path, seed):
    """Exact limit value at the path point: the fixed point of the composed
    value maps ``v -> fb + v (fa - fb)`` around one period."""
    dec = [i for i in range(len(seed.ys) - 1) if seed.ys[i + 1] < seed.ys[i]]
    scale, shift = Fraction(1), Fraction(0)
    for d in path:
        i = dec[d]
        fa, fb = seed.ys[i], seed.ys[i + 1]
        shift += scale * fb
        scale *= fa - fb
    return shift / (1 - scale)
