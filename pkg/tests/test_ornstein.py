import random
import time
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import path_fixed_point_value
from pldensity import (FIXED_H, level_set, Interval, IntervalSet, ORNSTEIN_G, PLFunction, ParameterError,
                       PreconditionError, ResourceError, density)
from pldensity.ornstein import (LazyConstruction, bprime_check, chord_gap, convergence_report,
                                decreasing_runs, divergence_report, enclose_h_infinity,
                                insert_seed, lazy_eval, lazy_segment, materialize, nested_intervals_g,
                                parse_path, path_point, segment_counts, tail_bound)
from pldensity.seeds import unnormalized_h

unit = st.integers(0, 10**6).map(lambda k: F(k, 10**6))


def test_insert_single_decreasing_segment_gives_seed():
    f = PLFunction([(0, 1), (1, 0)])
    assert insert_seed(f, ORNSTEIN_G).same_knots(ORNSTEIN_G.base)
    assert insert_seed(f, FIXED_H).same_knots(FIXED_H.base)


def test_insert_increasing_is_fixed_point():
    f = PLFunction([(0, 0), (F(1, 3), F(1, 2)), (1, 2)])
    assert insert_seed(f, ORNSTEIN_G) is f


def test_insert_g_into_g():
    g1 = insert_seed(ORNSTEIN_G.base, ORNSTEIN_G)
    assert len(g1.knots) - 1 == 25 == 4 + 3 * 7
    lo = F(3, 7)
    for i, (t, v) in enumerate(zip(ORNSTEIN_G.xs, ORNSTEIN_G.ys)):
        assert g1(lo + t / 7) == F(-1, 3) + F(5, 3) * v
    assert g1(nested_intervals_g(2)[1].lo) == F(17, 9)


def test_insert_handles_runs_of_several_pieces():
    f = PLFunction([(0, 0), (1, 3), (2, 2), (3, 1), (4, 2)])
    assert decreasing_runs(f) == [(1, 3)]
    h = insert_seed(f, ORNSTEIN_G)
    assert h(1) == 3 and h(3) == 1 and h(4) == 2
    assert h(1 + 2 * F(1, 7)) == 1 + 2 * F(4, 3)


def test_materialize_counts():
    g0 = materialize(LazyConstruction(ORNSTEIN_G, 0))
    assert g0.same_knots(ORNSTEIN_G.base) and len(g0.knots) == 8
    g1 = materialize(LazyConstruction(ORNSTEIN_G, 1))
    assert len(g1.knots) - 1 == 25
    h2 = materialize(LazyConstruction(FIXED_H, 2))
    inc, dec = segment_counts(FIXED_H, 2)
    assert dec == 6**3 and len(h2.knots) - 1 == inc + dec
    assert len(decreasing_runs(h2)) == dec


def test_materialize_matches_repeated_insertion():
    for seed in (ORNSTEIN_G, FIXED_H):
        f = seed.base
        for n in range(1, 4):
            f = insert_seed(f, seed)
            assert materialize(LazyConstruction(seed, n)).same_knots(f)


def test_materialize_cap():
    with pytest.raises(ResourceError, match="segments"):
        materialize(LazyConstruction(FIXED_H, 12))
    with pytest.raises(ResourceError):
        materialize(LazyConstruction(FIXED_H, 3, cap=100))
    with pytest.raises(ParameterError):
        LazyConstruction(FIXED_H, -1)


def test_lazy_examples():
    assert lazy_eval(ORNSTEIN_G, 0, F(3, 7)) == F(4, 3)
    t = time.perf_counter()
    v = lazy_eval(FIXED_H, 40, F(1, 2))
    assert time.perf_counter() - t < 0.5 and isinstance(v, F)


def test_lazy_matches_materialized_on_random_points():
    rng = random.Random(5)
    levels = {(s.name, n): materialize(LazyConstruction(s, n))
              for s in (ORNSTEIN_G, FIXED_H) for n in range(5)}
    for _ in range(200):
        seed = rng.choice((ORNSTEIN_G, FIXED_H))
        n = rng.randint(0, 4)
        x = F(rng.randint(0, 10**6), 10**6) if rng.random() < .8 else rng.choice(levels[seed.name, n].xs)
        assert lazy_eval(seed, n, x) == levels[seed.name, n](x)


@given(st.integers(0, 30), st.sampled_from([ORNSTEIN_G, FIXED_H]))
def test_endpoint_preservation(n, seed):
    assert lazy_eval(seed, n, 0) == 1 and lazy_eval(seed, n, 1) == 0


@given(unit, st.integers(0, 6), st.integers(1, 5))
def test_increasing_pieces_are_final(x, n, k):
    piece, up, _ = lazy_segment(FIXED_H, n, x)
    if up:
        for y in (piece.lo, piece.hi, x):
            assert lazy_eval(FIXED_H, n + k, y) == lazy_eval(FIXED_H, n, y)


def test_nested_intervals():
    assert nested_intervals_g(1) == [Interval(F(3, 7), F(4, 7))]
    assert nested_intervals_g(2)[1] == Interval(F(3, 7) + F(3, 49), F(3, 7) + F(4, 49))
    for k, iv in enumerate(nested_intervals_g(8), 1):
        assert iv.length == F(1, 7**k)
    with pytest.raises(ParameterError):
        nested_intervals_g(0)


def test_divergence_report():
    r = divergence_report(8)
    assert r.levels[1].left_value == F(17, 9) == 1 + F(1, 3) + F(5, 9)
    assert r.ratios_exact and r.drops_match and r.formula_reading_a
    assert not r.formula_reading_b
    # left values cross-checked by direct lazy evaluation
    for l in r.levels[:6]:
        assert lazy_eval(ORNSTEIN_G, l.n, l.interval.lo) == l.left_value
        assert lazy_eval(ORNSTEIN_G, l.n, l.interval.hi) - l.left_value == l.drop


def test_divergence_drops_against_materialized_levels():
    for n in range(4):
        gn = materialize(LazyConstruction(ORNSTEIN_G, n))
        iv = nested_intervals_g(n + 1)[n]
        assert gn(iv.hi) - gn(iv.lo) == -F(5, 3) ** (n + 1)


def test_convergence_report():
    assert chord_gap() == F(15, 26)
    unnorm = unnormalized_h()
    assert max(abs(y - (1 - x / 13)) for x, y in unnorm.knots) == F(15, 26)
    r = convergence_report(4)
    assert r.levels[0].max_drop == F(3, 4)
    assert r.drops_geometric and r.within_bound


def test_sup_diff_against_materialized():
    r = convergence_report(2)
    for lvl in r.levels:
        a = materialize(LazyConstruction(FIXED_H, lvl.n))
        b = materialize(LazyConstruction(FIXED_H, lvl.n + 1))
        assert max(abs(b(x) - a(x)) for x in b.xs) == lvl.sup_diff


def test_enclosure_examples():
    assert 1 in enclose_h_infinity(0, 0)
    assert tail_bound(0) == 4 * F(15, 26) * F(3, 4)
    for N in range(6):
        assert enclose_h_infinity(F(1, 3), N + 1).length / enclose_h_infinity(F(1, 3), N).length == F(3, 4)


def test_enclosure_contains_deeper_levels():
    rng = random.Random(9)
    for _ in range(100):
        x = F(rng.randint(0, 1000), 1000)
        N = rng.randint(0, 8)
        assert lazy_eval(FIXED_H, N + 3, x) in enclose_h_infinity(x, N)


@given(unit, st.integers(0, 10))
def test_enclosures_nest(x, N):
    a, b = enclose_h_infinity(x, N), enclose_h_infinity(x, N + 1)
    assert a.contains_interval(b)


def test_paths():
    assert parse_path("central") == (2,) and parse_path("first") == (0,) and parse_path("031") == (0, 3, 1)
    for bad in ("", "6", "x"):
        with pytest.raises(ParameterError):
            parse_path(bad)
    x0 = path_point((0,))
    assert x0 in Interval(F(1, 13), F(2, 13)) and x0 == F(1, 12)


def test_path_point_value_oracle():
    for path in ((0,), (2,), (5,), (1, 4)):
        x0 = path_point(path)
        y = path_fixed_point_value(path, FIXED_H)
        assert y in enclose_h_infinity(x0, 10)


def test_bprime_first_path_level_zero():
    cert = bprime_check("first", 0, 12)
    lvl = cert.levels[0]
    # the fixed point of v -> 3/4 + (3/4) v, so the y0 >= 5/4 case applies
    assert 3 in cert.y0_enclosure
    assert lvl.measure_unnormalized == 13
    assert lvl.status == "certified" and lvl.lower_bound >= F(1, 2) / 13


def _e0_mass(y0):
    """Mass of E_0 on the increasing pieces beside the unnormalized piece [1, 2]."""
    h = unnormalized_h()
    left = level_set(h, y0, Interval(0, 1), above=False, strict=False)
    right = level_set(h, y0, Interval(2, 3), above=True, strict=False)
    return left, right


@pytest.mark.parametrize("y0", [F(-1), F(1, 2), F(1), F(9, 8), F(5, 4), F(3, 2), F(3)])
def test_bprime_level_zero_cases(y0):
    left, right = _e0_mass(y0)
    if y0 >= F(5, 4):
        assert left.measure_in(F(0), F(1, 2)) == F(1, 2)
    if y0 <= 1:
        assert right.measure_in(F(5, 2), F(3)) == F(1, 2)
    if 1 <= y0 <= F(5, 4):
        # [0, eps] together with [2.5 + eps, 3] (a union; the intersection is empty)
        assert left.measure_in(F(0), F(1, 2)) + right.measure_in(F(5, 2), F(3)) == F(1, 2)
    assert density(left.union(right), Interval(0, 13)) >= F(1, 26)


def test_bprime_affine_invariance_level_zero():
    from pldensity.ornstein import _side_sets
    for y0 in (F(1, 2), F(9, 8), F(3)):
        left, right = _e0_mass(y0)
        mass, _ = _side_sets(FIXED_H, F(3, 26), y0, y0, only=(0, 2))
        assert mass == (left.measure() + right.measure()) / 13


def test_bprime_central_levels():
    cert = bprime_check("central", 4, 12)
    assert cert.ok and cert.measures_ok
    assert all(l.status == "certified" and l.needed_N is None for l in cert.levels)


def test_bprime_monotone_in_N():
    for path in ("first", "central", "last", "14"):
        prev = None
        for N in (4, 6, 9, 13):
            cert = bprime_check(path, 3, N)
            bounds = [l.lower_bound for l in cert.levels]
            if prev is not None:
                assert all(b >= a for a, b in zip(prev, bounds))
            prev = bounds


def test_bprime_shallow_enclosure_is_never_a_false_certificate():
    cert = bprime_check("central", 2, 3, threshold=F(1, 3))
    for l in cert.levels:
        assert l.status in ("certified", "inconclusive", "below")
        if l.status == "inconclusive":
            assert l.needed_N is not None and l.needed_N >= 3
        if l.status == "certified":
            assert l.lower_bound >= F(1, 3)


def test_bprime_preconditions():
    with pytest.raises(PreconditionError):
        bprime_check("central", 4, 4)
    with pytest.raises(ParameterError):
        bprime_check("central", -1, 4)
