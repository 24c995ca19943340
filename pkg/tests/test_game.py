import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pldensity import FormatError, PLFunction, ParameterError, dq
from pldensity.game import (C_SEED, Ball, Inserted, PLCenter, Perturbed, W, certified_alpha,
                            dump_transcript, load_transcript, margin_density,
                            p1_random, p2_move, simulate, verify_limit_scales, zero_center)

UNIT_BALL = Ball(zero_center(), F(1))


def test_seed_defect_function():
    assert W(0) == 0 and W(1) == 0 and max(abs(y) for y in W.ys) == C_SEED == F(15, 26)


def test_p2_from_unit_ball():
    ball, prm = p2_move(UNIT_BALL)
    assert ball.radius <= F(1, 2)
    assert all(ok for _, ok in prm.invariant_checks(F(1)))
    assert ball.center.distance_bound() + ball.radius < 1
    assert prm.alpha == certified_alpha() > 0


def test_p2_alpha_identical_across_pieces():
    b = p1_random(UNIT_BALL, 3)
    g, prm = p2_move(b)
    assert len({prm.alpha}) == 1 and prm.m >= 1
    # the seed copy is the same up to shear on every piece: margin densities at the
    # piece midpoint agree for pieces with equal chord rise
    c = g.center
    rises = {}
    for i in range(min(c.m, 40)):
        rises.setdefault(c.shear(i), []).append(i)
    for idx in rises.values():
        if len(idx) > 1:
            vals = {margin_density(c.restrict_piece(i), c.piece(i), c.piece(i).midpoint,
                                   prm.mu, prm.eta) for i in idx}
            assert len(vals) == 1


def test_p2_distance_bound_is_sound_on_materialized_round():
    b = p1_random(UNIT_BALL, 7)
    g, _ = p2_move(b)
    base = b.center.materialize()
    gm = g.center.materialize()
    pts = sorted(set(base.xs) | set(gm.xs))
    assert max(abs(gm(x) - base(x)) for x in pts) <= g.center.distance_bound()


def test_dq_spot_check():
    rng = random.Random(1)
    ball, prm = p2_move(p1_random(UNIT_BALL, 5))
    g = ball.center
    d = prm.delta
    hits = 0
    while hits < 100:
        i = rng.randrange(g.m)
        J = g.piece(i)
        f = g.restrict_piece(i)
        x0 = J.lo + J.length * F(rng.randint(0, 1000), 1000)
        y0 = f(x0)
        x1 = J.lo + J.length * F(rng.randint(0, 1000), 1000)
        if abs(x1 - x0) < prm.eta:
            continue
        y1 = f(x1)
        if not ((x1 > x0 and y1 >= y0 + prm.mu) or (x1 < x0 and y1 <= y0 - prm.mu)):
            continue
        px = [F(rng.randint(-100, 100), 100) * d for _ in range(4)]
        assert dq((x0 + px[0], y0 + px[1]), (x1 + px[2], y1 + px[3])) > 0
        hits += 1


def test_p1_random_determinism_and_norm():
    a, b = p1_random(UNIT_BALL, 11), p1_random(UNIT_BALL, 11)
    assert a.center.pert == b.center.pert and a.radius == b.radius == F(1, 4)
    assert a.center.pert.max_abs() == max(abs(y) for y in a.center.pert.ys) <= F(1, 4)
    assert a.center.pert.max_abs() + a.radius < 1


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_p1_random_norm_property(seed):
    b = p1_random(UNIT_BALL, seed)
    assert b.center.pert.max_abs() <= b.radius == F(1, 4)


def test_simulate_one_round():
    t = simulate(1, 0)
    assert len(t.plays) == 2 and t.ok


def test_simulate_five_rounds_seed_42():
    t = simulate(5, 42)
    r = [F(1)] + t.radii
    assert all(b < a for a, b in zip(r, r[1:]))
    assert all(p.params.alpha > 0 for p in t.plays if p.params)
    assert t.samples and all(s.density > s.alpha for s in t.samples)
    assert t.ok


def test_simulate_determinism():
    assert dump_transcript(simulate(4, 9)) == dump_transcript(simulate(4, 9))
    assert simulate(3, 9).samples == simulate(3, 9).samples


def test_simulate_parameters():
    with pytest.raises(ParameterError):
        simulate(0, 1)
    with pytest.raises(ParameterError):
        simulate(1, 1, adversary="nobody")


def test_monotone_adversary():
    t = simulate(4, 1, adversary="monotone-shift")
    assert t.ok
    for p in t.plays:
        if p.params:
            g = p.ball.center
            for i in (0, g.m // 2, g.m - 1):
                assert any(s < 0 for s in g.restrict_piece(i).slopes())


def test_limit_scales():
    t = simulate(3, 4)
    rep = verify_limit_scales(t, 6)
    assert rep.ok and rep.scales == [1, 3, 5]
    assert all(r.density > r.alpha and r.slack > 0 for r in rep.records)
    one = verify_limit_scales(simulate(1, 4), 3)
    assert one.scales == [1]


def test_transcript_round_trip():
    t = simulate(3, 17)
    text = dump_transcript(t)
    back = load_transcript(text)
    assert dump_transcript(back) == text
    assert [p.ball.radius for p in back.plays] == t.radii
    assert all(ok for name, ok in back.all_checks() if not name.startswith("sample"))


def test_transcript_rejects_tampering():
    text = dump_transcript(simulate(2, 17))
    lines = text.splitlines()
    for i, ln in enumerate(lines):
        if ln.startswith("STRAT"):
            parts = ln.split()
            parts[1] = str(int(parts[1]) + 1)
            lines[i] = " ".join(parts)
            break
    with pytest.raises(FormatError):
        load_transcript("\n".join(lines) + "\n")
    for bad in ("", "GAME v2 1\n", "GAME v1 1\nP3 1\n", "GAME v1 1\nP2 1/4\n"):
        with pytest.raises(FormatError):
            load_transcript(bad)


def test_centers():
    f = PLFunction([(0, 0), (1, 1)])
    c = PLCenter(f)
    p = Perturbed(c, PLFunction([(0, 1), (1, 0)]))
    assert p(F(1, 3)) == 1 and p.lipschitz() == 2
    ins = Inserted(c, 4, F(1, 10))
    assert ins(F(1, 4)) == F(1, 4) and ins.materialize()(F(1, 8)) == ins(F(1, 8))
    assert ins.distance_bound() == F(1, 4) + F(1, 10) * C_SEED
    with pytest.raises(ParameterError):
        Ball(c, 0)
    with pytest.raises(ParameterError):
        c(F(2))
