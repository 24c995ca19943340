from fractions import Fraction as F

import pytest
from hypothesis import given

from pldensity import FormatError, ORNSTEIN_G
from pldensity.formats import (dump_intervalset, dump_pl, iter_blocks, load_intervalset,
                               load_pl)
from strategies import interval_sets, pl_functions


@given(pl_functions())
def test_pl_round_trip(f):
    text = dump_pl(f)
    back = load_pl(text)
    assert back.same_knots(f)
    assert dump_pl(back) == text


@given(interval_sets())
def test_is_round_trip(s):
    text = dump_intervalset(s)
    assert load_intervalset(text) == s
    assert dump_intervalset(load_intervalset(text)) == text


def test_pl_layout():
    text = dump_pl(ORNSTEIN_G.base)
    lines = text.splitlines()
    assert lines[0] == "PL v1 8"
    assert lines[2] == "1/7 4/3"
    assert lines[5] == "4/7 -1/3"


def test_reader_accepts_loose_literals_and_comments():
    f = load_pl("# comment\nPL v1 2\n0 1\n\n1/2 -3/6\n")
    assert f.knots == ((0, 1), (F(1, 2), F(-1, 2)))


@pytest.mark.parametrize("text", [
    "", "PL v2 2\n0 0\n1 1\n", "PL v1 3\n0 0\n1 1\n", "PL v1 2\n0 0\n0 1\n",
    "PL v1 2\n0 0\n1 1.5\n", "PL v1 2\n0 0\n1 1\nextra\n", "IS v1 1\n1 0\n",
])
def test_malformed_blocks(text):
    with pytest.raises(FormatError):
        (load_intervalset if text.startswith("IS") else load_pl)(text)


def test_iter_blocks_splits_stream():
    text = dump_pl(ORNSTEIN_G.base) + "IS v1 1\n0/1 1/2\n"
    blocks = list(iter_blocks(text))
    assert len(blocks) == 2
    assert load_intervalset(blocks[1]).measure() == F(1, 2)


def test_point_parts_are_dropped():
    assert load_intervalset("IS v1 2\n0 0\n1/2 1\n").measure() == F(1, 2)
