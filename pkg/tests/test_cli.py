import io
import os
import subprocess
import sys

import pytest

from pldensity import ORNSTEIN_G
from pldensity.cli import emit_plot_data, run
from pldensity.formats import dump_pl, load_pl
from pldensity.game import simulate
from pldensity.ornstein import convergence_report


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def block(text, tag):
    """The verbatim block starting with ``tag`` inside a text report."""
    lines = text.splitlines()
    start = next(i for i, ln in enumerate(lines) if ln.startswith(tag))
    end = next(i for i in range(start, len(lines)) if lines[i].startswith(("check ", "result ")))
    return "\n".join(lines[start:end]) + "\n"


def test_seed_show():
    code, out, err = call("seed", "show", "ornstein-g")
    assert code == 0
    assert load_pl(block(out, "PL v1")).same_knots(ORNSTEIN_G.base)
    assert "4/3" in out and "duration" in err and "duration" not in out


def test_diverge_and_bprime():
    code, out, _ = call("diverge", "--levels", "6")
    assert code == 0 and "check drop ratios equal 5/3: pass" in out
    code, out, _ = call("bprime", "--path", "central", "--levels", "4", "--enclosure-depth", "12")
    assert code == 0 and out.count("check level") == 5 and "fail" not in out


def test_converge_rows():
    code, out, _ = call("converge", "--levels", "3")
    assert code == 0 and "value C 15/26" in out
    assert sum(ln.startswith("row ") for ln in out.splitlines()) == 4


def test_construct_and_cap():
    code, out, _ = call("construct", "--seed", "ornstein-g", "--depth", "1")
    assert code == 0 and "value segments 25" in out
    code, _, err = call("construct", "--seed", "fixed-h", "--depth", "9", "--cap", "10000")
    assert code == 3 and "segments" in err


def test_exit_codes(tmp_path):
    assert call()[0] == 64
    assert call("frobnicate")[0] == 64
    assert call("diverge", "--levels", "x")[0] == 64
    assert call("construct", "--cap", "5")[0] == 64
    assert call("geps", "--set", str(tmp_path / "missing.txt"), "--epsilon", "1/2")[0] == 74
    assert call("seed", "show", "nothing")[0] == 2
    inc = tmp_path / "inc.txt"
    inc.write_text("PL v1 2\n0 0\n1 1\n")
    assert call("gmax", "--function", str(inc))[0] == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("PL v1 2\n0 0\n")
    assert call("gmax", "--function", str(bad))[0] == 2
    assert call("bprime", "--levels", "4", "--enclosure-depth", "3")[0] == 2
    assert call("geps", "--set", str(inc), "--epsilon", "1/2")[0] == 2
    assert call("game", "--rounds", "1", "--out", str(tmp_path / "no" / "such" / "x.csv"))[0] == 74


def test_failed_check_exits_one(tmp_path):
    cert = tmp_path / "c.txt"
    cert.write_text("CERT v1 2 nested\n0 0/1 1/1 0/1\n1 0/1 1/1 0/1\n")
    code, out, _ = call("verify", "--cert", str(cert), "--function", "ornstein-g")
    assert code == 1 and "result fail" in out


def test_gmax_cert_verifies(tmp_path):
    code, out, _ = call("gmax", "--function", "ornstein-g", "--depth", "12")
    assert code == 0
    cert = tmp_path / "cert.txt"
    cert.write_text(block(out, "CERT v1"))
    code, out, _ = call("verify", "--cert", str(cert), "--function", "ornstein-g")
    assert code == 0 and "result pass" in out
    assert call("verify", "--cert", str(cert))[0] == 64


def test_witness_outcomes(tmp_path):
    code, out, _ = call("witness", "--function", "ornstein-g")
    assert code == 0 and "value outcome witness" in out
    code, out, _ = call("witness", "--function", "ornstein-g", "--interval", "1/7,2/7")
    assert "witness" in out
    inc = tmp_path / "inc.txt"
    inc.write_text("PL v1 3\n0 0\n1/2 1/4\n1 1\n")
    code, out, _ = call("witness", "--function", str(inc))
    assert code == 0 and "strict-increase" in out


def test_geps_with_file(tmp_path):
    s = tmp_path / "h.txt"
    s.write_text("IS v1 1\n2/5 3/5\n")
    code, out, _ = call("geps", "--set", str(s), "--epsilon", "1/2")
    assert code == 0 and "row 1/5 4/5 1/3" in out and "IS v1 1\n1/5 4/5" in out


def test_game_transcript_verifies(tmp_path):
    code, out, _ = call("game", "--rounds", "3", "--seed", "42")
    assert code == 0
    t = tmp_path / "t.txt"
    t.write_text(block(out, "GAME v1"))
    code, out2, _ = call("verify", "--transcript", str(t))
    assert code == 0 and "result pass" in out2


def test_determinism():
    for argv in (("diverge", "--levels", "5"), ("game", "--rounds", "2", "--seed", "7"),
                 ("gmax", "--function", "fixed-h", "--depth", "8")):
        assert call(*argv)[1] == call(*argv)[1]


def test_csv_and_sidecar(tmp_path):
    out_path = tmp_path / "conv.csv"
    code, out, _ = call("converge", "--levels", "2", "--format", "csv", "--out", str(out_path))
    assert code == 0 and out.startswith("# approximate")
    lines = out_path.read_text().splitlines()
    assert lines[1] == "n,segments,max_drop,sup_diff,bound" and len(lines) == 5
    assert "value C 15/26" in (tmp_path / "conv.csv.exact.txt").read_text()
    code, out, _ = call("--format", "csv", "diverge", "--levels", "2")
    assert out.splitlines()[1].startswith("n,I_lo")


def test_emit_plot_data(tmp_path):
    p, side = emit_plot_data(ORNSTEIN_G.base, str(tmp_path / "g.csv"))
    rows = open(p).read().splitlines()
    assert rows[1] == "x,y" and len(rows) == 2 + 8
    assert open(side).read() == dump_pl(ORNSTEIN_G.base)
    p, side = emit_plot_data(simulate(2, 1), str(tmp_path / "t.csv"))
    assert len(open(p).read().splitlines()) == 2 + 4
    with pytest.raises(TypeError):
        emit_plot_data(convergence_report(1), str(tmp_path / "x.csv"))


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pldensity", "seed", "show", "fixed-h"],
                          capture_output=True, text=True, env={**os.environ})
    assert proc.returncode == 0 and "PL v1 14" in proc.stdout
