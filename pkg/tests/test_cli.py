import json

import pytest

from shapewalk import cli
from shapewalk.io import read_csv_columns


def run(argv):
    return cli.dispatch([str(a) for a in argv])


def test_walk_zero_steps(tmp_path):
    out = tmp_path / "w.csv"
    assert run(["walk", "--case", "I", "--steps", 0, "--seed", 1, "--x0", "std", "--out", out]) == 0
    text = out.read_text()
    assert text.startswith("# shapewalk ")
    assert "# argv: walk --case I --steps 0" in text and "# seed: 1" in text
    cols = read_csv_columns(str(out))
    assert cols == {"step": ["0"], "re_z": ["0"], "im_z": ["1"], "height": ["1"]}


def test_walk_byte_identical_replay(tmp_path):
    a = tmp_path / "a.csv"
    argv = ["walk", "--measure", "fig3a", "--steps", 5000, "--seed", 4, "--out", a]
    assert run(argv) == 0
    first = a.read_bytes()
    assert run(argv) == 0
    assert a.read_bytes() == first
    argv[6] = 5
    run(argv)
    assert a.read_bytes() != first


def test_walk_summary_and_gof(tmp_path):
    w, s, g = tmp_path / "w.csv", tmp_path / "s.json", tmp_path / "g.json"
    assert run(["walk", "--steps", 200_000, "--seed", 0, "--out", w, "--summary", s]) == 0
    summary = json.loads(s.read_text())
    assert summary["samples"] == 20_001 and "gof" in summary
    assert run(["gof", "--input", w, "--out", g]) == 0
    doc = json.loads(g.read_text())
    assert doc["tv"] == summary["gof"]["tv"]
    assert doc["tail_mass"] == pytest.approx(3 / (3.141592653589793 * 6))


def test_section_verify(capsys):
    assert run(["section-verify", "--t-count", 1000, "--seed", 7]) == 0
    out = capsys.readouterr().out
    assert "t=inf: exact" in out and "1000/1000 exact" in out


def test_section_curve(tmp_path):
    p = tmp_path / "c.csv"
    assert run(["section-curve", "--points", 50, "--out", p]) == 0
    cols = read_csv_columns(str(p))
    assert len(cols["t"]) == 51 and cols["t"][-1] == "inf"
    assert float(cols["im_z"][-1]) == pytest.approx(2)


def test_ortho_shapes(tmp_path):
    p = tmp_path / "o.csv"
    assert run(["ortho-shapes", "--words", 40, "--len", 5, "--seed", 1, "--with-v", "--out", p]) == 0
    cols = read_csv_columns(str(p))
    assert len(cols["word_index"]) == 40 and {"v1", "n3"} <= set(cols)
    for v in zip(cols["v1"], cols["v2"], cols["v3"]):
        a, b, c = map(int, v)
        assert 2 * a * c - b * b == 1


def test_lyapunov_and_contraction(tmp_path):
    p = tmp_path / "l.json"
    assert run(["lyapunov", "--measure", "gamma0", "--steps", 2000, "--replicas", 4, "--out", p]) == 0
    doc = json.loads(p.read_text())
    assert set(doc["weights"]) == {"omega_R3", "omega_wedge2", "omega_l0", "omega_r0", "omega_l0_r0"}
    q = tmp_path / "c.json"
    assert run(["contraction", "--points", 3, "--inner-samples", 500, "--delta", 0.1, 0.2, "--out", q]) == 0
    assert len(json.loads(q.read_text())["probes"]) == 2


def test_aorbit_cf_units_conditioned(tmp_path):
    a, r = tmp_path / "a.csv", tmp_path / "r.json"
    assert run(["aorbit", "--lattice", "std", "--box", 2, 2, "--grid", 3, 3, "--out", a, "--report", r]) == 0
    cols = read_csv_columns(str(a))
    assert len(cols["height"]) == 9
    assert json.loads(r.read_text())["flags"]  # span{e1,e2} meets coordinate planes
    c = tmp_path / "cf.json"
    assert run(["cf", "--x", "649/200", "--out", c]) == 0
    assert json.loads(c.read_text())["digits"] == [3, 4, 12, 4]
    assert run(["cf", "--x", "sqrt(2)", "--terms", 4, "--out", c]) == 0
    assert json.loads(c.read_text())["digits"] == [1, 2, 2, 2]
    assert run(["cf", "--x", "3.14159265358979323846264338327950288", "--terms", 5, "--out", c]) == 0
    assert json.loads(c.read_text())["digits"] == [3, 7, 15, 1, 292]
    u = tmp_path / "u.json"
    assert run(["cubic-units", "--bound", 2, "--out", u]) == 0
    doc = json.loads(u.read_text())
    assert doc["log_rank"] == 2 and [1, 1, 0] in [x["coords"] for x in doc["units"]]
    k = tmp_path / "k.csv"
    assert run(["conditioned", "--range", -1, 1, "--out", k]) == 0
    assert set(read_csv_columns(str(k))["agree"]) == {"1"}


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nsteps = 30\nstride = 3\nseed = 2\n")
    a = tmp_path / "a.csv"
    assert run(["--config", cfg, "walk", "--out", a]) == 0
    assert len(read_csv_columns(str(a))["step"]) == 11
    assert run(["--config", cfg, "walk", "--stride", 10, "--out", a]) == 0
    assert len(read_csv_columns(str(a))["step"]) == 4


@pytest.mark.parametrize("argv", [
    ["walk", "--bogus"],
    ["frobnicate"],
    [],
    ["walk", "--steps", "ten"],
    ["walk", "--measure", "no-such-measure"],
    ["walk", "--x0", "1,2;3"],
    ["cf", "--x", "pi"],
    ["cubic-units", "--poly", "1,0,0,-2"],
    ["--config", "/nonexistent/cfg", "walk"],
])
def test_validation_errors_exit_1(argv, capsys):
    assert run(argv) == 1
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and err.startswith("shapewalk: error:")


def test_malformed_measure_file_exit_1(tmp_path, capsys):
    m = tmp_path / "m.txt"
    m.write_text("1 2 3\n")
    assert run(["walk", "--measure", m]) == 1
    assert "expected 9 entries" in capsys.readouterr().err


def test_numerical_failure_exit_2(tmp_path, capsys):
    m = tmp_path / "huge.txt"
    m.write_text("1e200 0 0  0 1 0  0 0 1e-200\n")
    assert run(["walk", "--measure", m, "--steps", 10, "--out", tmp_path / "w.csv"]) == 2
    assert capsys.readouterr().err.startswith("shapewalk: failure:")
