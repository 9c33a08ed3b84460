import json

import numpy as np
import pytest

from qbcoorbit import io
from qbcoorbit.cli import main
from qbcoorbit.gabor import GaborSystem, gaussian_window
from qbcoorbit.grid import modulate, translate
from qbcoorbit.norms import QuasiNormSpec, y_norm


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_windows(tmp_path, capsys):
    p = tmp_path / "g.bin"
    assert run(capsys, "generate", "gaussian", "-L", 128, "-o", p)[0] == 0
    assert np.linalg.norm(io.read_signal(p)) == pytest.approx(1, abs=1e-12)
    assert run(capsys, "generate", "raised-cosine", "-L", 64, "-o", p)[0] == 0
    assert np.linalg.norm(io.read_signal(p)) == pytest.approx(1, abs=1e-12)
    assert run(capsys, "generate", "gaussian", "-L", 1, "-o", p)[0] == 4


def test_generate_random_is_deterministic(tmp_path, capsys):
    a, b, c = tmp_path / "a.bin", tmp_path / "b.bin", tmp_path / "c.bin"
    run(capsys, "generate", "random", "-L", 64, "--seed", 7, "-o", a)
    run(capsys, "generate", "random", "-L", 64, "--seed", 7, "-o", b)
    run(capsys, "generate", "random", "-L", 64, "--seed", 8, "-o", c)
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()


def test_generate_single_sparse_atom(tmp_path, capsys):
    p = tmp_path / "atom.bin"
    assert run(capsys, "generate", "sparse-atoms", "-k", 1, "--lattice", "32,4,8", "--seed", 3, "-o", p)[0] == 0
    f = io.read_signal(p)
    g = gaussian_window(32)
    atoms = [modulate(translate(g, 4 * n), 4 * m) for n in range(8) for m in range(8)]
    assert min(np.abs(f - a).max() for a in atoms) == 0
    assert run(capsys, "generate", "sparse-atoms", "-k", 99, "--lattice", "32,4,8", "-o", p)[0] == 4


def test_dgt_idgt_round_trip(tmp_path, capsys):
    f, c, r = tmp_path / "f.bin", tmp_path / "c.bin", tmp_path / "r.bin"
    run(capsys, "generate", "random", "-L", 128, "--seed", 1, "-o", f)
    assert run(capsys, "dgt", "-i", f, "-o", c, "--lattice", "128,4,16")[0] == 0
    assert json.loads((tmp_path / "c.bin.json").read_text()) == {"L": 128, "a": 4, "M": 16}
    code, out, _ = run(capsys, "idgt", "-i", c, "-o", r, "--reference", f)
    assert code == 0
    report = json.loads(out)
    assert report["relative_error"] <= 1e-10
    assert report["seed"] == 0 and "version" in report and report["config"]["reference"] == str(f)


def test_dgt_of_zero_signal(tmp_path, capsys):
    z, c = tmp_path / "z.csv", tmp_path / "c.bin"
    io.write_signal(z, np.zeros(16))
    run(capsys, "dgt", "-i", z, "-o", c, "--lattice", "16,2,4")
    grid, _ = io.read_grid(c)
    assert grid.shape == (8, 4) and not np.any(grid)


def test_dgt_length_mismatch_and_missing_file(tmp_path, capsys):
    f = tmp_path / "f.bin"
    run(capsys, "generate", "random", "-L", 16, "-o", f)
    assert run(capsys, "dgt", "-i", f, "-o", tmp_path / "c", "--lattice", "32,4,8")[0] == 4
    assert run(capsys, "dgt", "-i", tmp_path / "missing", "-o", tmp_path / "c", "--lattice", "16,4,8")[0] == 3
    (tmp_path / "junk.bin").write_bytes(b"xxxxxxxx")
    assert run(capsys, "dgt", "-i", tmp_path / "junk.bin", "-o", tmp_path / "c", "--lattice", "16,4,8")[0] == 3
    assert run(capsys, "dgt", "-i", f, "-o", tmp_path / "c", "--lattice", "16,4")[0] == 4


def test_dual(tmp_path, capsys):
    d = tmp_path / "d.bin"
    code, out, _ = run(capsys, "dual", "--lattice", "128,4,16", "-o", d)
    rep = json.loads(out)
    assert code == 0 and 0 < rep["A"] <= rep["B"]
    dense = io.read_signal(d)
    run(capsys, "dual", "--lattice", "128,4,16", "--method", "neumann", "-o", d)
    assert np.linalg.norm(io.read_signal(d) - dense) <= 1e-8 * np.linalg.norm(dense)
    code, _, err = run(capsys, "dual", "--lattice", "128,8,4", "-o", d)
    diag = json.loads(err)
    assert code == 2 and diag["error"] == "NotAFrame" and diag["A"] <= 1e-10 * diag["B"]


def test_norm_examples(tmp_path, capsys):
    v = tmp_path / "v.csv"
    io.write_signal(v, [3, 4, 0, 0])
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"kind": "lp", "p": 2, "weight": "one"}))
    code, out, _ = run(capsys, "norm", "-i", v, "--spec", spec)
    rep = json.loads(out)
    assert code == 0 and rep["norm"] == 5 and rep["spec"]["kind"] == "lp"
    io.write_signal(v, [2, 1])
    spec.write_text(json.dumps({"kind": "lorentz", "p": 1, "q": "inf"}))
    code, out, _ = run(capsys, "norm", "-i", v, "--spec", spec, "--radius", 0)
    rep = json.loads(out)
    assert rep["norm"] == 2 and rep["amalgam"] == 2 and rep["ratio"] == 1


def test_norm_on_grid_matches_library(tmp_path, capsys):
    rng = np.random.default_rng(2)
    c = rng.standard_normal((6, 8)) + 1j * rng.standard_normal((6, 8))
    io.write_grid(tmp_path / "c.bin", c)
    m = rng.uniform(0.5, 2, c.size)
    io.write_weight(tmp_path / "m.csv", m)
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"kind": "mixed", "p": 0.5, "q": "inf", "weight": "one"}))
    rep = json.loads(run(capsys, "norm", "-i", tmp_path / "c.bin", "--spec", spec, "--radius", 1)[1])
    assert rep["norm"] == y_norm(c, QuasiNormSpec.mixed(0.5, "inf"))
    assert rep["amalgam"] >= rep["norm"]
    spec.write_text(json.dumps({"kind": "lp", "p": 0.5, "weight": "m.csv"}))
    rep = json.loads(run(capsys, "norm", "-i", tmp_path / "c.bin", "--spec", spec)[1])
    assert rep["norm"] == y_norm(c, QuasiNormSpec.lp(0.5, m.reshape(6, 8)))


def test_norm_spec_violations(tmp_path, capsys):
    v = tmp_path / "v.csv"
    io.write_signal(v, [1, 2, 3])
    spec = tmp_path / "s.json"
    for bad in ({"kind": "lp", "p": -1}, {"kind": "mixed", "p": 1, "q": 1}, {"p": 1},
                {"kind": "lorentz", "p": 2, "q": 0.5, "r": 1}):
        spec.write_text(json.dumps(bad))
        assert run(capsys, "norm", "-i", v, "--spec", spec)[0] == 4
    spec.write_text("{not json")
    assert run(capsys, "norm", "-i", v, "--spec", spec)[0] == 4


def test_nterm_curve(tmp_path, capsys):
    g, out = tmp_path / "pl.bin", tmp_path / "curve.csv"
    run(capsys, "generate", "power-law-grid", "--lattice", "128,4,16", "-p", 0.5, "--seed", 4, "-o", g)
    code, text, _ = run(capsys, "nterm-curve", "-i", g, "-o", out, "-p", 0.5, "-q", 2)
    summary = json.loads(text)
    assert code == 0 and -1.6 <= summary["slope"] <= -1.4
    assert summary["alpha_ref"] == 1.5 and summary["C_impl"] == pytest.approx(3 ** -0.5)
    assert json.loads((tmp_path / "curve.csv.json").read_text()) == summary
    lines = out.read_text().splitlines()
    assert lines[0] == "n,sigma" and len(lines) == 514
    run(capsys, "nterm-curve", "-i", g, "-o", out, "-p", 0.5, "-q", 2, "--n-list", "50,3,10,3")
    assert [ln.split(",")[0] for ln in out.read_text().splitlines()[1:]] == ["3", "10", "50"]
    assert run(capsys, "nterm-curve", "-i", g, "-o", out, "-p", 2, "-q", 2)[0] == 4
    assert run(capsys, "nterm-curve", "-i", g, "-o", out, "-p", 2, "-q", 1)[0] == 4


def test_nterm_curve_from_signal(tmp_path, capsys):
    f, out = tmp_path / "f.bin", tmp_path / "curve.csv"
    run(capsys, "generate", "sparse-atoms", "-k", 3, "--lattice", "64,4,8", "-o", f)
    code, text, _ = run(capsys, "nterm-curve", "-i", f, "-o", out, "--lattice", "64,4,8", "-p", 1, "-q", 2)
    assert code == 0 and json.loads(text)["coefficients"] == "dual-frame coefficients"


def test_config_file_supplies_defaults(tmp_path, capsys):
    f = tmp_path / "f.bin"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"L": 32, "seed": 5}))
    run(capsys, "generate", "random", "--config", cfg, "-o", f)
    run(capsys, "generate", "random", "-L", 32, "--seed", 5, "-o", tmp_path / "g.bin")
    assert f.read_bytes() == (tmp_path / "g.bin").read_bytes()
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "generate", "random", "--config", cfg, "-o", f)[0] == 4


def test_verify_exit_codes_and_determinism(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QBG_THREADS", "2")
    code, out1, err = run(capsys, "verify", "--suite", "norms", "--seed", 1)
    assert code == 0 and "[FAIL]" not in err
    rep = json.loads(out1)
    assert rep["passed"] and rep["config"]["threads"] == "2"
    names = [c["name"] for c in rep["suites"]["norms"]]
    assert any("r-triangle" in n for n in names) and any("solidity" in n for n in names)
    assert all({"trials", "worst", "bound", "margin", "passed"} <= set(c) for c in rep["suites"]["norms"])
    assert run(capsys, "verify", "--suite", "norms", "--seed", 1)[1] == out1
    code, _, err = run(capsys, "verify", "--suite", "norms", "--inject-fault", "dropped-weight")
    assert code == 1 and "[FAIL]" in err
    # the fault is scoped to the run
    assert run(capsys, "verify", "--suite", "norms", "--seed", 1)[1] == out1
