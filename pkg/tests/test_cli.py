"""End-to-end CLI contract: subcommands, file handoff, exit codes."""

import json

import numpy as np

from geomwave.cli import main
from geomwave.io import write_samples
from geomwave.manifolds import Sphere2
from geomwave.transform import ManifoldHermiteSeq


def run(*argv):
    return main(list(argv))


def test_sample_decompose_reconstruct_roundtrip(tmp_path):
    s = str(tmp_path / "s.json")
    p = str(tmp_path / "p.json")
    r = str(tmp_path / "r.json")
    assert run("sample", "--preset", "wobble", "--manifold", "sphere2",
               "--level", "6", "--out", s) == 0
    assert run("decompose", "--in", s, "--levels", "3", "--predictor", "cubic",
               "--rule", "midpoint", "--out", p) == 0
    assert run("reconstruct", "--in", p, "--out", r) == 0
    a = json.load(open(s))
    b = json.load(open(r))
    pa = np.array([e["p"] for e in a["data"]])
    pb = np.array([e["p"] for e in b["data"]])
    assert np.abs(pa - pb).max() <= 1e-10
    assert b["manifold"] == "sphere2" and b["level"] == 6


def test_exponential_predictor_flag(tmp_path):
    s = str(tmp_path / "s.json")
    p = str(tmp_path / "p.json")
    assert run("sample", "--preset", "quatcurve", "--manifold", "so3-quat",
               "--level", "5", "--out", s) == 0
    assert run("decompose", "--in", s, "--levels", "2", "--predictor", "exp",
               "--lambda", "1.5", "--out", p) == 0
    meta = json.load(open(p))["predictor"]
    assert meta == {"kind": "exp", "lambda": 1.5}


def test_decay_writes_csv(tmp_path):
    out = str(tmp_path / "d.csv")
    assert run("decay", "--preset", "wobble", "--manifold", "sphere2",
               "--levels", "3:7", "--out", out) == 0
    lines = open(out).read().strip().splitlines()
    assert lines[0] == "level,sup_norm,log2_ratio"
    assert any(l.startswith("fitted_slope,") for l in lines)


def test_decay_bad_levels(tmp_path):
    assert run("decay", "--preset", "wobble", "--manifold", "sphere2",
               "--levels", "wat", "--out", str(tmp_path / "d.csv")) == 2


def test_sample_unknown_preset(tmp_path):
    assert run("sample", "--preset", "bogus", "--manifold", "sphere2",
               "--level", "3", "--out", str(tmp_path / "s.json")) == 2


def test_sample_manifold_mismatch(tmp_path):
    assert run("sample", "--preset", "wobble", "--manifold", "so3-quat",
               "--level", "3", "--out", str(tmp_path / "s.json")) == 2


def test_decompose_schema_error_exit_2(tmp_path):
    bad = str(tmp_path / "bad.json")
    with open(bad, "w") as fh:
        fh.write('{"schema": "geomwave/1"}')
    assert run("decompose", "--in", bad, "--levels", "1",
               "--out", str(tmp_path / "p.json")) == 2
    assert run("decompose", "--in", str(tmp_path / "none.json"), "--levels", "1",
               "--out", str(tmp_path / "p.json")) == 2


def test_antipodal_decompose_exit_3(tmp_path, capsys):
    M = Sphere2()
    P = np.array([[1.0, 0, 0], [0, 1.0, 0], [-1.0, 0, 0], [0, -1.0, 0]])
    c = ManifoldHermiteSeq(M, P, np.zeros_like(P), level=1)
    s = str(tmp_path / "anti.json")
    write_samples(c, s)
    code = run("decompose", "--in", s, "--levels", "1",
               "--out", str(tmp_path / "p.json"))
    assert code == 3
    err = capsys.readouterr().err
    assert "level" in err and "dense" in err


def test_corrupted_pyramid_exit_2(tmp_path):
    s = str(tmp_path / "s.json")
    p = str(tmp_path / "p.json")
    run("sample", "--preset", "wobble", "--manifold", "sphere2",
        "--level", "5", "--out", s)
    run("decompose", "--in", s, "--levels", "2", "--out", p)
    obj = json.load(open(p))
    base = np.array(obj["details"][0][1]["base"])
    base[0] += 1e-4
    obj["details"][0][1]["base"] = list(base / np.linalg.norm(base))
    json.dump(obj, open(p, "w"))
    assert run("reconstruct", "--in", p, "--out", str(tmp_path / "r.json")) == 2


def test_verify_cli(tmp_path, capsys):
    out = str(tmp_path / "v.json")
    cfg = str(tmp_path / "cfg.txt")
    with open(cfg, "w") as fh:
        fh.write("probes = 2\ncases = 5\nlevels = 2\n")
    code = run("verify", "--config", cfg, "--out", out)
    report = json.load(open(out))
    printed = capsys.readouterr().out
    assert len(report["checks"]) >= 15
    assert ("PASS" in printed) and (code in (0, 4))
    assert code == (0 if report["passed"] else 4)


def test_verify_missing_config(tmp_path):
    assert run("verify", "--config", str(tmp_path / "none.txt"),
               "--out", str(tmp_path / "v.json")) == 2
