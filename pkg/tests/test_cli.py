import json
import subprocess
import sys

import numpy as np
import pytest

from slinverse import Potential
from slinverse.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines()]


@pytest.fixture(scope="module")
def mathieu_spec(tmp_path_factory):
    path = tmp_path_factory.mktemp("spec") / "mathieu.json"
    assert main(["forward", "--potential", "witness:mathieu", "--out", str(path)]) == 0
    return path


def test_forward_zero_periodic(tmp_path, capsys):
    out = tmp_path / "z.json"
    code, recs = run(capsys, "forward", "--potential", "witness:zero", "--problem", "periodic", "--N", 20, "--out", out)
    assert code == 0
    spec = json.loads(out.read_text())
    assert np.allclose(spec["lambda"][:5], [0, 4, 4, 16, 16], atol=1e-8)
    assert spec["eps"] == [0] * 20
    assert all(r.get("passed", True) for r in recs)


def test_forward_dirichlet_reports_weight_identity(tmp_path, capsys):
    code, recs = run(capsys, "forward", "--potential", "witness:mathieu", "--problem", "dirichlet", "--N", 20,
                     "--out", tmp_path / "d.json")
    assert code == 0
    spec = json.loads((tmp_path / "d.json").read_text())
    assert {"gamma", "alpha", "beta"} <= set(spec)
    assert any(r["check"] == "weight_identity" and r["passed"] for r in recs)


def test_forward_bvpb(tmp_path, capsys):
    out = tmp_path / "b.json"
    code, _ = run(capsys, "forward", "--potential", "witness:zero", "--problem", "bvpb", "--a", 0, "--b", 1,
                  "--N", 20, "--out", out)
    assert code == 0
    spec = json.loads(out.read_text())
    assert spec["h"] == 0.0 and len(spec["mu"]) == 21 and len(spec["eta"]) == 21


def test_verify_pass_and_tamper(tmp_path, capsys, mathieu_spec):
    code, recs = run(capsys, "verify", "--spectrum", mathieu_spec)
    assert code == 0 and all(r.get("passed", True) for r in recs)
    spec = json.loads(mathieu_spec.read_text())
    spec["lambda"][2] = spec["lambda"][3] - 0.3 * (spec["lambda"][3] - spec["lambda"][2])
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(spec))
    code, recs = run(capsys, "verify", "--spectrum", bad)
    assert code == 1
    # the narrowed band also swallows lambda+_3, lambda+_4
    assert [r["check"] for r in recs if r.get("passed") is False] == ["6", "7"]


def test_verify_zero_margins(tmp_path, capsys):
    out = tmp_path / "z.json"
    main(["forward", "--potential", "witness:zero", "--out", str(out)])
    capsys.readouterr()
    code, recs = run(capsys, "verify", "--spectrum", out)
    assert code == 0
    c6 = next(r for r in recs if r["check"] == "6")
    assert abs(c6["worst_margin"]) < 1e-6


def test_inverse_ip3_constant(tmp_path, capsys):
    spec = tmp_path / "g.json"
    spec.write_text(json.dumps({"gamma": [n * n + 1.0 for n in range(1, 41)]}))
    out = tmp_path / "q.json"
    code, _ = run(capsys, "inverse", "--spectrum", spec, "--problem", "ip3", "--out", out)
    assert code == 0
    q = Potential.load(out)
    assert q.symmetric and np.allclose(q.values, 1.0, atol=1e-6)


def test_inverse_ip4_flipped(tmp_path, capsys, mathieu_spec):
    spec = json.loads(mathieu_spec.read_text())
    spec["eps"][0] = -spec["eps"][0]
    path = tmp_path / "flip.json"
    path.write_text(json.dumps(spec))
    code, recs = run(capsys, "inverse", "--spectrum", path, "--problem", "ip4", "--out", tmp_path / "q.json")
    assert code == 0
    assert next(r for r in recs if r["check"] == "reverify_eps")["passed"]


def test_inverse_characterization_exit(tmp_path, capsys, mathieu_spec):
    spec = json.loads(mathieu_spec.read_text())
    spec["eps"][0] = 0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(spec))
    code, recs = run(capsys, "inverse", "--spectrum", path, "--problem", "ip4")
    assert code == 4
    assert recs[-1]["condition"] == "J1"


@pytest.mark.parametrize("argv", [
    ["forward", "--potential", "missing.json"],
    ["forward", "--potential", "witness:nope"],
    ["inverse", "--spectrum", "missing.json", "--problem", "ip3"],
    ["forward", "--potential", "witness:zero", "--tol", "gap_length=-1"],
    ["forward", "--potential", "witness:zero", "--tol", "bogus=1"],
    ["roundtrip", "--potential", "witness:zero", "--problem", "dirichlet"],
])
def test_bad_input_exit(capsys, argv):
    code, recs = run(capsys, *argv)
    assert code == 2 and recs[-1]["check"] == "input"


def test_solver_failure_exit(tmp_path, capsys):
    path = tmp_path / "coarse.json"
    Potential.constant(0.0, M=16).save(path)
    code, recs = run(capsys, "forward", "--potential", path, "--N", 40)
    assert code == 3 and recs[-1]["check"] == "solver"


@pytest.mark.parametrize("name,problem,limit", [("zero", "ip4", 1e-4), ("mathieu", "ip4", 1e-2), ("const", "ip3", 1e-3)])
def test_roundtrip(capsys, name, problem, limit):
    code, recs = run(capsys, "roundtrip", "--potential", f"witness:{name}", "--problem", problem)
    assert code == 0
    assert next(r for r in recs if r["check"] == "l2")["l2"] <= limit


def test_roundtrip_exit5_when_tolerance_exceeded(capsys):
    code, _ = run(capsys, "roundtrip", "--potential", "witness:x", "--problem", "ip3")
    assert code == 5


def test_forward_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    outs = []
    for p in paths:
        res = subprocess.run(
            [sys.executable, "-m", "slinverse.cli", "forward", "--potential", "witness:abs", "--N", "20", "--out", str(p)],
            capture_output=True, text=True, check=True,
        )
        outs.append(res.stdout)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert outs[0] == outs[1]
