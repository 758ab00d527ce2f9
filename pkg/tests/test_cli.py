import csv
import io
import json
import subprocess
import sys

import pytest

from framelab.cli import main, parse_zeros


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_muntz_sweep_lemma(capsys):
    code, out, _ = run(capsys, "muntz-sweep", "--quantity", "lemma", "--x", "1e-1,1e-2,1e-3")
    assert code == 0
    r = rows(out)
    assert list(r[0]) == ["parameter", "value", "tail_bound"]
    vals = [float(x["value"]) for x in r]
    assert vals[0] > vals[1] > vals[2]
    assert "# prng=numpy PCG64" in out


def test_frame_bounds_parseval_atom(capsys):
    code, out, _ = run(capsys, "frame-bounds", "--system", "explicit", "--mu", "0.5")
    r = {x["quantity"]: float(x["value"]) for x in rows(out)}
    assert code == 0 and abs(r["lower"] - 1) < 1e-10 and abs(r["upper"] - 1) < 1e-10


def test_frame_bounds_shift(capsys):
    code, out, _ = run(capsys, "frame-bounds", "--system", "shift", "--degree", "63")
    r = {x["quantity"]: float(x["value"]) for x in rows(out)}
    assert r == {"lower": 1.0, "upper": 1.0}


def test_wco_cowen_json(capsys):
    code, out, _ = run(capsys, "wco", "--phi", "1,0.5,0.5,1", "--check", "cowen", "--degree", "64", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["meta"]["prng"] == "numpy PCG64"
    row = dict(zip(obj["columns"], obj["rows"][0]))
    assert row["quantity"] == "cowen_defect" and float(row["value"]) < 1e-8


@pytest.mark.parametrize("check", ["invert", "unitary", "isometry", "orbit-frame"])
def test_wco_checks_on_bn_pair(capsys, check):
    code, out, _ = run(capsys, "wco", "--phi=-1,0.5,-0.5,1", "--weight-kind", "bn:0.5,1",
                       "--degree", "32", "--check", check, "--expect", "pass")
    assert code == 0, out


def test_expectation_failure_exit_code(capsys):
    code, _, err = run(capsys, "wco", "--phi", "0.5,0,0,1", "--check", "invert", "--expect", "pass")
    assert code == 2 and "not met" in err
    code, _, _ = run(capsys, "carleson", "--weights", "squared", "--expect", "fail")
    assert code == 0


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "wco", "--check", "cowen")[0] == 1
    assert run(capsys, "model", "--zeros", "0.3,0:1", "--check", "parseval")[0] == 1  # seed is mandatory
    assert run(capsys, "model", "--zeros", "0.3:1")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "wco", "--phi", "2,0,0,1", "--check", "invert")[0] == 1


def test_config_strict(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{\n  "zeros": "0.3,0:1",\n  "color": "red"\n}\n')
    code, _, err = run(capsys, "model", "--config", str(cfg))
    assert code == 1 and ":3:" in err and "color" in err
    cfg.write_text('{"zeros": "0.3,0:1",\n "check": }')
    code, _, err = run(capsys, "model", "--config", str(cfg))
    assert code == 1 and ":2:" in err
    cfg.write_text('{"kind": "wco", "zeros": "0.3,0:1"}')
    assert run(capsys, "model", "--config", str(cfg))[0] == 1


def test_config_and_byte_determinism(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"zeros": "0.3,0:1,0.6,0:1,0.5,0:2", "check": "parseval", "seed": 11,
                               "format": "json"}))
    outs = []
    for name in ("a.json", "b.json"):
        assert main(["model", "--config", str(cfg), "--out", str(tmp_path / name)]) == 0
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]
    meta = json.loads(outs[0])["meta"]
    assert meta["seed"] == 11 and meta["verdict"] == "pass"


def test_model_checks(capsys):
    for check in ("spectrum", "jordan"):
        code, out, _ = run(capsys, "model", "--zeros", "0.3,0:1,0.6,0:1,0.5,0:2", "--check", check, "--expect", "pass")
        assert code == 0, out


def test_interp(capsys, tmp_path):
    prob = tmp_path / "p.json"
    nodes = [[1 - 2.0**-k, 0] for k in range(6)]
    weights = [(2.0**-k) ** 0.5 for k in range(6)]
    prob.write_text(json.dumps({"nodes": nodes, "weights": weights, "targets": [[1, 0]] * 6, "N": 1, "degree": 64}))
    code, out, _ = run(capsys, "interp", "--problem", str(prob), "--expect", "pass")
    r = {x["quantity"]: x for x in rows(out)}
    assert code == 0 and float(r["residual"]["value"]) < 1e-8 and r["weight_band_ratio"]["passed"] == "true"


def test_frame_bounds_matrix_export(capsys, tmp_path):
    path = tmp_path / "S.csv"
    assert run(capsys, "frame-bounds", "--count", "4", "--matrix-out", str(path))[0] == 0
    assert path.read_text().splitlines()[0] == "row,col,re,im"


def test_parse_zeros():
    assert parse_zeros("0.3,0:1,0.5,-0.1:2") == ((0.3, 1), (0.5 - 0.1j, 2))


def test_module_entry_point_and_threads(tmp_path):
    env = {"FRAMELAB_THREADS": "1", "PATH": ""}
    p = subprocess.run([sys.executable, "-m", "framelab", "muntz-sweep", "--exponents", "naturals"],
                       capture_output=True, text=True, env=env)
    assert p.returncode == 0
    assert all(abs(float(x["value"]) - 1) < 1e-12 for x in rows(p.stdout))
