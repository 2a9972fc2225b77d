from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from hbspace.cli import main, validate_manifest
from hbspace.errors import ManifestError

MANIFESTS = Path(__file__).resolve().parent.parent / "demos" / "manifests"


def _load(name):
    return json.loads((MANIFESTS / name).read_text())


def _write(tmp_path, obj, name="m.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def test_identities_happy_path(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["identities", "--manifest", str(MANIFESTS / "pw_suite.json"), "--out", str(out)])
    assert code == 0
    reports = json.loads((out / "reports.json").read_text())
    assert all(r["passed"] for r in reports)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "ok" and summary["seed"] == 7


def test_console_script(tmp_path):
    r = subprocess.run([sys.executable, "-m", "hbspace.cli", "identities", "--manifest",
                        str(MANIFESTS / "pw_suite.json"), "--out", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr


def test_malformed_json(tmp_path, capsys):
    p = _write(tmp_path, '{"command": "identities", "space": {"family": "pw"')
    assert main(["identities", "--manifest", p, "--out", str(tmp_path / "o")]) == 2
    assert "manifest" in capsys.readouterr().err


@pytest.mark.parametrize("mutate,field", [
    (lambda m: m["parameters"]["checks"][1].__setitem__("which", "AB_99"),
     "parameters/checks/1/which"),
    (lambda m: m["space"].__setitem__("tau", -1), "space/tau"),
    (lambda m: m["space"].__setitem__("family", "hardy"), "space/family"),
    (lambda m: m.__setitem__("bogus", 1), "<root>"),
    (lambda m: m["parameters"]["checks"][0].pop("args"), "parameters/checks/0"),
])
def test_invalid_field_named(tmp_path, capsys, mutate, field):
    m = _load("pw_suite.json")
    mutate(m)
    out = tmp_path / "o"
    assert main(["identities", "--manifest", _write(tmp_path, m), "--out", str(out)]) == 2
    assert field in capsys.readouterr().err
    # no outputs besides the summary on invalid input
    assert sorted(os.listdir(out)) == ["summary.json"]
    assert json.loads((out / "summary.json").read_text())["field"] == field


def test_failing_tolerance(tmp_path, capsys):
    m = _load("pw_suite.json")
    m["parameters"]["checks"][0]["tolerance"] = 1e-30
    code = main(["identities", "--manifest", _write(tmp_path, m), "--out", str(tmp_path / "o")])
    assert code == 1
    assert "quartic" in capsys.readouterr().err
    s = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert s["failures"] == ["quartic"]


@pytest.mark.parametrize("name,files", [
    ("bessel_nodes.json", ["nodes.csv", "nodes.json"]),
    ("pw_interp.json", ["interp.csv"]),
    ("pw_frame.json", ["frame.json"]),
    ("pw_reconstruct.json", ["reconstruct.csv"]),
    ("pw_extremal.json", ["report.json"]),
])
def test_commands(tmp_path, name, files):
    m = _load(name)
    out = tmp_path / "o"
    assert main([m["command"], "--manifest", str(MANIFESTS / name), "--out", str(out)]) == 0
    assert sorted(os.listdir(out)) == sorted(files + ["summary.json"])


def test_determinism(tmp_path, monkeypatch):
    runs = []
    for i, threads in enumerate(("1", "4")):
        monkeypatch.setenv("HBSPACE_THREADS", threads)
        out = tmp_path / f"o{i}"
        assert main(["interp", "--manifest", str(MANIFESTS / "pw_interp.json"),
                     "--out", str(out), "--seed", "11"]) == 0
        runs.append({f: (out / f).read_bytes() for f in os.listdir(out)})
    assert runs[0] == runs[1]


def test_csv_format(tmp_path):
    out = tmp_path / "o"
    main(["nodes", "--manifest", str(MANIFESTS / "bessel_nodes.json"), "--out", str(out)])
    rows = (out / "nodes.csv").read_text().splitlines()
    assert rows[0] == "t,b1,b2,a,phase_slope,k2_diag"
    vals = [float(v) for v in rows[1].split(",")]
    assert all(repr(v) == repr(float("%.17g" % v)) for v in vals)


def test_direct_flags(tmp_path):
    nodes_dir = tmp_path / "n"
    main(["nodes", "--manifest", str(MANIFESTS / "bessel_nodes.json"), "--out", str(nodes_dir)])
    k = len(json.loads((nodes_dir / "nodes.json").read_text())["nodes"])
    data = _write(tmp_path, {"p": [1.0] + [0.0] * (k - 1), "q": [0.0] * k}, "data.json")
    out = tmp_path / "r"
    code = main(["reconstruct", "--space", '{"family": "bessel", "nu": 0.5}',
                 "--nodes", str(nodes_dir / "nodes.json"), "--data", data,
                 "--grid=-3:3:7", "--out", str(out)])
    assert code == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["max_node_residual"] < 1e-12
    bad = _write(tmp_path, {"p": [1.0], "q": [0.0]}, "bad.json")
    assert main(["reconstruct", "--space", '{"family": "bessel", "nu": 0.5}',
                 "--nodes", str(nodes_dir / "nodes.json"), "--data", bad,
                 "--grid=-3:3:7", "--out", str(tmp_path / "x")]) == 2
    prob = _write(tmp_path, {"side": "majorant", "g": "0", "space": {"family": "pw", "tau": 3.14159}},
                  "p.json")
    cand = _write(tmp_path, {"expr": "0"}, "c.json")
    assert main(["extremal", "--problem", prob, "--candidate", cand, "--window", "50",
                 "--grid", "0:10:1001", "--out", str(tmp_path / "e")]) == 0


def test_extremal_failure_named(tmp_path, capsys):
    m = _load("pw_extremal.json")
    m["parameters"]["candidate"] = {"expr": "sinc(pi*r)**2 - 0.01*exp(-r**2)"}
    code = main(["extremal", "--manifest", _write(tmp_path, m), "--out", str(tmp_path / "o")])
    assert code == 1
    assert "extremal_verification" in capsys.readouterr().err


def test_validate_manifest_direct():
    with pytest.raises(ManifestError) as e:
        validate_manifest({"command": "nodes", "space": {"family": "bessel"}})
    assert e.value.field == "space"
