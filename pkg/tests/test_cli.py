import json
import subprocess
import sys

import numpy as np
import pytest

from harmsurf.cli import run


def test_lengths_csv_square(tmp_path, capsys):
    code = run(["lengths", "--input", "builtin:square", "--radii", "0.9,0.99,0.999",
                "--format", "csv", "--output-dir", str(tmp_path)])
    assert code == 0
    rows = (tmp_path / "lengths.csv").read_text().splitlines()
    assert rows[0] == "r,length,tv_reference"
    lengths = [float(r.split(",")[1]) for r in rows[1:]]
    assert lengths == sorted(lengths)
    assert lengths[-1] == pytest.approx(4 * np.sqrt(2), rel=0.01)


def test_sharpness_table(capsys):
    assert run(["sharpness", "--m", "0,1,10,100,1000", "--format", "csv"]) == 0
    last = capsys.readouterr().out.strip().splitlines()[-1]
    assert abs(float(last.split(",")[-1]) - 0.5) < 0.01


def test_isoperimetric_identity_json(capsys):
    assert run(["isoperimetric", "--input", "builtin:identity"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["report"]["deficit"]) <= 1e-8
    assert doc["quadrature"]["angular_nodes"] == 4096 and doc["satisfied"]


def test_byte_identical_output(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["riesz-zygmund", "--input", "builtin:enneper", "--directions", "4",
                    "--output-dir", str(d)]) == 0
    assert (a / "riesz-zygmund.json").read_bytes() == (b / "riesz-zygmund.json").read_bytes()


@pytest.mark.parametrize("argv", [
    ["nonsense"],
    ["lengths", "--input", "builtin:sphere"],
    ["lengths", "--radii", "a,b"],
    ["lengths", "--input", "/nonexistent/file.json"],
    ["cluster", "--input", "builtin:enneper"],
])
def test_usage_errors_exit_1(argv, capsys):
    assert run(argv) == 1


def test_violation_exit_2(tmp_path, capsys):
    # harmonic inputs satisfy every inequality, so use a cluster tolerance
    # that R = 100 cannot reach
    code = run(["cluster", "--input", "builtin:square", "--R", "10,100", "--cluster-tol", "1e-9"])
    assert code == 2
    assert "VIOLATION" in capsys.readouterr().err


def test_accuracy_failure_exit_3(capsys):
    code = run(["lengths", "--input", "builtin:square", "--radii", "0.999",
                "--angular-nodes", "16", "--tol", "1e-15"])
    assert code == 3


def test_curvature_and_mesh(tmp_path, capsys):
    assert run(["curvature", "--input", "builtin:enneper", "--grid", "4x8", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("r,theta,E,F,G,J,K_det,K_brioschi,degenerate")
    assert run(["mesh", "--input", "builtin:identity", "--grid", "8x16",
                "--output-dir", str(tmp_path)]) == 0
    text = (tmp_path / "identity.obj").read_text()
    assert sum(l.startswith("v ") for l in text.splitlines()) == 129


def test_extend_area_cluster(capsys):
    assert run(["extend", "--input", "builtin:identity", "--points", "0.3+0.4j"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["report"]["values"] == [[0.3, 0.4]]
    assert run(["area", "--input", "builtin:tilted:1", "--format", "csv"]) == 0
    assert run(["cluster", "--input", "builtin:square", "--lambda", "0"]) == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "harmsurf", "sharpness", "--m", "0", "--format", "csv"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.startswith("m,diameter,perimeter,ratio")
