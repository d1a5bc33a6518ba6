import json
import subprocess
import sys

import numpy as np
import pytest

from trispline import cli
from trispline.demo import square_mesh
from trispline.mesh import Mesh, VertexGradientData, serialize_mesh


@pytest.fixture
def square(tmp_path):
    path = tmp_path / "square.json"
    assert cli.main(["demo", "--field", "linear", "--out", str(path)]) == 0
    return path


def _exit_code(argv):
    """Exit status whether main returns it or argparse raises SystemExit."""
    try:
        return cli.main(argv)
    except SystemExit as exc:
        return exc.code


def _write(tmp_path, name, mesh, data=None, config=None):
    path = tmp_path / name
    path.write_text(serialize_mesh(mesh, data, config))
    return path


def test_validate(square, tmp_path, capsys):
    assert cli.main(["validate", str(square)]) == 0
    assert json.loads(capsys.readouterr().out)["pass"] is True
    tj = _write(tmp_path, "tj.json", Mesh([(0, 0), (2, 0), (1, 1), (0, 2), (1, 0)],
                                          [(0, 1, 3), (0, 4, 2), (4, 1, 2)]))
    assert cli.main(["validate", str(tj)]) == 1
    assert "conformity" in capsys.readouterr().out
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{{{")
    assert cli.main(["validate", str(garbage)]) == 2
    assert cli.main(["validate", str(tmp_path / "missing.json")]) == 2


def test_eval(tmp_path, capsys):
    tri = Mesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])
    data = VertexGradientData(np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0]], dtype=float))
    path = _write(tmp_path, "tri.json", tri, data)
    assert cli.main(["eval", str(path), "--at", "0.3333333333333333,0.3333333333333333"]) == 0
    out = capsys.readouterr().out.split()
    assert out[0].startswith("f=") and float(out[0][2:]) == pytest.approx(22 / 81, abs=1e-15)
    assert out[3] == "tri=0"
    assert cli.main(["eval", str(path), "--at", "5,5"]) == 1
    zero = _write(tmp_path, "zero.json", tri, VertexGradientData.zeros(3))
    capsys.readouterr()
    assert cli.main(["eval", str(zero), "--at", "0.2,0.2"]) == 0
    assert capsys.readouterr().out.strip() == "f=0 fx=0 fy=0 tri=0"
    nodata = _write(tmp_path, "nodata.json", tri)
    assert cli.main(["eval", str(nodata), "--at", "0.2,0.2"]) == 2


def test_eval_with_config(tmp_path, capsys):
    mesh = square_mesh()
    data = VertexGradientData(np.array([[1, 0.5, 0], [0, 0, 1], [2, 1, 1], [0, -1, 0]], float))
    plain = _write(tmp_path, "plain.json", mesh, data)
    inline = _write(tmp_path, "inline.json", mesh, data, {"phi1": [[1, 1]]})
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"phi1": [[1, 1]]}))
    outs = []
    for args in (["eval", str(plain), "--at", "0.3,0.4"],
                 ["eval", str(inline), "--at", "0.3,0.4"],
                 ["eval", str(plain), "--at", "0.3,0.4", "--config", str(cfg)]):
        assert cli.main(args) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] != outs[1] and outs[1] == outs[2]


def test_constant_demo_reproduces_constant(tmp_path, capsys):
    path = tmp_path / "c.json"
    assert cli.main(["demo", "--field", "constant", "--mesh", "grid", "3", "--out", str(path)]) == 0
    for at in ("0.1,0.9", "0.55,0.25", "0.999,0.001"):
        assert cli.main(["eval", str(path), "--at", at]) == 0
        f = float(capsys.readouterr().out.split()[0][2:])
        assert f == pytest.approx(1.5, abs=1e-12)


def test_sample(square, tmp_path):
    out = tmp_path / "s.csv"
    assert cli.main(["sample", str(square), "--grid", "2,2", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 5
    assert cli.main(["sample", str(square), "--grid", "17,9", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 154
    assert cli.main(["sample", str(square), "--bbox=-1,-1,2,2", "--grid", "3,3",
                     "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1].endswith(",,,-1")


@pytest.mark.parametrize("flags", [["--grid", "1,5"], ["--grid", "a,b"], ["--bbox", "0,0,1"],
                                   ["--grid", "3,3", "--bbox", "1,1,0,0"]])
def test_sample_bad_flags(square, flags):
    assert _exit_code(["sample", str(square), *flags]) == 2


@pytest.mark.parametrize("suite", cli.SUITES)
def test_check_suites_pass(square, suite, capsys):
    assert cli.main(["check", str(square), "--suite", suite, "--samples", "10"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["pass"] is True and rep["check"] == suite


def test_check_c1_tolerance(square, capsys):
    assert cli.main(["check", str(square), "--suite", "c1"]) == 0
    assert json.loads(capsys.readouterr().out)["max_jump"] <= 1e-9


def test_check_shear(square, capsys):
    assert cli.main(["check", str(square), "--suite", "invariance", "--shear"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["pass"] is True and rep["max_jump"] > 1e-3


def test_check_bad_flags(square):
    assert _exit_code(["check", str(square), "--suite", "nope"]) == 2
    assert _exit_code(["check", str(square), "--suite", "c1", "--samples", "0"]) == 2
    assert cli.main(["check", str(square), "--suite", "c1", "--shear"]) == 2


def test_seed_env_override(square, capsys, monkeypatch):
    outs = []
    for env in ("1", "1", "2"):
        monkeypatch.setenv(cli.SEED_ENV, env)
        assert cli.main(["check", str(square), "--suite", "invariance", "--samples", "20",
                         "--seed", "99"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] != outs[2]
    monkeypatch.setenv(cli.SEED_ENV, "junk")
    assert cli.main(["check", str(square), "--suite", "c1"]) == 2


def test_demo(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert cli.main(["demo", "--field", "trig", "--mesh", "grid", "4", "--out", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert (len(doc["vertices"]), len(doc["triangles"])) == (25, 32)
    assert cli.main(["demo", "--field", "quadratic", "--mesh", "fan"]) == 0
    assert "vertices" in json.loads(capsys.readouterr().out)
    assert cli.main(["demo", "--field", "nope"]) == 2
    assert cli.main(["demo", "--field", "linear", "--mesh", "hexagon"]) == 2
    assert cli.main(["demo", "--field", "linear", "--mesh", "grid", "x"]) == 2


def test_output_is_deterministic(square, capsys):
    for _ in range(2):
        cli.main(["sample", str(square), "--grid", "4,4"])
    first, second = capsys.readouterr().out.split("x,y,f,fx,fy,tri\n")[1:]
    assert first == second


def test_module_entry_point(square):
    proc = subprocess.run([sys.executable, "-m", "trispline", "check", str(square), "--suite",
                           "vertex"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["pass"] is True
