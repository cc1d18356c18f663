import hashlib
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from constangle.cli import parse_number, run
from constangle.curves import Polyline3
from constangle.export import MeshData, grid_faces, read_csv, write_csv, write_obj

DINI = ["--family", "dini", "--theta", "1.0471975512", "--c", "1"]


def json_out(capsys, argv):
    assert run(argv) == 0
    return json.loads(capsys.readouterr().out)


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


# --- argument handling ---------------------------------------------------------------


@pytest.mark.parametrize("text, value", [("pi", math.pi), ("pi/3", math.pi / 3), ("-pi/2", -math.pi / 2), ("0.25", 0.25)])
def test_parse_number(text, value):
    assert parse_number(text) == value


def test_surface_happy_path(tmp_path):
    out = tmp_path / "dini.obj"
    assert run(["surface", *DINI, "--nu", "64", "--nv", "64", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert sum(1 for s in lines if s.startswith("v ")) == 4096
    assert sum(1 for s in lines if s.startswith("f ")) == 7938
    channels = (tmp_path / "dini.obj.channels.csv").read_text().splitlines()
    assert channels[0] == "index,H,K,angle" and len(channels) == 4097
    angle = np.array([float(r.split(",")[3]) for r in channels[1:]])
    np.testing.assert_allclose(angle, 1.0471975512, atol=1e-9)


def test_theta_out_of_band_is_usage_error(tmp_path, capsys):
    code = run(["surface", "--family", "dini", "--theta", "1.6", "--c", "1", "--out", str(tmp_path / "x.obj")])
    assert code == 2
    assert "theta" in capsys.readouterr().err
    assert not (tmp_path / "x.obj").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["surface"],
        ["surface", "--family", "torus", "--out", "x"],
        ["curve", "--kind", "circle"],
        ["verify", "--family", "dini", "--theta", "abc"],
        ["verify", "--family", "halfplane", "--field", "rotW"],
        [],
    ],
)
def test_usage_errors(argv):
    assert run(argv) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--family", "dini", "--theta", "0", "--c", "1"],
        ["verify", "--family", "dini", "--theta", "pi/3", "--c", "-1"],
        ["verify", "--family", "dini", "--theta", "pi/3", "--u-range", "0.0", "1.0"],
        ["verify", "--family", "logspiral"],
        ["curve", "--kind", "line", "--range", "-1", "1"],
    ],
)
def test_domain_errors(argv, capsys):
    assert run(argv) == 3
    err = capsys.readouterr().err
    assert err.startswith("constangle: error:") and err.count("\n") == 1


def test_unwritable_path_is_io_error(tmp_path):
    assert run(["curve", "--kind", "circle", "--range", "0", "1", "--out", str(tmp_path / "no" / "x.csv")]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "constangle", "verify", *DINI], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("theta_mean=1.0471975512")


# --- verify / classify / report ------------------------------------------------------


def test_verify_json(capsys):
    data = json_out(capsys, ["verify", *DINI, "--field", "rotZ", "--json"])
    assert data["theta_mean"] == pytest.approx(1.047198, abs=1e-6)
    assert data["theta_max_dev"] < 1e-6
    assert data["arg_theta"] == 1.0471975512 and data["arg_c"] == 1.0


def test_verify_fd(capsys):
    data = json_out(capsys, ["verify", *DINI, "--fd", "--json"])
    assert data["theta_max_dev"] < 1e-6


def test_report_dini(capsys):
    data = json_out(capsys, ["report", "--family", "dini", "--theta", "pi/4", "--c", "2"])
    assert data["K_mean"] == pytest.approx(-4.0, rel=1e-10)
    assert data["family"] == "dini"
    assert data["c_hat"] == pytest.approx(2.0, rel=1e-10)
    for key in ("theta_mean_rad", "theta_max_dev_rad", "K_mean", "K_stddev", "H_mean", "family", "c_hat", "grid_nu", "grid_nv"):
        assert key in data
    assert list(data) == sorted(data)


def test_report_halfplane(capsys):
    data = json_out(capsys, ["report", "--family", "halfplane"])
    assert data["family"] == "halfplane"
    assert data["theta_mean_rad"] == 0.0
    assert data["c_hat"] is None


def test_report_rotational(capsys):
    data = json_out(capsys, ["report", "--family", "rotational"])
    assert data["family"] == "rotational"
    assert data["theta_mean_rad"] == pytest.approx(1.5707963, abs=1e-7)
    assert abs(data["H_mean"]) < 1e-6
    data = json_out(capsys, ["report", "--family", "rotational", "--profile", "cone"])
    assert data["theta_mean_rad"] == pytest.approx(math.pi / 2, abs=1e-12)


def test_classify_text(capsys):
    assert run(["classify", "--family", "logspiral", "--theta", "pi/4", "--c", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("logspiral_cylinder theta_hat=0.785398163")


def test_report_to_file(tmp_path):
    out = tmp_path / "r.json"
    assert run(["report", "--family", "catenoid", "--scale", "2", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["arg_scale"] == 2.0


# --- file formats --------------------------------------------------------------------


def test_csv_segment(tmp_path):
    out = tmp_path / "seg.csv"
    write_csv(Polyline3([0.0, 1.0], [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]), out)
    text = out.read_text()
    assert text.splitlines() == ["s,x,y,z", "0,0,0,0", "1,1,0,0"]
    assert text.endswith("\n") and "\r" not in text


def test_csv_round_trip_is_bit_exact(tmp_path):
    out = tmp_path / "c.csv"
    assert run(["curve", "--kind", "spatial", "--omega", "affine", "--m", "0.5", "--theta", "pi/6",
                "--r0", "0.2", "--range", "0", "3", "--samples", "333", "--out", str(out)]) == 0
    c = read_csv(out)
    out2 = tmp_path / "c2.csv"
    write_csv(c, out2)
    assert out.read_bytes() == out2.read_bytes()
    assert len(c) == 333


def test_csv_empty(tmp_path):
    out = tmp_path / "e.csv"
    write_csv(Polyline3([], np.zeros((0, 3))), out)
    assert out.read_text() == "s,x,y,z\n"


def test_obj_two_by_two(tmp_path):
    out = tmp_path / "m.obj"
    mesh = MeshData([[0, 0, 0], [0, 1, 0], [1, 0, 0], [1, 1, 0]], grid_faces(2, 2))
    write_obj(mesh, out)
    assert out.read_text().splitlines()[-2:] == ["f 1 3 4", "f 1 4 2"]
    assert len(out.read_text().splitlines()) == 6


def test_mesh_rejects_bad_faces():
    with pytest.raises(ValueError):
        MeshData(np.zeros((3, 3)), [[0, 1, 3]])


@pytest.mark.parametrize(
    "argv, name",
    [
        (["surface", "--family", "logspiral", "--theta", "0.7", "--nu", "9", "--nv", "7"], "s.obj"),
        (["curve", "--kind", "vs-circle", "--sigma", "square", "--theta", "pi/3", "--range", "-1", "2"], "c.csv"),
        (["report", "--family", "dini", "--theta", "0.9", "--c", "1.3", "--fd"], "r.json"),
    ],
)
def test_determinism(tmp_path, argv, name):
    hashes = set()
    for k in range(3):
        out = tmp_path / f"{k}-{name}"
        assert run([*argv, "--out", str(out)]) == 0
        hashes.add(sha(out))
    assert len(hashes) == 1
