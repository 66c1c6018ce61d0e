import json

import numpy as np
import pytest

from app.cli import main, parse_params, parse_surfaces
from app.core.errors import InvalidParameter
from app.geometry.canonical import type_a_cube
from app.geometry.construct import bipolar_patch
from app.io.cube_file import load_cube, save_patch


def test_parse_params():
    assert parse_params("1,2,3") == [1.0, 2.0, 3.0]
    assert parse_params("") is None
    with pytest.raises(InvalidParameter):
        parse_params("1,x")


def test_parse_surfaces():
    assert parse_surfaces("u=0,0.5;s=2") == [(2, 0.0), (2, 0.5), (0, 2.0)]
    with pytest.raises(InvalidParameter):
        parse_surfaces("u0.5")


def test_build_writes_cube_file(tmp_path, capsys):
    path = tmp_path / "cube.json"
    assert main(["build", "--family", "A", "--params", "1,2,3", "-o", str(path)]) == 0
    loaded = load_cube(path)
    assert loaded.same_net(type_a_cube(1.0, 2.0, 3.0))
    out = capsys.readouterr().out
    assert "p111" in out
    assert "sigma_s" in out


def test_build_json_output(tmp_path, capsys):
    path = tmp_path / "s1.json"
    assert main(["--json", "build", "--family", "S1", "-o", str(path)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["family"] == "S1"
    assert data["params"] == {"a": 0.5}
    assert set(data["sigma"]) == {"s", "t", "u"}


def test_build_offset_of_patch_file(tmp_path):
    patch = save_patch(bipolar_patch(0.5), tmp_path / "patch.json")
    path = tmp_path / "offset.json"
    assert main(["build", "--offset", str(patch), "--distance", "1.0", "-o", str(path)]) == 0
    cube = load_cube(path)
    np.testing.assert_array_equal(cube.u[:4], bipolar_patch(0.5).u)


def test_invalid_input_exit_code(tmp_path, capsys):
    assert main(["build", "--family", "Nope", "-o", str(tmp_path / "x.json")]) == 2
    assert "unknown family" in capsys.readouterr().err
    assert main(["build", "--offset", "patch.json", "-o", str(tmp_path / "x.json")]) == 2
    assert main(["classify", str(tmp_path / "missing.json")]) == 2
    assert main(["export", "--output-dir", str(tmp_path)]) == 2


def test_classify_spherical_cube(tmp_path, capsys):
    path = tmp_path / "s1.json"
    main(["build", "--family", "S1", "-o", str(path)])
    capsys.readouterr()
    report = tmp_path / "report.json"
    assert main(["--json", "classify", str(path), "-o", str(report)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["subtype"] == "S1"
    assert data["coarse"] == "S"
    assert json.loads(report.read_text())["label"] == "S1"


def test_export_surfaces(tmp_path, capsys):
    path = tmp_path / "s1.json"
    main(["build", "--family", "S1", "-o", str(path)])
    capsys.readouterr()
    out_dir = tmp_path / "out"
    assert main(["export", str(path), "--surfaces", "u=0,0.25", "--resolution", "4",
                 "--output-dir", str(out_dir)]) == 0
    written = capsys.readouterr().out.split()
    assert [p.split("/")[-1] for p in written] == ["s1_u_0.obj", "s1_u_0.25.obj"]
    assert (out_dir / "s1_u_0.obj").exists()


def test_export_degenerate_slice_exit_code(tmp_path):
    path = tmp_path / "s1.json"
    main(["build", "--family", "S1", "-o", str(path)])
    # u = 1/2 collapses the concentric family to its center
    assert main(["export", str(path), "--surfaces", "u=0.5", "--output-dir", str(tmp_path)]) == 3
