import json
import math
from pathlib import Path

import pytest

from svc.cli import BOOST_COLUMNS, main

pytestmark = pytest.mark.unit

FIXTURES = Path(__file__).parent / "fixtures"


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_boost_csv(capsys):
    code, out, _ = _run(capsys, "boost", "--eta", "1.0", "--point", "1,0", "--point", "0,2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == BOOST_COLUMNS
    assert len(lines) == 3
    row = [float(v) for v in lines[1].split(",")]
    assert row[2] == pytest.approx(math.cosh(0.5), abs=1e-15)
    assert row[3] == pytest.approx(math.sinh(0.5), abs=1e-15)
    assert row[9] == pytest.approx(row[8], abs=1e-14)


def test_boost_json(capsys):
    code, out, _ = _run(capsys, "boost", "--eta", "-2", "--point", "3,1", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["frame_velocity"] == pytest.approx(math.tanh(-1.0))
    assert report["max_invariant_drift"] < 1e-12
    assert report["config"]["eta"] == -2.0


def test_density_writes_grid_and_summary(capsys, tmp_path):
    out_path = tmp_path / "grid.csv"
    args = ["density", "--eta", "1", "--out", str(out_path)]
    code, out, _ = _run(capsys, *args)
    assert code == 0
    summary = json.loads(out)
    assert summary["axes_ratio"] == pytest.approx(math.e, rel=1e-6)
    assert summary["normalization"] == pytest.approx(1.0, abs=1e-10)
    assert summary["major_axis_angle_deg"] == pytest.approx(45.0, abs=1e-6)
    text = out_path.read_text()
    assert text.startswith("# eta=1 ")
    assert len(text.splitlines()) == 202

    first = out_path.read_bytes()
    assert _run(capsys, *args)[0] == 0
    assert out_path.read_bytes() == first


def test_density_json_from_config_file(capsys, tmp_path):
    out_path = tmp_path / "grid.json"
    code, _, _ = _run(
        capsys,
        "density",
        "--config",
        str(FIXTURES / "run_config.json"),
        "--format",
        "json",
        "--out",
        str(out_path),
    )
    assert code == 0
    grid = json.loads(out_path.read_text())
    assert grid["eta"] == 0.5
    assert (grid["n_z"], grid["n_t"]) == (41, 41)
    assert len(grid["values"]) == 41


def test_density_rapidity_out_of_range(capsys, tmp_path):
    code, _, err = _run(capsys, "density", "--eta", "20", "--out", str(tmp_path / "g.csv"))
    assert code == 4
    assert "RapidityOutOfRange" in err


def test_density_unwritable_output(capsys, tmp_path):
    code, _, _ = _run(
        capsys, "density", "--nz", "41", "--nt", "41", "--out", str(tmp_path / "no" / "g.csv")
    )
    assert code == 3


def test_density_needs_output(capsys):
    assert _run(capsys, "density", "--nz", "11", "--nt", "11")[0] == 2


def test_density_underresolved_quadrature(capsys, tmp_path):
    code, _, err = _run(capsys, "density", "--order", "12", "--out", str(tmp_path / "g.csv"))
    assert code == 5
    assert "QuadratureUnderResolved" in err


@pytest.mark.parametrize("eta", ["10", "6"])
def test_density_grid_too_coarse_for_rapidity(capsys, tmp_path, eta):
    out_path = tmp_path / "g.csv"
    code, out, err = _run(capsys, "density", "--eta", eta, "--out", str(out_path))
    assert code == 5
    assert "GridUnderResolved" in err
    assert out == ""
    assert not out_path.exists()


def test_modes(capsys):
    code, out, _ = _run(capsys, "modes", "--A", "5", "--C", "3")
    assert code == 0
    report = json.loads(out)
    assert report["K"] == pytest.approx(4.0)
    assert report["exp_2eta"] == pytest.approx(0.5)
    assert report["eigenvalues"] == pytest.approx([2.0, 8.0])


def test_modes_degenerate(capsys):
    assert _run(capsys, "modes", "--A", "5", "--C", "5")[0] == 4


def test_expand_at_rest(capsys):
    code, out, _ = _run(capsys, "expand", "--eta", "0", "--nmax", "8")
    assert code == 0
    report = json.loads(out)
    assert report["coefficients"][0] == pytest.approx(1.0, abs=1e-12)
    assert max(abs(c) for c in report["coefficients"][1:]) < 1e-12
    assert report["ratio_expected"] == 0.0


def test_expand_closed_form(capsys):
    code, out, _ = _run(capsys, "expand", "--eta", "1", "--nmax", "16")
    assert code == 0
    assert json.loads(out)["max_deviation_from_closed_form"] < 1e-12


def test_residual(capsys):
    code, out, _ = _run(capsys, "residual", "--eta", "1", "--h", "1e-3")
    assert code == 0
    report = json.loads(out)
    assert abs(report["lambda_fit"]) < 1e-5
    assert report["lambda_4d"] == pytest.approx(1.0, abs=1e-5)
    assert report["n_points"] == 81
    assert report["max_residual"] <= 1e-5


def test_residual_above_tolerance(capsys):
    code, _, err = _run(capsys, "residual", "--eta", "1", "--h", "1e-2", "--tol", "1e-12")
    assert code == 5
    assert "ResidualAboveTolerance" in err


def test_residual_step_out_of_range(capsys):
    assert _run(capsys, "residual", "--h", "0.5")[0] == 2


def test_algebra_check(capsys):
    code, out, _ = _run(capsys, "algebra-check", "--nmax", "8")
    assert code == 0
    closure = json.loads(out)["closure"]
    assert closure["closed"] is True
    assert len(closure["pairs"]) == 45


def test_algebra_check_cutoff_too_small(capsys):
    assert _run(capsys, "algebra-check", "--nmax", "4")[0] == 4


def test_missing_config_file(capsys, tmp_path):
    assert _run(capsys, "modes", "--config", str(tmp_path / "absent.json"))[0] == 3


def test_unknown_config_key(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text('{"speed": 1}')
    assert _run(capsys, "modes", "--config", str(path))[0] == 2


def test_unparseable_flag():
    with pytest.raises(SystemExit) as exc:
        main(["boost", "--eta", "abc"])
    assert exc.value.code == 2


def test_output_file(capsys, tmp_path):
    out_path = tmp_path / "modes.json"
    code, out, _ = _run(capsys, "modes", "--A", "2", "--out", str(out_path))
    assert code == 0
    assert out == ""
    assert json.loads(out_path.read_text())["eta"] == 0.0


def test_boost_negative_values_in_equals_form(capsys):
    code, out, _ = _run(capsys, "boost", "--eta=-1e-3", "--point=-1,0")
    assert code == 0
    row = [float(v) for v in out.splitlines()[1].split(",")]
    assert row[0] == -1.0
    assert row[2] == pytest.approx(-math.cosh(-5e-4), abs=1e-15)
    assert row[3] == pytest.approx(-math.sinh(-5e-4), abs=1e-15)


def test_identity_boost(capsys):
    code, out, _ = _run(capsys, "boost", "--eta", "0", "--point", "1,0")
    assert code == 0
    row = [float(v) for v in out.splitlines()[1].split(",")]
    assert row[2:4] == [1.0, 0.0]
    assert row[9] == pytest.approx(0.5, abs=1e-15)


def test_density_circular_at_rest(capsys, tmp_path):
    code, out, _ = _run(capsys, "density", "--eta", "0", "--out", str(tmp_path / "g.csv"))
    assert code == 0
    assert json.loads(out)["axes_ratio"] == pytest.approx(1.0, abs=1e-10)
