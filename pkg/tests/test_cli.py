import io
import json
import subprocess
import sys

import pytest

from cylindex import cli, models, spec_io
from cylindex.errors import ValidationError
from cylindex.fedosov import SymbolGrid3
from cylindex.symbol_core import Base


def run(argv):
    buf = io.StringIO()
    args = cli.build_parser().parse_args(argv)
    code = cli.run(cli.RunConfig(**vars(args)), buf)
    return code, buf.getvalue()


@pytest.fixture
def spec_file(tmp_path):
    def write(spec, name="spec.json"):
        path = tmp_path / name
        spec_io.dump(spec, path)
        return str(path)

    return write


def test_check_on_tau_multiplier(spec_file):
    code, out = run(["check", "--input", spec_file(models.dt_lambda(Base.POINT)), "--format", "json"])
    doc = json.loads(out)
    assert code == 0
    assert doc["elliptic"] is True and doc["fredholm"] is False and doc["margin"] == pytest.approx(1.0)


def test_check_on_shifted_multiplier(spec_file):
    code, out = run(["check", "--input", spec_file(models.dbar_spec(0.5, Base.POINT)), "--format", "json"])
    assert code == 0 and json.loads(out)["fredholm"] is True


def test_verify_calibration(spec_file):
    code, out = run(["verify", "--input", spec_file(models.calibration_spec()), "--format", "json"])
    doc = json.loads(out)
    assert code == 0
    assert doc["agree"] is True and doc["pairs"]["topological"] == [0, -1] and "runtimes" not in doc


def test_json_output_is_deterministic(spec_file):
    path = spec_file(models.calibration_spec())
    first = run(["verify", "--input", path, "--format", "json"])[1]
    second = run(["verify", "--input", path, "--format", "json"])[1]
    assert first == second


def test_text_output(spec_file):
    code, out = run(["index", "--input", spec_file(models.calibration_spec())])
    assert code == 0
    assert "delta1: [0, -1]" in out and "route: noether" in out


def test_non_elliptic_exits_2(spec_file):
    path = spec_file(models.dt_lambda(Base.CIRCLE))
    assert run(["index", "--input", path])[0] == 2
    code, out = run(["verify", "--input", path, "--format", "json"])
    assert code == 2 and json.loads(out)["elliptic"] is False


def test_numerical_failure_exits_3(spec_file):
    # the oracle does not gate on ellipticity; the symbol tau over a circle is not Fredholm
    code, out = run(["oracle", "--input", spec_file(models.dt_lambda(Base.CIRCLE)), "--radii", "6,8", "--format", "json"])
    doc = json.loads(out)
    assert code == 3 and doc["error"] == "SideFailure" and "Unstable" in doc["message"]


def test_bad_json_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"base": "point", "k": 1, "plus": [], "minus": []')
    code, out = run(["index", "--input", str(bad), "--format", "json"])
    doc = json.loads(out)
    assert code == 2 and doc["error"] == "SchemaError" and "line 1" in doc["message"]


def test_svplot_csv(spec_file, tmp_path):
    out_path = tmp_path / "sweep.csv"
    code, _ = run(["svplot", "--input", spec_file(models.calibration_spec()), "--radii", "8,16", "--out", str(out_path)])
    lines = out_path.read_text().splitlines()
    assert code == 0
    assert lines[0] == "radius,dim,s_max,s1,s2,s3,s4,s5,ker,coker"
    assert lines[2].split(",")[0] == "16" and lines[2].split(",")[-2:] == ["0", "1"]


def test_fedosov_grid_command(tmp_path):
    grid = SymbolGrid3.from_function(models.lattice_degree_one_symbol().evaluate, (16, 16, 16))
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(grid.to_json()))
    code, out = run(["fedosov", "--input", str(path), "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["index"] == -1 and doc["resolution"] == [16, 16, 16]


def test_run_config_validation():
    with pytest.raises(ValidationError):
        cli.RunConfig("index", tol=-1.0)
    with pytest.raises(ValidationError):
        cli.RunConfig("index", grid=8)
    assert cli.main(["index", "--grid", "8"]) == 2
    assert run(["index"])[0] == 2
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args(["index", "--radii", "12"])


def test_entry_point_subprocess(spec_file):
    proc = subprocess.run(
        [sys.executable, "-m", "cylindex.cli", "index", "--input", spec_file(models.calibration_spec()), "--format", "json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["delta1"] == [0, -1]


@pytest.mark.slow
def test_calibrate_command():
    code, out = run(["calibrate", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["agree"] is True
    assert doc["toeplitz"]["analytic"] == [0, -1] and doc["su2_degree_one"]["analytic"] == [0, -1]
