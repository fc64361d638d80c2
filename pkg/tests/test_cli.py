import csv
import io
import json
import math
import subprocess
import sys

import pytest

from sincpq.cli import INTEGRAL_COLUMNS, main, parse_grid, run_verification
from sincpq.sincint import VerificationReport


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def test_parse_grid():
    assert parse_grid("1.5,2,3") == [1.5, 2.0, 3.0]
    assert parse_grid("2") == [2.0]
    g = parse_grid("100:1600:5")
    assert g[0] == pytest.approx(100) and g[-1] == pytest.approx(1600)
    assert g[2] == pytest.approx(400)
    for bad in ("", "1:2", "0:10:3", "a,b"):
        with pytest.raises(ValueError):
            parse_grid(bad)


def test_integral_both_methods():
    code, text = run(["integral", "--p", "2", "--q", "2", "--r", "3", "--method", "both", "--format", "json"])
    assert code == 0
    rows = json.loads(text)
    assert [r["method"] for r in rows] == ["transform", "direct"]
    for r in rows:
        assert r["value"] == pytest.approx(3 * math.pi / 8, abs=1e-7)
    assert abs(rows[0]["value"] - rows[1]["value"]) < 1e-7


def test_integral_csv_columns():
    code, text = run(["integral", "--p", "2,3", "--q", "2", "--r", "1,2", "--method", "transform", "--format", "csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0].keys()) == INTEGRAL_COLUMNS
    assert len(rows) == 4
    assert rows[0]["converged"] == "True"


def test_integral_m():
    code, text = run(["integral", "--m", "2", "--format", "json"])
    assert code == 0
    assert json.loads(text)[0]["value"] == pytest.approx(math.pi / math.sqrt(2), abs=1e-8)


def test_asympt_classical():
    code, text = run(["asympt", "--p", "2", "--q", "2", "--m", "100", "--format", "json"])
    assert code == 0
    row = json.loads(text)[0]
    assert row["limit"] == pytest.approx(math.sqrt(1.5 * math.pi), rel=1e-14)
    assert row["I"] == pytest.approx(row["tilde_I"], abs=1e-5)


def test_eval_and_pi():
    code, text = run(["eval", "--x", "0,1", "--format", "json"])
    assert code == 0
    rows = json.loads(text)
    assert rows[1]["sin"] == pytest.approx(math.sin(1), abs=1e-14)
    assert rows[0]["sinc"] == 1.0
    code, text = run(["eval", "--x", "1.5707963267948966", "--format", "json"])
    assert json.loads(text)[0]["tan"] == math.inf
    code, text = run(["pi", "--p", "2,3", "--q", "3", "--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert float(rows[1]["pi_pq"]) == pytest.approx(2.418399, abs=1e-6)


@pytest.mark.parametrize(
    "argv",
    [
        ["integral", "--p", "0.5", "--r", "1"],
        ["integral", "--m", "1"],
        ["integral", "--r", "1.5"],
        ["integral", "--r", "1", "--tol", "-1"],
        ["integral", "--r", "1", "--max-periods", "0"],
        ["nonsense"],
        ["integral", "--r", "1", "--p", "1:2"],
        ["eval"],
    ],
)
def test_bad_arguments_exit_2(argv):
    assert run(argv)[0] == 2


def test_nonconvergence_exit_3():
    code, _ = run(["integral", "--r", "2", "--method", "direct", "--max-periods", "4", "--tol", "1e-14"])
    assert code == 3


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("GENTRIG_TOL", "1e-4")
    code, text = run(["integral", "--r", "1", "--method", "direct", "--format", "json"])
    assert code == 0 and json.loads(text)[0]["abs_err"] <= 1e-4
    monkeypatch.setenv("GENTRIG_TOL", "zero")
    assert run(["integral", "--r", "1"])[0] == 2


def test_output_is_deterministic():
    argv = ["asympt", "--p", "2.5", "--q", "3", "--m", "10:1000:3", "--format", "csv"]
    assert run(argv) == run(argv)


def test_verify_passes_and_round_trips():
    code, text = run(["verify", "--tol", "1e-7", "--grid", "2,3", "--format", "json"])
    assert code == 0
    rows = json.loads(text)
    assert rows and all(r["passed"] for r in rows)
    assert json.loads(json.dumps(rows)) == rows
    names = {r["identity_name"] for r in rows}
    for expected in ("classical_dirichlet", "kernel_series", "multiple_angle_formula", "multiple_angle_integral",
                     "rem2_form", "transform_vs_direct", "schwarz", "bhayo_vuorinen", "ode_residual_order",
                     "ball_inequality", "wolstenholme", "divergence_constant"):
        assert expected in names


def test_report_dict_round_trip():
    for rep in run_verification([2.0], 1e-7)[:5]:
        again = VerificationReport.from_dict(json.loads(json.dumps(rep.to_dict())))
        assert again == rep


def test_verify_failure_exit_1():
    # a tolerance far below what double precision allows must fail some check
    code, text = run(["verify", "--tol", "1e-20", "--grid", "2", "--max-periods", "16", "--format", "text"])
    assert code == 1
    assert "FAIL" in text


def test_console_script_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "sincpq.cli", "pi", "--format", "csv"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert "pi_pq" in proc.stdout
