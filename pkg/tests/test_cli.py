import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from besselmeans.cli import main
from besselmeans.config import RunConfig
from besselmeans.fields import gaussian
from besselmeans.gridio import read_grid_csv, write_grid_csv
from besselmeans.hankel import GridTable
from besselmeans.verify import CheckRecord, VerificationReport, apply_tolerance, run_suite


def rows(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_verify_exit_codes_and_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--criteria", "4", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["summary_failed"] == 0 and doc["summary_checks"] == 20
    assert all(set(r) >= {"check_id", "anchor", "lhs", "rhs", "abs_diff", "rel_diff", "tolerance", "passed"}
               for r in doc["checks"])
    assert all(not isinstance(v, (dict, list)) for r in doc["checks"] for v in r.values())
    assert main(["verify", "--criteria", "4", "--tol", "0", "--out", str(out)]) == 1
    assert json.loads(out.read_text())["summary_failed"] > 0


def test_verify_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["verify", "--criteria", "3,7", "--format", "csv", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv, field", [
    (["verify", "--gamma", "1,-1"], "gamma"),
    (["verify", "--order-sphere", "2"], "order-sphere"),
    (["verify", "--delta", "1.5"], "delta"),
    (["verify", "--format", "xml"], "format"),
    (["verify", "--criteria", "42"], "criteria"),
    (["mean", "--radii", "0,1,-1"], "radii"),
    (["mean", "--x", "0.1"], "x"),
    (["mean", "--field", "cauchy"], "field"),
    (["reconstruct", "--gamma", "0.5"], "gamma"),
    (["reconstruct", "--delta", "0.7"], "delta"),
])
def test_usage_errors_exit_two_and_name_the_field(argv, field, capsys):
    assert main(argv) == 2
    assert field in capsys.readouterr().err


def test_mean_columns(capsys):
    assert main(["mean", "--field", "j_gamma", "--gamma", "0.5,2", "--x", "0.3,0.7", "--radii", "0:6:7"]) == 0
    out = capsys.readouterr().out
    assert "# field: j_gamma" in out
    data = rows(out)
    assert [float(r["r"]) for r in data] == list(np.linspace(0, 6, 7))
    assert max(abs(float(r["diff"])) for r in data) <= 1e-8
    assert main(["mean", "--field", "one", "--radii", "0,0.5,2"]) == 0
    assert all(float(r["mean"]) == pytest.approx(1.0, rel=1e-13) for r in rows(capsys.readouterr().out))
    assert main(["mean", "--field", "gaussian", "--x", "0.2,0.4", "--radii", "0"]) == 0
    assert float(rows(capsys.readouterr().out)[0]["mean"]) == pytest.approx(np.exp(-0.1), rel=1e-14)


def test_mean_from_table(tmp_path, capsys):
    ax = np.linspace(0, 7, 141)
    path = tmp_path / "g.csv"
    path.write_text(write_grid_csv(GridTable.sample((1.0, 1.0), gaussian(2), [ax, ax])))
    assert main(["mean", "--table", str(path), "--radii", "0,1"]) == 0
    table_rows = rows(capsys.readouterr().out)
    assert main(["mean", "--field", "gaussian", "--radii", "0,1"]) == 0
    builtin_rows = rows(capsys.readouterr().out)
    for a, b in zip(table_rows, builtin_rows):
        assert float(a["mean"]) == pytest.approx(float(b["mean"]), abs=1e-7)


def test_transform_round_trip_and_errors(tmp_path, capsys):
    ax = np.linspace(0, 9, 91)
    src = tmp_path / "g.csv"
    src.write_text(write_grid_csv(GridTable.sample((2.0,), gaussian(1), [ax])))
    img, back = tmp_path / "img.csv", tmp_path / "back.csv"
    assert main(["transform", str(src), "--out", str(img)]) == 0
    header = img.read_text().splitlines()[:4]
    assert "# direction: forward" in header and "# order_transform: 96" in header
    assert main(["transform", str(img), "--direction", "inverse", "--out", str(back)]) == 0
    t, _ = read_grid_csv(back.read_text())
    assert np.max(np.abs(t.values - np.exp(-0.5 * ax ** 2))) <= 1e-6
    zero = tmp_path / "z.csv"
    zero.write_text(write_grid_csv(GridTable((ax,), np.zeros(ax.size), (2.0,))))
    assert main(["transform", str(zero)]) == 0
    assert all(float(r["value"]) == 0.0 for r in rows(capsys.readouterr().out))
    bad = tmp_path / "bad.csv"
    lines = src.read_text().splitlines()
    lines[6] = "0.3,oops"
    bad.write_text("\n".join(lines) + "\n")
    assert main(["transform", str(bad)]) == 2
    assert "line 7" in capsys.readouterr().err
    assert main(["transform", str(src), "--gamma", "1"]) == 2
    assert main(["transform", str(tmp_path / "missing.csv")]) == 2


def test_reconstruct_outputs(tmp_path, capsys):
    base = tmp_path / "rec"
    assert main(["reconstruct", "--count", "4", "--out", str(base)]) == 0
    summary = json.loads((tmp_path / "rec.json").read_text())
    assert summary["passed"] and summary["max_rel_err_double"] <= 1e-2
    assert summary["max_path_diff"] <= 1e-6
    data = rows((tmp_path / "rec.csv").read_text())
    assert list(data[0]) == ["y1", "y2", "truth", "double_sphere", "radial", "rel_err_double", "rel_err_radial"]
    dat = (tmp_path / "rec.dat").read_text().splitlines()
    assert dat[0].startswith("# y1 y2 truth") and len(dat[1].split()) == 7


def test_reconstruct_support_violation_exits_one(capsys):
    assert main(["reconstruct", "--count", "2", "--radius", "2.1"]) == 1
    assert "Ewald sphere" in capsys.readouterr().err


def test_reconstruct_zero_phantom_and_grid(tmp_path):
    base = tmp_path / "z"
    assert main(["reconstruct", "--amplitude", "0", "--points", "grid", "--count", "2", "--out", str(base)]) == 0
    data = rows((tmp_path / "z.csv").read_text())
    assert len(data) == 4
    assert all(float(r[k]) == 0.0 for r in data for k in ("truth", "double_sphere", "radial"))
    dat = (tmp_path / "z.dat").read_text().splitlines()
    assert "" in dat  # scan-line break for gnuplot


def test_singular_configuration_runs_ungated(tmp_path):
    base = tmp_path / "s"
    assert main(["reconstruct", "--n", "1", "--gamma", "0.5", "--allow-singular", "--count", "3",
                 "--out", str(base)]) == 0
    assert json.loads((tmp_path / "s.json").read_text())["gated"] is False


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "besselmeans", "mean", "--field", "one", "--radii", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "r,mean" in proc.stdout


def test_report_model():
    rec = CheckRecord("id", "4", "anchor", 1.0, 1.0 + 1e-9, 1e-9, 1e-9, 1e-8, True)
    report = VerificationReport((rec,), RunConfig().echo())
    assert report.ok and report.summary() == {"checks": 1, "passed": 1, "failed": 0}
    tight = apply_tolerance([rec], 1e-10)[0]
    assert not tight.passed and tight.tolerance == 1e-10
    csv_text = report.to_csv()
    assert "# failed: 0" in csv_text and "1.0000000010000001" in csv_text
    assert not VerificationReport((), {}).ok


def test_run_suite_records_pass_flag_consistently():
    report = run_suite(RunConfig(), ["7"])
    assert all(r.passed == (r.rel_diff <= r.tolerance) for r in report.records)
