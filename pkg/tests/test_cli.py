"""Command-line front end: record formats, exit codes, determinism, and
the JSON/CSV contracts."""
import json
import math

import numpy as np
import pytest

from zline import cli
from zline.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, OutputRecord


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def get_value(out: str) -> float:
    for line in out.splitlines():
        if line.startswith("value,"):
            return float(line.split(",")[1])
    raise AssertionError(f"no value line in {out!r}")


# ------------------------------------------------------------------- eval

def test_eval_approx_reference(capsys):
    code, out, _ = run(capsys, "eval", "--t", "100", "--method", "approx")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "t,100.0000000"
    assert lines[1] == "method,approx"
    assert abs(get_value(out) - 2.6269297) <= 5e-7
    assert any(line.startswith("est,") for line in lines)


def test_eval_oracle_at_zero(capsys):
    code, out, _ = run(capsys, "eval", "--t", "0", "--method", "oracle")
    assert code == EXIT_OK
    assert abs(get_value(out) - -1.4603545) <= 5e-8


def test_eval_integral_matches_oracle(capsys):
    vals = {}
    for method in ("integral", "oracle"):
        code, out, _ = run(capsys, "eval", "--t", "50", "--method", method,
                           "--json")
        assert code == EXIT_OK
        vals[method] = json.loads(out)["rows"][0]["value"]
    assert abs(vals["integral"] - vals["oracle"]) <= 1e-8


def test_eval_json_round_trip(capsys):
    code, out, _ = run(capsys, "eval", "--t", "30", "--method", "g", "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["meta"]["command"] == "eval"
    assert "version" in doc["meta"]
    row = doc["rows"][0]
    assert row["method"] == "g"
    assert math.isfinite(row["value"]) and math.isfinite(row["est"])
    assert row["est"] > 0.0


def test_eval_usage_errors(capsys):
    for argv in (("eval", "--t", "-1", "--method", "oracle"),
                 ("eval", "--t", "5", "--method", "approx"),
                 ("eval", "--t", "100", "--method", "oracle", "--sigma", "9"),
                 ("eval", "--t", "100", "--method", "oracle", "--eps", "0.5")):
        code, _, err = run(capsys, *argv)
        assert code == EXIT_USAGE, argv
        assert err


def test_eval_bad_method_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["eval", "--t", "10", "--method", "bogus"])
    assert exc.value.code == 2
    capsys.readouterr()


# ------------------------------------------------------------------ table

def test_table_single_row_csv(capsys):
    code, out, _ = run(capsys, "table", "--rows", "10", "--csv")
    assert code == EXIT_OK
    assert "\r" not in out
    lines = out.splitlines()
    assert lines[0] == "t,Z,approx,absdiff"
    fields = lines[1].split(",")
    assert fields[0] == "10"
    assert abs(float(fields[1]) - -1.5491945) <= 5e-6
    assert abs(float(fields[2]) - -0.9983260) <= 5e-6
    assert abs(float(fields[3])
               - abs(float(fields[1]) - float(fields[2]))) <= 2e-7


def test_table_row_subset(capsys):
    code, out, _ = run(capsys, "table", "--rows", "10,100", "--csv")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 3


def test_table_full_json(capsys):
    code, out, _ = run(capsys, "table", "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    rows = doc["rows"]
    assert len(rows) == 8
    assert [row["t"] for row in rows] == [10.0 ** k for k in range(1, 9)]
    for row in rows:
        for key in ("z", "z_est", "approx", "approx_est", "absdiff"):
            assert math.isfinite(row[key]), (row["t"], key)
        assert row["z_est"] < 1e-5 and row["approx_est"] < 1e-5


def test_table_bad_rows(capsys):
    code, _, err = run(capsys, "table", "--rows", "15")
    assert code == EXIT_USAGE
    assert err


# ------------------------------------------------------------------- scan

def test_scan_plain_report(capsys):
    code, out, _ = run(capsys, "scan", "--from", "10", "--to", "30")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "key,value"
    entries = dict(line.split(",", 1) for line in lines[1:])
    assert entries["count"] == "3"
    assert entries["verdict"] == "pass"
    assert abs(float(entries["zero_1"]) - 14.1347251) <= 1e-6
    assert abs(float(entries["zero_3"]) - 25.0108576) <= 1e-6


def test_scan_empty_interval(capsys):
    code, out, _ = run(capsys, "scan", "--from", "14.2", "--to", "20.9")
    assert code == EXIT_OK
    entries = dict(line.split(",", 1) for line in out.splitlines()[1:])
    assert entries["count"] == "0"
    assert entries["verdict"] == "pass"
    assert float(entries["delta_phi_over_pi"]) < 1.0


def test_scan_json(capsys):
    code, out, _ = run(capsys, "scan", "--from", "10", "--to", "30", "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    report = doc["report"]
    assert report["count"] == 3
    assert report["verdict"] == "pass"
    assert report["delta_phi_est"] > 0.0
    assert len(doc["rows"]) == 3
    for row in doc["rows"]:
        assert row["est"] > 0.0


def test_scan_usage_errors(capsys):
    for argv in (("scan", "--from", "5", "--to", "30"),
                 ("scan", "--from", "30", "--to", "10"),
                 ("scan", "--from", "10", "--to", "30", "--step", "0.5")):
        code, _, err = run(capsys, *argv)
        assert code == EXIT_USAGE, argv
        assert err


def test_scan_under_resolved_is_numerical_failure(capsys):
    # the pinch near t = 111.87 defeats a 0.05 grid; a finer step recovers
    code, _, err = run(capsys, "scan", "--from", "108", "--to", "114")
    assert code == EXIT_NUMERICAL
    assert err


# ------------------------------------------------------------------ hstat

def test_hstat_band(capsys):
    code, out, _ = run(capsys, "hstat", "--t", "1000")
    assert code == EXIT_OK
    entries = dict(line.split(",", 1) for line in out.splitlines())
    assert 0.1 <= float(entries["c"]) <= 0.45
    assert float(entries["phase_end"]) < 0.0


def test_hstat_below_floor(capsys):
    code, _, err = run(capsys, "hstat", "--t", "50")
    assert code == EXIT_USAGE
    assert err


# ------------------------------------------------------------------- xray

def test_xray_file_contract(tmp_path, capsys):
    out_path = tmp_path / "grid.csv"
    code, out, _ = run(capsys, "xray", "--re0", "10000", "--re1", "10020",
                       "--im0", "-2", "--im1", "4", "--n", "10",
                       "--out", str(out_path))
    assert code == EXIT_OK
    assert "rows,100" in out
    text = out_path.read_text()
    assert "\r" not in text
    lines = text.splitlines()
    assert lines[0] == "re,im,sgn_re_H,sgn_im_H"
    assert len(lines) == 101
    for line in lines[1:]:
        re_s, im_s, sre, sim = line.split(",")
        assert sre in ("-1", "0", "1") and sim in ("-1", "0", "1")


def test_xray_usage_error(capsys):
    code, _, err = run(capsys, "xray", "--re0", "10", "--re1", "20",
                       "--im0", "0", "--im1", "4.5", "--out", "/dev/null")
    assert code == EXIT_USAGE
    assert err


# ------------------------------------------------------------ determinism

@pytest.mark.parametrize("argv", [
    ("eval", "--t", "100", "--method", "approx"),
    ("eval", "--t", "40", "--method", "integral", "--json"),
    ("table", "--csv"),
    ("scan", "--from", "10", "--to", "30", "--json"),
    ("hstat", "--t", "1000"),
])
def test_byte_determinism(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert first[0] == EXIT_OK


def test_xray_byte_determinism(tmp_path, capsys):
    blobs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        code, _, _ = run(capsys, "xray", "--re0", "10000", "--re1", "10001",
                         "--im0", "-1", "--im1", "1", "--n", "5",
                         "--out", str(path))
        assert code == EXIT_OK
        blobs.append(path.read_bytes())
    assert blobs[0] == blobs[1]


# ----------------------------------------------------------- output record

def test_output_record_validation():
    with pytest.raises(ValueError):
        OutputRecord(argument=1.0, method="bogus", value=0.0, est=1e-9,
                     wall_s=0.0)
    with pytest.raises(ValueError):
        OutputRecord(argument=1.0, method="oracle", value=math.inf, est=1e-9,
                     wall_s=0.0)
