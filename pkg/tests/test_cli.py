import csv
import io
import json
import math

import pytest
from scipy.special import lambertw

from szego.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, RunConfig, UsageError, main

W = float(lambertw(1 / math.e).real)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line]


def test_szego_curve_three_samples(capsys):
    code, out, _ = run(capsys, "szego-curve", "--samples", "3")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "theta,r,re,im"
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["theta"]) for r in rows] == pytest.approx([-math.pi, 0.0, math.pi])
    assert [float(r["r"]) for r in rows] == pytest.approx([W, 1.0, W], abs=1e-14)


def test_szego_curve_row_count(capsys):
    code, out, _ = run(capsys, "szego-curve", "--samples", "1000")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 1001


def test_szego_curve_needs_two_samples(capsys):
    code, _, err = run(capsys, "szego-curve", "--samples", "1")
    assert code == EXIT_USAGE
    assert json.loads(err)["error"] == "UsageError"


def test_zeros_oracle(capsys):
    code, out, _ = run(capsys, "zeros", "--n", "20", "--method", "oracle")
    assert code == EXIT_OK
    recs = json_lines(out)
    assert len(recs) == 19
    assert set(recs[0]) == {"k", "n", "method", "r", "re", "im", "residual", "error_bound"}
    assert all(r["residual"] <= 1e-12 for r in recs)


def test_zeros_thm41(capsys):
    code, out, _ = run(capsys, "zeros", "--n", "100", "--method", "thm41", "--k", "1",
                       "--k-max", "5", "--r", "4")
    assert code == EXIT_OK
    recs = json_lines(out)
    assert [r["k"] for r in recs] == [1, 2, 3, 4, 5]
    assert all(r["error_bound"] > 0 and r["r"] == 4 for r in recs)


def test_zeros_csv_columns(capsys):
    code, out, _ = run(capsys, "zeros", "--n", "9", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "k,n,method,r,re,im,residual,error_bound"
    assert len(out.splitlines()) == 9


def test_zeros_residual_target_exit_code(capsys):
    code, _, _ = run(capsys, "zeros", "--n", "20", "--tol", "residual=1e-300")
    assert code == EXIT_NUMERICAL


def test_newton_matches_oracle_via_compare(capsys):
    code, out, _ = run(capsys, "compare", "--n", "20", "--method", "newton", "--against", "oracle")
    assert code == EXIT_OK
    summary = [r for r in json_lines(out) if r["kind"] == "summary"][0]
    assert summary["count"] == 19
    assert summary["max"] <= 1e-10


def test_compare_self_is_zero(capsys):
    code, out, _ = run(capsys, "compare", "--n", "30", "--method", "oracle", "--match")
    assert code == EXIT_OK
    rows = [r for r in json_lines(out) if r["kind"] == "row"]
    assert len(rows) == 29
    assert all(r["distance"] == 0 for r in rows)


def test_compare_thm42_leading_order(capsys):
    code, out, _ = run(capsys, "compare", "--n", "80", "--method", "thm42", "--r", "1")
    assert code == EXIT_OK
    summary = [r for r in json_lines(out) if r["kind"] == "summary"][0]
    # scale of the distance between Szego points and zeros: ln n / n
    assert summary["max"] <= 2 * math.log(80) / 80


def test_compare_slope(capsys):
    code, out, _ = run(capsys, "compare", "--n", "50", "100", "200", "--method", "thm42",
                       "--r", "2", "--k", "10", "--k-max", "25")
    assert code == EXIT_OK
    fit = [r for r in json_lines(out) if r["kind"] == "fit"]
    assert len(fit) == 1
    # a fixed k window drifts toward the saddle as n grows, so the decay is
    # slower than at fixed k/n; only its sign is meaningful here
    assert -3.0 < fit[0]["slope"] < 0


def test_compare_ambiguous_match_exits_nonzero(capsys):
    code, _, err = run(capsys, "compare", "--n", "80", "--method", "thm42", "--r", "1",
                       "--k", "10", "--k-max", "40", "--match")
    assert code == EXIT_NUMERICAL
    assert json.loads(err)["error"] == "AmbiguityError"


def test_fn_eval(capsys):
    code, out, _ = run(capsys, "fn-eval", "--n", "30", "--z", "0.4+0.3i")
    assert code == EXIT_OK
    rec = json_lines(out)[0]
    assert rec["discrepancy"] <= 1e-10
    assert rec["side"] == "interior"


def test_fn_eval_on_contour(capsys):
    code, _, err = run(capsys, "fn-eval", "--n", "30", "--z", "1")
    assert code != EXIT_OK
    assert json.loads(err)["error"] == "ProximityError"


def test_stirling_n1(capsys):
    code, out, _ = run(capsys, "stirling", "--n", "1")
    assert code == EXIT_OK
    rec = json_lines(out)[0]
    assert rec["check_value"] == pytest.approx(0.36787944117144233, rel=1e-15)


def test_erfc_zeros(capsys):
    code, out, _ = run(capsys, "erfc-zeros", "--count", "3")
    assert code == EXIT_OK
    recs = json.loads(out)
    assert len(recs) == 3
    mods = [math.hypot(r["re"], r["im"]) for r in recs]
    assert mods[0] < mods[1] < mods[2]


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["zeros", "--n", "20", "--method", "nope"],
    ["zeros", "--n", "20", "--tol", "speed=1"],
    ["zeros", "--n", "1"],
    ["zeros", "--n", "20", "--k", "5", "--k-max", "2"],
    ["zeros", "--n", "20", "--format", "xml"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert "error" in json.loads(err)


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(command="zeros", tolerances={"bogus": 1.0})
    assert RunConfig(command="zeros", tolerances={"residual": 1e-8}).tol("residual") == 1e-8


def test_json_round_trip(capsys):
    _, out, _ = run(capsys, "zeros", "--n", "25")
    from szego.zeros import oracle_zeros
    for rec, z in zip(json_lines(out), oracle_zeros(25)):
        assert complex(rec["re"], rec["im"]) == z.value
        assert rec["residual"] == z.residual


def test_output_file_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["zeros", "--n", "40", "--method", "newton", "--format", "csv",
                     "--out", str(p)]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert capsys.readouterr().out == ""


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "szego", "erfc-zeros", "--count", "2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert len(json.loads(res.stdout)) == 2
