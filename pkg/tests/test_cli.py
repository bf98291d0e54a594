import json
import math
import subprocess
import sys

import pytest

from ewlsim import cli
from ewlsim.ewl import payoff_three_param_fn


def run_cli(*argv, capsys=None):
    code = cli.main(list(argv))
    out = capsys.readouterr().out if capsys is not None else ""
    return code, out


# ------------------------------------------------------------ angle parsing


@pytest.mark.parametrize("text,expected", [
    ("pi", math.pi),
    ("pi/2", math.pi / 2),
    ("9pi/16", 9 * math.pi / 16),
    ("3*pi/16", 3 * math.pi / 16),
    ("2pi/3", 2 * math.pi / 3),
    ("-pi/4", -math.pi / 4),
    ("0.5", 0.5),
    ("2", 2.0),
    ("0.5pi", 0.5 * math.pi),
])
def test_parse_angle(text, expected):
    assert cli.parse_angle(text) == pytest.approx(expected, abs=0)


def test_parse_angle_rejects_garbage():
    import argparse

    with pytest.raises(argparse.ArgumentTypeError):
        cli.parse_angle("pie/2")


# ----------------------------------------------------------------- simulate


def test_simulate_driver_quarter_turn(capsys):
    code, out = run_cli("simulate", "--n", "1", "--lambda", "4",
                        "--theta", "pi/2", "--alpha", "pi/4", "--beta", "0",
                        "--format", "json", capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["expected_payoff"] == pytest.approx(2.0, abs=1e-9)
    assert doc["basis_probabilities"]["10"] == pytest.approx(0.5, abs=1e-9)
    assert sum(doc["outcome_distribution"].values()) == pytest.approx(1.0, abs=1e-9)


def test_simulate_always_exit(capsys):
    code, out = run_cli("simulate", "--n", "1", "--lambda", "4", "--theta", "0",
                        "--alpha", "0", "--beta", "0", "--format", "json", capsys=capsys)
    assert code == 0
    assert json.loads(out)["expected_payoff"] == pytest.approx(0.0, abs=1e-12)


def test_simulate_example_n3(capsys):
    code, out = run_cli("simulate", "--n", "3", "--lambda", "20", "--theta", "pi/2",
                        "--alpha", "9pi/16", "--beta", "3pi/16", "--format", "json",
                        capsys=capsys)
    assert code == 0
    assert json.loads(out)["expected_payoff"] == pytest.approx(5.0, abs=1e-9)


def test_simulate_requires_theta(capsys):
    code, _ = run_cli("simulate", "--n", "1", "--lambda", "4", capsys=capsys)
    assert code == 2


def test_simulate_validates_ranges(capsys):
    code, _ = run_cli("simulate", "--n", "0", "--lambda", "4", "--theta", "0",
                      capsys=capsys)
    assert code == 2
    code, _ = run_cli("simulate", "--n", "1", "--lambda", "4", "--theta", "2pi",
                      capsys=capsys)
    assert code == 2


# ----------------------------------------------------------------- optimize


def test_optimize_example_values(capsys):
    code, out = run_cli("optimize", "--n", "3", "--lambda", "20", "--grid", "17",
                        "--format", "json", capsys=capsys)
    assert code == 0
    checks = {c["check"]: c for c in json.loads(out)["checks"]}
    assert checks["classical_optimum"]["actual"] == pytest.approx(16875 / 6859, abs=1e-6)
    assert checks["quantum_optimum"]["actual"] == pytest.approx(5.0, abs=1e-6)
    assert checks["quantum_classical_ratio"]["actual"] == pytest.approx(2.0323, abs=1e-3)


def test_optimize_driver(capsys):
    code, out = run_cli("optimize", "--n", "1", "--lambda", "4", "--grid", "17",
                        "--format", "json", capsys=capsys)
    assert code == 0
    checks = {c["check"]: c for c in json.loads(out)["checks"]}
    assert checks["classical_optimum"]["actual"] == pytest.approx(4 / 3, abs=1e-6)
    assert checks["quantum_optimum"]["actual"] == pytest.approx(2.0, abs=1e-6)


def test_optimize_below_threshold(capsys):
    code, out = run_cli("optimize", "--n", "1", "--lambda", "2", "--grid", "17",
                        "--format", "json", capsys=capsys)
    assert code == 0
    checks = {c["check"]: c for c in json.loads(out)["checks"]}
    assert checks["classical_optimum"]["actual"] == pytest.approx(1.0, abs=1e-6)
    assert checks["quantum_optimum"]["actual"] == pytest.approx(1.0, abs=1e-6)


def test_optimize_single_mode(capsys):
    code, out = run_cli("optimize", "--n", "1", "--lambda", "4", "--mode", "classical",
                        "--format", "json", capsys=capsys)
    assert code == 0
    checks = json.loads(out)["checks"]
    assert [c["check"] for c in checks] == ["classical_optimum"]


# ------------------------------------------------------------------- verify


@pytest.mark.parametrize("target,extra", [
    ("prop1", ("--samples", "200")),
    ("recall", ()),
    ("formulas", ("--samples", "100",)),
])
def test_verify_targets_pass(target, extra, capsys):
    code, out = run_cli("verify", target, *extra, "--format", "json", capsys=capsys)
    assert code == 0
    assert json.loads(out)["pass"]


def test_verify_prop2_small(capsys):
    code, out = run_cli("verify", "prop2", "--n", "3", "--format", "json", capsys=capsys)
    assert code == 0
    assert json.loads(out)["pass"]


def test_verify_prop3_small(capsys):
    code, out = run_cli("verify", "prop3", "--n", "3", "--format", "json", capsys=capsys)
    assert code == 0
    report = json.loads(out)
    assert report["pass"]
    assert all(c["actual"]["margin"] > 0 for c in report["checks"])


def test_verify_formulas_reports_discrepancy_note(capsys):
    code, out = run_cli("verify", "formulas", "--n", "1", "--samples", "60",
                        "--format", "json", capsys=capsys)
    assert code == 0
    report = json.loads(out)
    assert report["pass"]
    notes = [c.get("note", "") for c in report["checks"]]
    assert any("known discrepancy" in n for n in notes)


def test_verify_recall_with_problem_file(tmp_path, capsys):
    from ewlsim.decision import absentminded_driver, problem_to_json

    path = tmp_path / "driver.json"
    path.write_text(problem_to_json(absentminded_driver(4.0)))
    code, out = run_cli("verify", "recall", "--problem", str(path), "--format", "json",
                        capsys=capsys)
    assert code == 0
    report = json.loads(out)
    assert report["checks"][-1]["check"] == "user_problem_imperfect_recall"
    assert report["checks"][-1]["actual"] is True


def test_verify_recall_missing_problem_file(capsys):
    code, _ = run_cli("verify", "recall", "--problem", "/nonexistent/problem.json",
                      capsys=capsys)
    assert code == 2


# ---------------------------------------------------------------- landscape


def test_landscape_row_count(capsys):
    code, out = run_cli("landscape", "--n", "1", "--lambda", "4", "--grid", "3",
                        capsys=capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "theta,alpha,beta,payoff"
    assert len(lines) == 1 + 27


def test_landscape_reference_row_and_roundtrip(capsys):
    # grid 9 puts pi/2 on the theta axis and pi/4 on the alpha axis
    code, out = run_cli("landscape", "--n", "1", "--lambda", "4", "--grid", "9",
                        capsys=capsys)
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    f = payoff_three_param_fn(1, 4.0)
    hit = False
    for t, a, b, v in rows:
        t, a, b, v = float(t), float(a), float(b), float(v)
        assert abs(f(t, a, b) - v) <= 1e-9  # emitted CSV re-evaluates to itself
        assert -1e-12 <= v <= max(1.0, 4.0 / 2.0) + 1e-9
        if abs(t - math.pi / 2) < 1e-9 and abs(a - math.pi / 4) < 1e-9 and b == 0.0:
            hit = True
            assert v == pytest.approx(2.0, abs=1e-9)
    assert hit


def test_landscape_unwritable_output(capsys):
    code, _ = run_cli("landscape", "--n", "1", "--lambda", "4", "--grid", "3",
                      "--output", "/nonexistent-dir/out.csv", capsys=capsys)
    assert code == 2


def test_landscape_output_file(tmp_path, capsys):
    path = tmp_path / "surface.csv"
    code, _ = run_cli("landscape", "--n", "1", "--lambda", "4", "--grid", "3",
                      "--output", str(path), capsys=capsys)
    assert code == 0
    assert path.read_text().startswith("theta,alpha,beta,payoff")


# ---------------------------------------------------------------- reproduce


def test_reproduce_default_passes(capsys):
    code, out = run_cli("reproduce", capsys=capsys)
    assert code == 0
    assert "FAIL" not in out


def test_reproduce_json_cells(capsys):
    code, out = run_cli("reproduce", "--format", "json", capsys=capsys)
    assert code == 0
    report = json.loads(out)
    assert report["pass"]
    for cell in report["checks"]:
        assert set(cell) >= {"check", "inputs", "expected", "actual", "deviation", "pass"}


def test_reproduce_lambda_sweep(capsys):
    code, out = run_cli("reproduce", "--lambda-sweep", "3,4,10", "--format", "json",
                        capsys=capsys)
    assert code == 0
    report = json.loads(out)
    sweep = {c["check"]: c for c in report["checks"] if "lambda" in c["check"]}
    for lam in (3.0, 4.0, 10.0):
        cell = sweep[f"driver_quantum_optimum_lambda{lam:g}"]
        assert cell["actual"] == pytest.approx(lam / 2.0, abs=1e-6)


# ----------------------------------------------------------- determinism etc


def test_verify_formulas_n1_restricts_sweep(capsys):
    code, out = run_cli("verify", "formulas", "--n", "1", "--samples", "40",
                        "--format", "json", capsys=capsys)
    assert code == 0
    report = json.loads(out)
    assert report["pass"]
    sample_check = next(c for c in report["checks"]
                        if c["check"] == "three_param_closed_form_vs_simulation")
    assert sample_check["inputs"]["n_max"] == 1


def test_verify_exits_1_on_failed_check(capsys, monkeypatch):
    from ewlsim import analysis

    broken = analysis.make_report([analysis.make_check(
        "forced_failure", {}, 0.0, 1.0, 1.0, False)])
    monkeypatch.setattr(cli.analysis, "recall_verify", lambda problem=None: broken)
    code, _ = run_cli("verify", "recall", capsys=capsys)
    assert code == 1


def test_optimize_exits_3_on_cross_check_failure(capsys, monkeypatch):
    monkeypatch.setattr(cli.ewl, "payoff_one_param", lambda n, lam, t: 0.0)
    code, _ = run_cli("optimize", "--n", "1", "--lambda", "4", "--mode", "classical",
                      capsys=capsys)
    assert code == 3


def test_identical_invocations_identical_output(capsys):
    _, out1 = run_cli("verify", "prop1", "--samples", "50", "--seed", "3",
                      "--format", "json", capsys=capsys)
    _, out2 = run_cli("verify", "prop1", "--samples", "50", "--seed", "3",
                      "--format", "json", capsys=capsys)
    assert out1 == out2


def test_csv_report_format(capsys):
    import csv
    import io

    code, out = run_cli("verify", "recall", "--format", "csv", capsys=capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["check", "inputs", "expected", "actual", "deviation", "pass"]
    assert all(len(r) == 6 for r in rows[1:])
    assert all(json.loads(r[1]) is not None for r in rows[1:])  # inputs parse back


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "ewlsim", "simulate", "--n", "1", "--lambda", "4",
         "--theta", "pi/2", "--alpha", "pi/4"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "expected payoff" in proc.stdout


def test_usage_error_exits_2():
    proc = subprocess.run([sys.executable, "-m", "ewlsim", "bogus-subcommand"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
