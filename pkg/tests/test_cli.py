"""Command-line flows: exit codes, determinism, JSON run reports."""

import json

import numpy as np
import pytest

from frogpr import dft, equivalent_up_to_group, is_analytic, load_signal
from frogpr.cli import main
from frogpr.selftest import CriterionResult


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _report(out):
    doc = json.loads(out)
    assert "command" in doc and "elapsed_ms" in doc
    return doc


def _generate(capsys, tmp_path, name="sig.json", n=16, seed=7):
    path = tmp_path / name
    code, out, err = _run(capsys, ["generate", "--n", str(n), "--seed", str(seed), "--out", str(path)])
    assert code == 0, err
    return path, _report(out)


def _measure(capsys, tmp_path, sig, l=3, name="meas.json", plan_only=False):
    path = tmp_path / name
    argv = ["measure", str(sig), "--l", str(l), "--out", str(path)]
    if plan_only:
        argv.insert(1, "--plan-only")
    code, out, err = _run(capsys, argv)
    assert code == 0, err
    return path, _report(out)


def test_generate_writes_analytic_signal(capsys, tmp_path):
    path, report = _generate(capsys, tmp_path)
    assert report["command"] == "generate"
    assert report["residuals"]["analyticity_max_violation"] < 1e-9
    z = load_signal(path)
    assert z.size == 16
    assert is_analytic(dft(z)).is_analytic


def test_generate_is_deterministic_per_seed(capsys, tmp_path):
    p1, _ = _generate(capsys, tmp_path, "a.json", seed=3)
    p2, _ = _generate(capsys, tmp_path, "b.json", seed=3)
    p3, _ = _generate(capsys, tmp_path, "c.json", seed=4)
    assert p1.read_bytes() == p2.read_bytes()
    assert p1.read_bytes() != p3.read_bytes()


def test_generate_rejects_odd_length(capsys, tmp_path):
    code, _, err = _run(capsys, ["generate", "--n", "9", "--out", str(tmp_path / "x.json")])
    assert code == 2
    assert "even" in err


def test_measure_full_grid_and_plan_only(capsys, tmp_path):
    sig, _ = _generate(capsys, tmp_path)
    full, _ = _measure(capsys, tmp_path, sig, l=3, name="full.json")
    doc = json.loads(full.read_text())
    assert doc["N"] == 16 and doc["L"] == 3
    assert len(doc["entries"]) == 16 * 6  # full N x r grid
    planned, _ = _measure(capsys, tmp_path, sig, l=3, name="plan.json", plan_only=True)
    assert len(json.loads(planned.read_text())["entries"]) == 3 * 16 // 2 + 1 == 25


def test_measure_rejects_invalid_stride(capsys, tmp_path):
    sig, _ = _generate(capsys, tmp_path)
    code, _, err = _run(capsys, ["measure", str(sig), "--l", "0", "--out", str(tmp_path / "m.json")])
    assert code == 2 and "L" in err
    code, _, err = _run(capsys, ["measure", str(sig), "--l", "17", "--out", str(tmp_path / "m.json")])
    assert code == 2


def test_measure_plan_only_refuses_unplannable_geometry(capsys, tmp_path):
    sig, _ = _generate(capsys, tmp_path)  # N = 16, L = 5 -> r = 4 < 5
    code, _, err = _run(
        capsys,
        ["measure", "--plan-only", str(sig), "--l", "5", "--out", str(tmp_path / "m.json")],
    )
    assert code == 1
    assert "refused" in err


def test_recover_round_trip_and_determinism(capsys, tmp_path):
    sig, _ = _generate(capsys, tmp_path)
    meas, _ = _measure(capsys, tmp_path, sig, l=3, plan_only=True)
    out1 = tmp_path / "rec1.json"
    code, out, err = _run(capsys, ["recover", str(meas), "--out", str(out1)])
    assert code == 0, err
    report = _report(out)
    assert report["residuals"]["verification_residual"] < 1e-9
    assert report["sign_branch"] in (-1, 1)
    recovered = load_signal(out1)
    original = load_signal(sig)
    assert equivalent_up_to_group(recovered, original, tol=1e-6).equivalent

    out2 = tmp_path / "rec2.json"
    code, _, _ = _run(capsys, ["recover", str(meas), "--out", str(out2)])
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_recover_refuses_even_stride_measurements(capsys, tmp_path):
    sig, _ = _generate(capsys, tmp_path)
    meas, _ = _measure(capsys, tmp_path, sig, l=2)
    code, _, err = _run(capsys, ["recover", str(meas), "--out", str(tmp_path / "r.json")])
    assert code == 1
    assert "refused" in err and "even" in err


def test_recover_reports_corrupted_measurements(capsys, tmp_path):
    sig, _ = _generate(capsys, tmp_path)
    meas, _ = _measure(capsys, tmp_path, sig, l=3, plan_only=True)
    doc = json.loads(meas.read_text())
    doc["entries"][-1][2] *= 3.0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, err = _run(capsys, ["recover", str(bad), "--out", str(tmp_path / "r.json")])
    assert code == 1
    assert "error" in err


def test_check_equiv_accepts_group_equivalent_signals(capsys, tmp_path):
    sig, _ = _generate(capsys, tmp_path)
    code, out, _ = _run(capsys, ["check-equiv", str(sig), str(sig)])
    assert code == 0
    doc = _report(out)
    assert doc["equivalence"]["equivalent"] is True
    assert doc["equivalence"]["best_element"] == {
        "rotation_sign": 1,
        "translation": 0,
        "reflected": False,
    }


def test_check_equiv_rejects_different_signals(capsys, tmp_path):
    a, _ = _generate(capsys, tmp_path, "a.json", seed=1)
    b, _ = _generate(capsys, tmp_path, "b.json", seed=2)
    code, out, _ = _run(capsys, ["check-equiv", str(a), str(b)])
    assert code == 1
    assert _report(out)["equivalence"]["equivalent"] is False


def test_tolerance_env_override_and_flag_priority(capsys, tmp_path, monkeypatch):
    a, _ = _generate(capsys, tmp_path, "a.json", seed=1)
    b, _ = _generate(capsys, tmp_path, "b.json", seed=2)
    # A huge tolerance from the environment turns inequivalence into a pass.
    monkeypatch.setenv("FROGPR_TOL", "10.0")
    code, _, _ = _run(capsys, ["check-equiv", str(a), str(b)])
    assert code == 0
    # An explicit flag beats the environment.
    code, _, _ = _run(capsys, ["check-equiv", str(a), str(b), "--tol", "1e-9"])
    assert code == 1
    monkeypatch.setenv("FROGPR_TOL", "not-a-number")
    code, _, err = _run(capsys, ["check-equiv", str(a), str(b)])
    assert code == 2
    assert "FROGPR_TOL" in err


def test_malformed_and_missing_inputs_are_usage_errors(capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    code, _, err = _run(capsys, ["measure", str(broken), "--l", "1", "--out", str(tmp_path / "m.json")])
    assert code == 2
    assert "parse" in err
    code, _, err = _run(capsys, ["recover", str(tmp_path / "absent.json"), "--out", str(tmp_path / "r.json")])
    assert code == 2


def test_selftest_reporting_and_exit_codes(capsys, monkeypatch):
    seen = []
    fake = [
        CriterionResult(1, "alpha", True, "fine", 0.01),
        CriterionResult(2, "beta", False, "broken", 0.02),
    ]
    monkeypatch.setattr("frogpr.cli.run_all", lambda quick: seen.append(quick) or fake)
    code, out, _ = _run(capsys, ["selftest", "--quick"])
    assert code == 1
    assert seen == [True]
    assert "criterion 1 PASS alpha" in out
    assert "criterion 2 FAIL beta" in out
    assert "1/2 criteria passed" in out

    monkeypatch.setattr("frogpr.cli.run_all", lambda quick: fake[:1])
    code, out, _ = _run(capsys, ["selftest"])
    assert code == 0
    assert "1/1 criteria passed" in out


def test_argparse_contract():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
