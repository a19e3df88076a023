"""Command-line front end.

Subcommands: generate | measure | recover | check-equiv | selftest.
Exit status: 0 success, 1 domain refusal / inequivalence / failed self-test,
2 usage or parse error. Output files are deterministic for identical
commands, seeds, and inputs; run reports (stdout JSON) additionally carry
wall-clock timing. FROGPR_TOL overrides the default tolerance where a
--tol flag exists.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .ambiguity import equivalent_up_to_group
from .analytic import is_analytic, make_analytic
from .errors import FrogprError
from .frog import FrogParams, frog_measurements_time, plan_indices
from .jsonio import (
    dumps_canonical,
    load_measurements,
    load_signal,
    save_measurements,
    save_signal,
)
from .recovery import RecoveryConfig, recover
from .selftest import format_line, run_all
from .spectral import dft

__all__ = ["main"]


def _env_tol() -> float | None:
    raw = os.environ.get("FROGPR_TOL")
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"FROGPR_TOL is not a number: {raw!r}") from None


def _pick_tol(flag_value: float | None) -> float | None:
    return flag_value if flag_value is not None else _env_tol()


def _emit(
    command: str,
    started: float,
    inputs: dict,
    outputs: dict,
    residuals: dict,
    equivalence=None,
    **extra,
) -> None:
    doc = {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "residuals": residuals,
    }
    doc.update(extra)
    doc["equivalence"] = equivalence
    doc["elapsed_ms"] = (time.perf_counter() - started) * 1000.0
    sys.stdout.write(dumps_canonical(doc))


def _cmd_generate(args) -> int:
    started = time.perf_counter()
    if args.n < 2 or args.n % 2 != 0:
        print(f"error: --n must be an even integer >= 2, got {args.n}", file=sys.stderr)
        return 2
    rng = np.random.default_rng(args.seed)
    z = make_analytic(rng.standard_normal(args.n))
    s = dft(z)
    report = is_analytic(s)
    save_signal(args.out, z, s)
    _emit(
        "generate",
        started,
        inputs={"n": args.n, "seed": args.seed},
        outputs={"signal": str(args.out)},
        residuals={"analyticity_max_violation": report.max_violation},
    )
    return 0


def _cmd_measure(args) -> int:
    started = time.perf_counter()
    z = load_signal(args.signal)
    try:
        params = FrogParams(z.size, args.l)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.plan_only:
        try:
            indices = plan_indices(params).pairs()
        except ValueError as exc:
            print(f"refused: {exc}", file=sys.stderr)
            return 1
    else:
        indices = None
    meas = frog_measurements_time(z, params, indices)
    save_measurements(args.out, meas)
    _emit(
        "measure",
        started,
        inputs={
            "signal": str(args.signal),
            "n": params.N,
            "l": params.L,
            "plan_only": bool(args.plan_only),
        },
        outputs={"measurements": str(args.out)},
        residuals={},
    )
    return 0


def _cmd_recover(args) -> int:
    started = time.perf_counter()
    meas = load_measurements(args.measurements)
    violations = meas.params.recovery_violations()
    if violations:
        print("refused: " + "; ".join(violations), file=sys.stderr)
        return 1
    tol = _pick_tol(args.tol)
    config = (
        RecoveryConfig()
        if tol is None
        else RecoveryConfig(feasibility_tol=tol, residual_tol=tol)
    )
    try:
        result = recover(meas, config=config)
    except FrogprError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    save_signal(args.out, result.signal, result.spectrum)
    _emit(
        "recover",
        started,
        inputs={
            "measurements": str(args.measurements),
            "n": meas.params.N,
            "l": meas.params.L,
            "tol": tol,
        },
        outputs={"signal": str(args.out)},
        residuals={"verification_residual": result.verification_residual},
        sign_branch=result.sign_branch,
    )
    return 0


def _cmd_check_equiv(args) -> int:
    started = time.perf_counter()
    a = load_signal(args.a)
    b = load_signal(args.b)
    tol = _pick_tol(args.tol)
    report = equivalent_up_to_group(a, b, tol=1e-6 if tol is None else tol)
    best = report.best_element
    _emit(
        "check-equiv",
        started,
        inputs={"a": str(args.a), "b": str(args.b), "tol": tol},
        outputs={},
        residuals={"equivalence_residual": report.residual},
        equivalence={
            "equivalent": report.equivalent,
            "residual": report.residual,
            "best_element": None
            if best is None
            else {
                "rotation_sign": best.rotation_sign,
                "translation": best.translation,
                "reflected": best.reflected,
            },
        },
    )
    return 0 if report.equivalent else 1


def _cmd_selftest(args) -> int:
    started = time.perf_counter()
    results = run_all(quick=bool(args.quick))
    for res in results:
        print(format_line(res))
    npass = sum(res.passed for res in results)
    print(f"{npass}/{len(results)} criteria passed")
    _emit(
        "selftest",
        started,
        inputs={"quick": bool(args.quick)},
        outputs={},
        residuals={f"criterion_{res.number}": 1.0 if res.passed else 0.0 for res in results},
    )
    return 0 if npass == len(results) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frogpr",
        description=(
            "Synthesize FROG intensity measurements of analytic signals and "
            "recover signals from them."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random analytic signal")
    g.add_argument("--n", type=int, required=True, help="signal length (even)")
    g.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    g.add_argument("--out", required=True, help="output signal JSON path")

    m = sub.add_parser("measure", help="synthesize measurements of a signal")
    m.add_argument("signal", help="input signal JSON path")
    m.add_argument("--l", type=int, required=True, help="delay stride L")
    m.add_argument(
        "--plan-only",
        action="store_true",
        help="write only the 3N/2+1 planned entries instead of the full grid",
    )
    m.add_argument("--out", required=True, help="output measurement JSON path")

    r = sub.add_parser("recover", help="recover a signal from measurements")
    r.add_argument("measurements", help="input measurement JSON path")
    r.add_argument("--out", required=True, help="output signal JSON path")
    r.add_argument("--tol", type=float, default=None, help="recovery tolerance")

    c = sub.add_parser("check-equiv", help="compare two signals up to ambiguity")
    c.add_argument("a", help="first signal JSON path")
    c.add_argument("b", help="second signal JSON path")
    c.add_argument("--tol", type=float, default=None, help="equivalence tolerance")

    s = sub.add_parser("selftest", help="run the acceptance criteria")
    s.add_argument("--quick", action="store_true", help="N <= 20 subset, < 5 s")
    return parser


_HANDLERS = {
    "generate": _cmd_generate,
    "measure": _cmd_measure,
    "recover": _cmd_recover,
    "check-equiv": _cmd_check_equiv,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except FrogprError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: cannot parse input file: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
