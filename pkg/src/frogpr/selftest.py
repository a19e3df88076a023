"""Acceptance suite: eight desk-scale criteria, shared by the CLI and tests.

Each criterion function returns a CriterionResult with a pass flag and a
one-line account of what was measured. Seeds are fixed, so runs are
reproducible. quick=True shrinks the sweeps to N <= 20 configurations.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .ambiguity import apply_element, equivalent_up_to_group, group_elements, translate
from .analytic import random_analytic_signal
from .errors import FrogprError
from .frog import (
    FrogParams,
    frog_grid_time,
    frog_measurements_time,
    plan_indices,
    _pow_is_minus_one,
    _pow_is_one,
)
from .recovery import even_l_infeasibility_probe, recover, verify_solution
from .spectral import dft

__all__ = ["CriterionResult", "run_all", "format_line", "CRITERIA"]

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: str
    elapsed_s: float


def format_line(res: CriterionResult) -> str:
    word = "PASS" if res.passed else "FAIL"
    return f"criterion {res.number} {word} {res.name} ({res.elapsed_s:.2f}s): {res.details}"


def _generic_even_signal(n, rng, floor0=0.1, floor1=0.1, floor2=0.05, gap=0.05):
    """Analytic signal whose spectrum keeps the recovery pipeline generic:
    boundary and early coefficients bounded away from zero relative to the
    largest one, and the two boundary moduli separated."""
    while True:
        z = random_analytic_signal(n, rng)
        mods = np.abs(dft(z))
        scale = mods.max()
        if (
            mods[0] >= floor0 * scale
            and mods[n // 2] >= floor0 * scale
            and mods[1] >= floor1 * scale
            and mods[2] >= floor2 * scale
            and abs(mods[0] - mods[n // 2]) >= gap * scale
        ):
            return z


def criterion_1(quick: bool = False) -> CriterionResult:
    """Worked four-sample example: analytic extension, spectrum, translation
    by 2/pi, and the (0, 0) measurement of both signals against the
    4-decimal reference values, each within 5e-4."""
    from .analytic import make_analytic

    start = time.perf_counter()
    x = np.array([0.3252, -0.7549, 1.3703, -1.7115])
    params = FrogParams(4, 1)

    def compute():
        z = make_analytic(x)
        s = dft(z)
        y00 = frog_grid_time(z, params)[0, 0]
        zg = translate(z, 2.0 / np.pi)
        yg00 = frog_grid_time(zg, params)[0, 0]
        return s, float(y00), float(yg00)

    compute()  # warm the FFT plan/caches before timing
    t0 = time.perf_counter()
    s, y00, yg00 = compute()
    core_elapsed = time.perf_counter() - t0

    ref_spectrum = [-0.7710, complex(-2.0902, -1.9132), 4.1619, 0.0]
    checks = [
        (f"spectrum[{k}]", abs(s[k] - ref_spectrum[k])) for k in range(4)
    ]
    checks.append(("entry(0,0)", abs(y00 - 20.0614)))
    checks.append(("translated entry(0,0)", abs(yg00 - 17.9335)))
    failing = [(name, dev) for name, dev in checks if dev > 5e-4]
    runtime_ok = core_elapsed < 1e-3

    passed = not failing and runtime_ok
    if passed:
        details = (
            f"all 6 values within 5e-4 of the references, core runtime "
            f"{core_elapsed * 1e3:.3f}ms"
        )
    else:
        parts = [f"{name} deviates {dev:.2e} > 5e-4" for name, dev in failing]
        if not runtime_ok:
            parts.append(f"core runtime {core_elapsed * 1e3:.3f}ms >= 1ms")
        details = (
            "; ".join(parts)
            + f" [computed entry(0,0)={y00:.6f}, translated={yg00:.6f}; the "
            "4-decimal reference inputs propagate ~1e-3 of rounding, so the "
            "reference outputs are not reachable to 5e-4 from them]"
        )
    return CriterionResult(
        1, "example-reproduction", passed, details, time.perf_counter() - start
    )


def criterion_2(quick: bool = False) -> CriterionResult:
    """End-to-end: 100 generic signals per configuration recover to a
    group-equivalent signal with equivalence and verification residuals
    below 1e-6, from exactly 3N/2 + 1 measurements, in under 30 s."""
    start = time.perf_counter()
    configs = [(12, 1), (16, 3), (20, 3), (32, 5), (64, 11)]
    if quick:
        configs = [(n, l) for n, l in configs if n <= 20]
    trials = 100
    rng = np.random.default_rng(20260201)
    failures: list[str] = []
    worst_eq = 0.0
    worst_ver = 0.0
    total = 0
    for n, l in configs:
        params = FrogParams(n, l)
        plan = plan_indices(params)
        pairs = plan.pairs()
        for trial in range(trials):
            total += 1
            z = _generic_even_signal(n, rng)
            meas = frog_measurements_time(z, params, indices=pairs)
            if len(meas.entries) != 3 * n // 2 + 1:
                failures.append(f"({n},{l}) trial {trial}: plan cardinality")
                continue
            try:
                rec = recover(meas, plan)
            except FrogprError as exc:
                failures.append(f"({n},{l}) trial {trial}: {exc}")
                continue
            report = equivalent_up_to_group(rec.signal, z, tol=1e-6)
            worst_eq = max(worst_eq, report.residual)
            worst_ver = max(worst_ver, rec.verification_residual)
            if not report.equivalent or report.residual >= 1e-6:
                failures.append(
                    f"({n},{l}) trial {trial}: equivalence residual {report.residual:.2e}"
                )
            elif rec.verification_residual >= 1e-6:
                failures.append(
                    f"({n},{l}) trial {trial}: verification residual "
                    f"{rec.verification_residual:.2e}"
                )
    elapsed = time.perf_counter() - start
    in_budget = elapsed < 30.0
    passed = not failures and in_budget
    if passed:
        details = (
            f"{total}/{total} recoveries group-equivalent (worst equivalence "
            f"residual {worst_eq:.2e}, worst verification {worst_ver:.2e}) "
            f"in {elapsed:.1f}s"
        )
    else:
        details = f"{len(failures)} failures"
        if failures:
            details += f" (first: {failures[0]})"
        if not in_budget:
            details += f"; elapsed {elapsed:.1f}s >= 30s"
    return CriterionResult(2, "end-to-end-recovery", passed, details, elapsed)


def criterion_3(quick: bool = False) -> CriterionResult:
    """Invariance: all 4N group elements preserve every full-grid entry for
    50 even-length signals; arbitrary real translations do for 50
    odd-length signals; both within 1e-8 relative to the grid maximum."""
    start = time.perf_counter()
    rng = np.random.default_rng(20260202)
    even_sizes = [8, 10, 12, 16, 18, 20] if quick else [8, 10, 12, 16, 20, 24, 32]
    odd_sizes = [9, 11, 13, 15, 17, 19]
    strides = [1, 3, 5]
    worst_even = 0.0
    for idx in range(50):
        n = even_sizes[idx % len(even_sizes)]
        l = strides[idx % len(strides)]
        params = FrogParams(n, l)
        z = random_analytic_signal(n, rng)
        grid = frog_grid_time(z, params)
        gmax = grid.max()
        for g in group_elements(n):
            dev = np.abs(frog_grid_time(apply_element(g, z), params) - grid).max()
            worst_even = max(worst_even, dev / gmax)
    worst_odd = 0.0
    for idx in range(50):
        n = odd_sizes[idx % len(odd_sizes)]
        l = strides[idx % len(strides)]
        params = FrogParams(n, l)
        z = random_analytic_signal(n, rng)
        grid = frog_grid_time(z, params)
        gmax = grid.max()
        for _ in range(10):
            zt = translate(z, float(rng.uniform(0.0, n)))
            dev = np.abs(frog_grid_time(zt, params) - grid).max()
            worst_odd = max(worst_odd, dev / gmax)
    passed = worst_even <= 1e-8 and worst_odd <= 1e-8
    details = (
        f"worst relative deviation {worst_even:.2e} over 4N elements x 50 even "
        f"signals, {worst_odd:.2e} over 10 real translations x 50 odd signals"
    )
    return CriterionResult(
        3, "ambiguity-invariance", passed, details, time.perf_counter() - start
    )


def criterion_4(quick: bool = False) -> CriterionResult:
    """Sensitivity: a non-integer translation of an even-length signal with
    nonvanishing boundary coefficient changes some grid entry by more than
    1e-3 relative to that entry in at least 99 of 100 trials (the same
    behavior as the worked four-point example, whose (0,0) entry moves by
    about ten percent of itself)."""
    start = time.perf_counter()
    rng = np.random.default_rng(20260203)
    sizes = [8, 12, 16, 20] if quick else [8, 12, 16, 20, 24]
    strides = [1, 3]
    hits = 0
    smallest = math.inf
    for idx in range(100):
        n = sizes[idx % len(sizes)]
        l = strides[idx % len(strides)]
        params = FrogParams(n, l)
        z = _generic_even_signal(n, rng, floor1=0.0, floor2=0.0, gap=0.0)
        grid = frog_grid_time(z, params)
        moved = frog_grid_time(translate(z, gamma=float(rng.uniform(0.1, 0.9))), params)
        # Per-entry relative change; entries below the noise floor cannot
        # contribute (rows k >= 1 differ only by roundoff).
        denom = np.maximum(np.maximum(grid, moved), 1e-9 * grid.max())
        rel = float((np.abs(moved - grid) / denom).max())
        smallest = min(smallest, rel)
        if rel > 1e-3:
            hits += 1
    passed = hits >= 99
    details = (
        f"{hits}/100 translations changed an entry by > 1e-3 of itself "
        f"(smallest observed change {smallest:.2e})"
    )
    return CriterionResult(
        4, "translation-sensitivity", passed, details, time.perf_counter() - start
    )


def criterion_5(quick: bool = False) -> CriterionResult:
    """Solver oracles: 1000 planted instances per solver recover the planted
    point (or its predicted partner) within 1e-8; the real-scale pair is
    exactly conjugate and the scaled pair is conjugate after dividing out
    the scale (to complex-division rounding, a few ulp)."""
    from .circles import (
        solve_three_circles,
        solve_two_circles_real,
        solve_two_circles_scaled,
    )

    start = time.perf_counter()
    rng = np.random.default_rng(20260204)
    failures: list[str] = []
    worst = 0.0

    def cplx():
        return complex(rng.standard_normal(), rng.standard_normal())

    for trial in range(1000):
        z = cplx()
        while True:
            v1, v2, v3 = cplx(), cplx(), cplx()
            d13 = v1 - v3
            if abs(d13) > 0.1 and abs(((v1 - v2) / d13).imag) > 1e-3:
                break
        got = solve_three_circles(
            v1, v2, v3, abs(z + v1), abs(z + v2), abs(z + v3)
        )
        err = abs(got - z) / max(1.0, abs(z))
        worst = max(worst, err)
        if err > 1e-8:
            failures.append(f"three-circle trial {trial}: error {err:.2e}")

    for trial in range(1000):
        m = float(rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0]))
        v1 = float(rng.standard_normal())
        v2 = v1 + float(rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0]))
        w = complex(rng.standard_normal(), rng.uniform(0.1, 2.0))
        z = m * w
        cands = solve_two_circles_real(
            v1, v2, m, abs(z + m * v1), abs(z + m * v2)
        )
        err = min(abs(c - z) for c in cands) / max(1.0, abs(z))
        worst = max(worst, err)
        if err > 1e-8:
            failures.append(f"real-scale trial {trial}: error {err:.2e}")
        if cands[0].conjugate() != cands[1]:
            failures.append(f"real-scale trial {trial}: pair not exactly conjugate")

    for trial in range(1000):
        m = cplx()
        while abs(m) < 0.3:
            m = cplx()
        v1 = float(rng.standard_normal())
        v2 = v1 + float(rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0]))
        w = complex(rng.standard_normal(), rng.uniform(0.1, 2.0))
        z = m * w
        cands = solve_two_circles_scaled(
            v1, v2, m, abs(z + m * v1), abs(z + m * v2)
        )
        err = min(abs(c - z) for c in cands) / max(1.0, abs(z))
        worst = max(worst, err)
        if err > 1e-8:
            failures.append(f"scaled trial {trial}: error {err:.2e}")
        # The pair is m times an exactly conjugate pair by construction, but
        # recovering that pair divides by m, and complex multiply-then-divide
        # round trips carry up to ~2 eps of rounding (measured); 4 eps of
        # headroom is the rounding floor of the check itself, not a solver
        # tolerance.
        u0, u1 = cands[0] / m, cands[1] / m
        if abs(u0.conjugate() - u1) > 4.0 * _EPS * max(abs(u0), abs(u1)):
            failures.append(f"scaled trial {trial}: pair/m not conjugate")

    passed = not failures
    details = (
        f"3000 planted instances, worst relative error {worst:.2e}"
        if passed
        else f"{len(failures)} failures (first: {failures[0]})"
    )
    return CriterionResult(
        5, "solver-oracles", passed, details, time.perf_counter() - start
    )


def _validate_plan(plan) -> None:
    params = plan.params
    n, l, r = params.N, params.L, params.r
    i2, i3, ik = plan.i2, plan.i3, plan.ik
    assert i2[0] == 0 and list(i2) == sorted(set(i2)), f"i2 malformed: {i2}"
    for i in i2:
        assert 0 <= i < r
        assert not _pow_is_minus_one(i * l, n, 2), f"i2 entry {i}: 1 + w^2i = 0"
        assert abs(1.0 + params.w_pow(2 * i)) > 1e-9
        if i > 0:
            assert not _pow_is_one(i * l, n, 1), f"i2 entry {i}: w^i = 1"
            assert abs(params.w_pow(i) - 1.0) > 1e-9
    assert 1 <= i3 < r
    assert not _pow_is_minus_one(i3 * l, n, 3), f"i3={i3}: 1 + w^3i = 0"
    assert not _pow_is_one(i3 * l, n, 1) and not _pow_is_one(i3 * l, n, 2)
    assert abs(1.0 + params.w_pow(3 * i3)) > 1e-9
    assert abs(params.w_pow(i3) - 1.0) > 1e-9 and abs(params.w_pow(2 * i3) - 1.0) > 1e-9
    assert sorted(ik) == list(range(4, n // 2 + 1)), "ik keys wrong"
    for k, triple in ik.items():
        assert triple[0] == 0 and 1 <= triple[1] < triple[2] < r, f"ik[{k}]={triple}"
        for i in triple:
            assert not _pow_is_minus_one(i * l, n, k), f"ik[{k}] entry {i}: w^ki = -1"
            assert abs(1.0 + params.w_pow(k * i)) > 1e-9
        # The chosen pair must be non-conjugate (w^{k(a+b)} != 1) unless no
        # admissible pair is; re-derive the admissible set to confirm.
        adm = [m for m in range(1, r) if not _pow_is_minus_one(m * l, n, k)]
        any_nonconj = any(
            not _pow_is_one((adm[ai] + adm[bi]) * l, n, k)
            for ai in range(len(adm))
            for bi in range(ai + 1, len(adm))
        )
        a, b = triple[1], triple[2]
        if any_nonconj:
            assert not _pow_is_one((a + b) * l, n, k), f"ik[{k}] pair conjugate"
        else:
            assert (a, b) == (adm[0], adm[1]), f"ik[{k}] fallback not minimal"
    pairs = plan.pairs()
    assert len(pairs) == len(set(pairs)) == 3 * n // 2 + 1
    assert all(0 <= k <= n // 2 and 0 <= m < r for k, m in pairs)


def criterion_6(quick: bool = False) -> CriterionResult:
    """Index plans for every admissible geometry with N <= 128 and r in
    5..64 satisfy all exact admissibility congruences and have 3N/2 + 1
    distinct entries; every r in 5..64 is exercised."""
    start = time.perf_counter()
    n_max = 20 if quick else 128
    covered: set[int] = set()
    count = 0
    failures: list[str] = []
    for n in range(8, n_max + 1, 2):
        for l in range(1, n + 1):
            params = FrogParams(n, l)
            r = params.r
            if not 5 <= r <= 64:
                continue
            try:
                plan = plan_indices(params)
                _validate_plan(plan)
            except (AssertionError, RuntimeError, ValueError) as exc:
                failures.append(f"(N={n}, L={l}): {exc}")
                continue
            covered.add(r)
            count += 1
    missing = set() if quick else set(range(5, 65)) - covered
    passed = not failures and not missing
    if passed:
        details = f"{count} plans validated, r coverage {min(covered)}..{max(covered)}"
    else:
        details = f"{len(failures)} invalid plans"
        if failures:
            details += f" (first: {failures[0]})"
        if missing:
            details += f"; r values never exercised: {sorted(missing)}"
    return CriterionResult(
        6, "index-plan-validity", passed, details, time.perf_counter() - start
    )


def criterion_7(quick: bool = False) -> CriterionResult:
    """Rigidity: swapping the two boundary moduli of a generic spectrum
    pushes the verification residual above 1e-3 in 100/100 trials, while
    the true spectrum and its group variants stay below 1e-8."""
    start = time.perf_counter()
    rng = np.random.default_rng(20260205)
    sizes = [8, 10, 12, 16, 20] if quick else [8, 10, 12, 16, 20, 24]
    strides = [1, 3, 5]
    swap_misses: list[str] = []
    variant_misses: list[str] = []
    smallest_swap = math.inf
    worst_variant = 0.0
    for idx in range(100):
        n = sizes[idx % len(sizes)]
        l = strides[idx % len(strides)]
        params = FrogParams(n, l)
        z = _generic_even_signal(
            n, rng, floor0=0.05, floor1=0.05, floor2=0.0, gap=0.05
        )
        s = dft(z)
        meas = frog_measurements_time(z, params)
        half = n // 2
        pattern = np.where(np.arange(n) % 2 == 0, -1.0, 1.0)
        for tag, variant in (
            ("true", s),
            ("conjugate", np.conj(s)),
            ("negated", -s),
            ("half-translate", s * pattern),
        ):
            res = verify_solution(variant, meas)
            worst_variant = max(worst_variant, res)
            if res >= 1e-8:
                variant_misses.append(f"trial {idx} {tag}: residual {res:.2e}")
        swapped = s.copy()
        swapped[0] = math.copysign(abs(s[half]), s[0].real)
        swapped[half] = math.copysign(abs(s[0]), s[half].real)
        res = verify_solution(swapped, meas)
        smallest_swap = min(smallest_swap, res)
        if res <= 1e-3:
            swap_misses.append(f"trial {idx}: swapped residual {res:.2e}")
    passed = not swap_misses and not variant_misses
    if passed:
        details = (
            f"100/100 swapped spectra rejected (smallest residual "
            f"{smallest_swap:.2e}); group variants all below 1e-8 "
            f"(worst {worst_variant:.2e})"
        )
    else:
        details = "; ".join((swap_misses + variant_misses)[:2])
    return CriterionResult(
        7, "modulus-rigidity", passed, details, time.perf_counter() - start
    )


def criterion_8(quick: bool = False) -> CriterionResult:
    """Even-stride probe: with L even, a trial leading coefficient away from
    +-(the true one) leaves the five-circle system infeasible in >= 99/100
    trials, while the true value (either sign, any phase) stays feasible."""
    start = time.perf_counter()
    rng = np.random.default_rng(20260206)
    configs = [(12, 2), (16, 2), (20, 2), (20, 4)]
    if not quick:
        configs += [(24, 4), (32, 6)]
    infeasible = 0
    feasible_misses: list[str] = []
    for idx in range(100):
        n, l = configs[idx % len(configs)]
        params = FrogParams(n, l)
        plan = plan_indices(params)
        z = _generic_even_signal(
            n, rng, floor0=0.05, floor1=0.05, floor2=0.0, gap=0.0
        )
        s0 = float(dft(z)[0].real)
        needed = [(1, 0)] + [(2, i) for i in plan.i2]
        meas = frog_measurements_time(z, params, indices=needed)
        while True:
            c = float(rng.uniform(-1.5, 1.5))
            if 0.05 <= abs(c) and abs(abs(c) - 1.0) > 0.0105:
                break
        theta = float(rng.uniform(0.0, 2.0 * np.pi))
        if even_l_infeasibility_probe(meas, c * s0, theta):
            infeasible += 1
        for alpha in (s0, -s0):
            if even_l_infeasibility_probe(meas, alpha, theta):
                feasible_misses.append(
                    f"trial {idx}: alpha={alpha:+.3f} wrongly infeasible"
                )
    passed = infeasible >= 99 and not feasible_misses
    details = (
        f"{infeasible}/100 generic trial coefficients infeasible; true "
        f"coefficient feasible under both signs in all trials"
        if passed
        else f"{infeasible}/100 infeasible; "
        + (feasible_misses[0] if feasible_misses else "")
    )
    return CriterionResult(
        8, "even-stride-infeasibility", passed, details, time.perf_counter() - start
    )


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
]


def run_all(quick: bool = False) -> list[CriterionResult]:
    return [fn(quick) for fn in CRITERIA]
