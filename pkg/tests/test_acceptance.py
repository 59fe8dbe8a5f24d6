"""End-to-end acceptance suite.

Each criterion is one test that prints a single pass/fail line (run with
``pytest -s tests/test_acceptance.py`` to see them live). The Monte-Carlo
tables are shared across criteria through module-scoped fixtures; every
tolerance is pinned here, not tuned at runtime.
"""

import math

import numpy as np
import pytest

from rsvdlab import (
    IDENTITY,
    ExperimentConfig,
    SpectralProfile,
    approximate_with_sketch,
    bilevel_closed_form,
    bilevel_filtered_theta0,
    bilevel_profile,
    eckart_young_lower,
    emit_dat,
    eval_filter_log_sq,
    gaussian_matrix,
    halko_tropp_upper,
    least_squares_oracle,
    make_rng,
    parse_config,
    poly_filter,
    power_filter,
    powerlaw_asymptotic,
    powerlaw_filtered_limit,
    powerlaw_profile,
    prop1_best,
    prop2_upper,
    run_sweep,
    solve_filtered,
    solve_theta_tilde,
    synthesize_matrix,
)


def report(criterion: int, ok: bool, detail: str = ""):
    print(f"\nacceptance criterion {criterion:2d}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {criterion} failed: {detail}"


# ---------------------------------------------------------------------------
# shared inputs


@pytest.fixture(scope="module")
def random_profiles():
    """200 random spectra with a random valid sketch size each."""
    rng = np.random.default_rng(20240817)
    cases = []
    for i in range(200):
        m = int(rng.integers(10, 2001))
        sig = np.sort(10.0 ** rng.uniform(-3, 3, size=m))[::-1]
        if i < 3:
            k = m  # exercise the k = m shortcut explicitly
        else:
            k = int(rng.integers(1, m + 1))
        cases.append((SpectralProfile(sig), k))
    return cases


_FILTER_CYCLE = (IDENTITY, power_filter(1), power_filter(2), power_filter(5))


@pytest.fixture(scope="module")
def desk_table():
    cfg = ExperimentConfig(
        profile=bilevel_profile(15, 300, 1.0, 0.7),
        n=300,
        d=300,
        k_grid=(20, 30, 40, 60),
        filters=(IDENTITY,),
        trials=50,
        base_seed=101,
    )
    return cfg, run_sweep(cfg)


@pytest.fixture(scope="module")
def paper_table():
    cfg = ExperimentConfig(
        profile=bilevel_profile(50, 1000, 1.0, 0.7),
        n=1000,
        d=1000,
        k_grid=(15, 60, 100),
        filters=(IDENTITY,),
        trials=20,
        base_seed=202,
    )
    return cfg, run_sweep(cfg)


@pytest.fixture(scope="module")
def powerlaw_table():
    cfg = ExperimentConfig(
        profile=powerlaw_profile(1.0, 300),
        n=300,
        d=300,
        k_grid=(30,),
        filters=(power_filter(4),),
        trials=50,
        base_seed=303,
    )
    return cfg, run_sweep(cfg)


# ---------------------------------------------------------------------------
# 1. fixed-point residuals


def test_criterion_1_fixed_point_residuals(random_profiles):
    worst_plain = 0.0
    worst_eq1 = 0.0
    worst_eq2 = 0.0
    for i, (profile, k) in enumerate(random_profiles):
        s2 = profile.sigmas**2
        m = profile.m
        pred = solve_theta_tilde(profile, k)
        resid = math.fsum((s2 / (pred.theta_tilde + k * s2)).tolist()) - 1.0
        worst_plain = max(worst_plain, abs(resid))

        spec = _FILTER_CYCLE[i % len(_FILTER_CYCLE)]
        fpred = solve_filtered(profile, k, spec)
        # independent linear-space re-evaluation of both equations
        chi2 = np.exp(eval_filter_log_sq(spec, profile.sigmas))
        with np.errstate(over="ignore"):
            denom = 1.0 + fpred.theta0 * chi2
        r1 = math.fsum((1.0 / denom).tolist()) - (m - k)
        r2 = math.fsum((s2 / denom).tolist()) - fpred.theta_tilde
        worst_eq1 = max(worst_eq1, abs(r1) / m)
        worst_eq2 = max(worst_eq2, abs(r2) / float(np.sum(s2)))
    ok = worst_plain <= 1e-10 and worst_eq1 <= 1e-10 and worst_eq2 <= 1e-10
    report(
        1,
        ok,
        f"worst residuals: plain {worst_plain:.2e}, "
        f"filtered eq1 {worst_eq1:.2e} of m, eq2 {worst_eq2:.2e} of energy",
    )


# ---------------------------------------------------------------------------
# 2. identity filter reproduces the plain prediction


def test_criterion_2_identity_filter_equivalence(random_profiles):
    worst = 0.0
    for profile, k in random_profiles:
        plain = solve_theta_tilde(profile, k).theta_tilde
        filt = solve_filtered(profile, k, IDENTITY).theta_tilde
        if plain == 0.0:
            worst = max(worst, abs(filt))
        else:
            worst = max(worst, abs(filt - plain) / plain)
    ok = worst <= 1e-8
    report(2, ok, f"worst relative gap {worst:.2e}")


# ---------------------------------------------------------------------------
# 3. closed forms against the generic solvers


def test_criterion_3_closed_forms():
    m, a, b = 500, 1.3, 0.6
    worst_plain = 0.0
    worst_theta0 = 0.0
    for r in (10, 50, 120):
        profile = bilevel_profile(r, m, a, b)
        for k in (max(1, r // 2), r + 10, min(3 * r, m - 1)):
            closed = bilevel_closed_form(r, m, a, b, k)
            solver = solve_theta_tilde(profile, k).theta_tilde
            worst_plain = max(worst_plain, abs(closed - solver) / solver)
            for q in (0, 1, 3):
                spec = power_filter(q)
                theta0 = bilevel_filtered_theta0(r, m, a, b, k, spec)
                ref = solve_filtered(profile, k, spec).theta0
                worst_theta0 = max(worst_theta0, abs(theta0 - ref) / ref)
    ok = worst_plain <= 1e-8 and worst_theta0 <= 1e-8
    report(
        3,
        ok,
        f"worst relative gaps: theta_tilde {worst_plain:.2e}, theta0 {worst_theta0:.2e}",
    )


# ---------------------------------------------------------------------------
# 4. power-law sinc formula


def test_criterion_4_powerlaw_formula():
    worst = 0.0
    m = 10**6
    for alpha in (0.75, 1.0, 2.0):
        profile = powerlaw_profile(alpha, m)
        for k in (50, 100, 200):
            solver = solve_theta_tilde(profile, k).theta_tilde
            formula = powerlaw_asymptotic(alpha, k)
            worst = max(worst, abs(formula - solver) / solver)
    ok = worst <= 0.05
    report(4, ok, f"worst relative gap {worst:.2%}")


# ---------------------------------------------------------------------------
# 5. Monte-Carlo tracking


def _tracking_gaps(cfg, table):
    gaps = []
    for ki in range(len(cfg.k_grid)):
        for fi in range(len(cfg.filters)):
            pred = table.prediction[ki, fi]
            tol = max(3.0 * table.stderr[ki, fi], 0.03 * pred)
            gaps.append((abs(table.mean[ki, fi] - pred), tol))
    return gaps


def test_criterion_5_monte_carlo_tracking(desk_table, paper_table):
    gaps = _tracking_gaps(*desk_table) + _tracking_gaps(*paper_table)
    ok = all(gap <= tol for gap, tol in gaps)
    worst = max(gap / tol for gap, tol in gaps)
    report(5, ok, f"worst gap at {worst:.3f} of tolerance over {len(gaps)} cells")


# ---------------------------------------------------------------------------
# 6. filtered convergence to the optimal-rank floor


def test_criterion_6_filter_convergence(powerlaw_table):
    profile = bilevel_profile(50, 1000, 1.0, 0.7)
    monotone = True
    worst_floor = 0.0
    for k in (51, 60, 100, 300):
        preds = [
            solve_filtered(profile, k, power_filter(q)).theta_tilde
            for q in (0, 1, 2, 6, 10, 20)
        ]
        monotone &= all(x >= y - 1e-9 for x, y in zip(preds, preds[1:]))
        floor = (1000 - k) * 0.49
        worst_floor = max(worst_floor, abs(preds[-1] - floor) / floor)
    cfg, table = powerlaw_table
    tail = powerlaw_filtered_limit(1.0, 30, 300)
    emp_gap = abs(table.mean[0, 0] - tail) / tail
    ok = monotone and worst_floor <= 0.005 and emp_gap <= 0.10
    report(
        6,
        ok,
        f"monotone={monotone}, q=20 floor gap {worst_floor:.2%}, "
        f"power-law q=4 empirical gap {emp_gap:.2%}",
    )


# ---------------------------------------------------------------------------
# 7. sandwich bounds


def test_criterion_7_sandwich_bounds():
    rng = np.random.default_rng(77)
    ok_sandwich = True
    for _ in range(100):
        m = int(rng.integers(3, 500))
        sig = np.sort(10.0 ** rng.uniform(-2, 2, size=m))[::-1]
        profile = SpectralProfile(sig)
        k = int(rng.integers(1, m + 1))
        theta = solve_theta_tilde(profile, k).theta_tilde
        best, best_r = prop1_best(profile, k)
        ok_sandwich &= eckart_young_lower(profile, k) <= theta * (1 + 1e-9) + 1e-12
        ok_sandwich &= theta <= best * (1 + 1e-9) + 1e-12
        if best_r < k - 1:
            ok_sandwich &= best <= halko_tropp_upper(profile, k, best_r) * (1 + 1e-12)
    ok_prop2 = True
    profile = bilevel_profile(50, 1000, 1.0, 0.7)
    for q in (0, 1, 2, 6):
        spec = power_filter(q)
        for k, r in ((60, 30), (100, 50), (300, 100)):
            bound = prop2_upper(profile, k, r, spec)
            theta = solve_filtered(profile, k, spec).theta_tilde
            ok_prop2 &= theta <= bound * (1 + 1e-9)
    ok = ok_sandwich and ok_prop2
    report(7, ok, f"sandwich={ok_sandwich}, filtered upper bound={ok_prop2}")


# ---------------------------------------------------------------------------
# 8. least-squares oracle equals the projected output


def test_criterion_8_least_squares_oracle():
    specs = (
        IDENTITY,
        power_filter(1),
        power_filter(2),
        poly_filter([0.5, 2.0]),
        poly_filter([1.0, -0.2]),
    )
    rng = np.random.default_rng(88)
    worst = 0.0
    for i in range(50):
        n = int(rng.integers(20, 101))
        d = int(rng.integers(20, 101))
        m = int(rng.integers(5, min(n, d) + 1))
        sig = np.sort(rng.uniform(0.5, 2.0, size=m))[::-1]
        sm = synthesize_matrix(SpectralProfile(sig), n, d, make_rng(8000 + i))
        k = int(rng.integers(1, m + 1))
        Omega = gaussian_matrix(d, k, make_rng(9000 + i))
        spec = specs[i % len(specs)]
        res = approximate_with_sketch(sm.A, Omega, spec)
        oracle = least_squares_oracle(sm.A, Omega, spec)
        gap = np.linalg.norm(oracle - res.A_hat) / np.linalg.norm(sm.A)
        worst = max(worst, gap)
    ok = worst <= 1e-8
    report(8, ok, f"worst relative Frobenius gap {worst:.2e}")


# ---------------------------------------------------------------------------
# 9. per-trial optimal-rank floor


def test_criterion_9_per_trial_floor(desk_table, paper_table, powerlaw_table):
    violations = 0
    trials = 0
    for cfg, table in (desk_table, paper_table, powerlaw_table):
        energy = cfg.profile.energy()
        for ki, k in enumerate(cfg.k_grid):
            floor = eckart_young_lower(cfg.profile, k) - 1e-6 * energy
            violations += int(np.sum(table.errors[ki] < floor))
            trials += table.errors[ki].size
    ok = violations == 0
    report(9, ok, f"{violations} violations across {trials} trials")


# ---------------------------------------------------------------------------
# 10. determinism and table shape


def test_criterion_10_determinism(tmp_path):
    config_text = """\
ensemble = bilevel
r = 3
m = 24
a = 1.0
b = 0.6
n = 30
d = 28
k_grid = 4,8,16
filters = identity,power:1,power:3
trials = 4
seed = 424242
out = determinism.dat
"""
    cfg = parse_config(config_text)
    first = tmp_path / "first.dat"
    second = tmp_path / "second.dat"
    emit_dat(run_sweep(cfg), first)
    emit_dat(run_sweep(cfg), second)
    identical = first.read_bytes() == second.read_bytes()
    header = first.read_text().splitlines()[0].split()
    shape_ok = len(header) == 2 * 3 + 3
    ok = identical and shape_ok
    report(10, ok, f"byte-identical={identical}, columns={len(header)}")
