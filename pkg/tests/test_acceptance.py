"""Acceptance suite: the eight headline checks, printed one verdict per
criterion. These runs use the frozen reproduction profiles and take a
few minutes in total."""
import time

import numpy as np
import pytest

import _oracles as oracle
from stratlearn import (
    Evaluator,
    RunConfig,
    estimate_gradient,
    perturbation_scale,
    run_iterative,
    run_rrm,
    solve_full_info,
)
from stratlearn.cli import (
    TABLE1_PROFILE,
    check_gradients,
    reproduce_fig1,
    reproduce_fig2,
    reproduce_table1,
    reproduce_table2,
)
from stratlearn.core import STREAM_EVAL, STREAM_SIGNS, STREAM_TYPES, substream
from stratlearn.env import ClassificationEnv
from stratlearn.learn import run_batch


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num}: {detail}"


def _within(value: float, target: float, tol: float) -> bool:
    return abs(value - target) <= tol


@pytest.fixture(scope="module")
def table1():
    start = time.monotonic()
    result, _ = reproduce_table1()
    result["elapsed"] = time.monotonic() - start
    return result


@pytest.fixture(scope="module")
def table2():
    result, _ = reproduce_table2()
    return result


def test_criterion_1_classification_table(table1):
    bands = {"full_info": (1.1176, 0.01), "iterative": (1.1180, 0.02),
             "rrm": (1.1261, 0.02), "naive": (1.7448, 0.05)}
    medians = {m: table1["table"][m]["avg_mse"] for m in bands}
    in_band = {m: _within(medians[m], *bands[m]) for m in bands}
    per_method = table1["elapsed"] / len(bands)
    fast_enough = per_method <= 120.0
    detail = (", ".join(f"{m} {medians[m]:.4f}" for m in bands)
              + f", {per_method:.0f}s/method")
    _verdict(1, all(in_band.values()) and fast_enough, detail)


def test_criterion_2_pricing_table(table2):
    tbl = table2["table"]
    regret = {m: tbl[m]["avg_regret_signed"] for m in tbl}
    ok_full = regret["full_info"] == 0.0
    ok_iter = -1.0 <= regret["iterative"] <= 0.0
    ok_naive = abs(regret["naive"] - (-48.21)) <= 0.10 * 48.21
    ok_rrm = (abs(regret["rrm"] - (-24.45)) <= 0.20 * 24.45
              and tbl["rrm"]["oscillating"])
    detail = (f"full {regret['full_info']:.4f}, iter {regret['iterative']:.4f}, "
              f"naive {regret['naive']:.2f}, rrm {regret['rrm']:.2f} "
              f"oscillating={tbl['rrm']['oscillating']}")
    _verdict(2, ok_full and ok_iter and ok_naive and ok_rrm, detail)


def test_criterion_3_terminal_slope_convergence():
    fig1, _ = reproduce_fig1()
    fig2, _ = reproduce_fig2()
    gap_cls = fig1["terminal_slope_gap"]
    gap_prc = fig2["terminal_slope_gap"]
    ok = gap_cls <= 0.05 and gap_prc <= 0.02
    _verdict(3, ok, f"classification |gap| {gap_cls:.4f} <= 0.05, "
                    f"pricing |gap| {gap_prc:.4f} <= 0.02")


def test_criterion_4_estimator_consistency():
    result, _ = check_gradients()
    ok = (result["median_err_large"] < 0.5 * result["median_err_small"]
          and result["rel_err_large"] < 0.10)
    _verdict(4, ok, f"shrink {result['shrink_ratio']:.3f} < 0.5, "
                    f"rel err {result['rel_err_large']:.2%} < 10%")


def test_criterion_5_fixed_point_is_suboptimal():
    env = ClassificationEnv()
    cfg = RunConfig(env="classification", method="rrm", n=200_000, t_max=60,
                    eta=0.4, c=0.5, alpha=0.25, seed=11, eval_reps=100_000)
    evaluator = Evaluator(env, cfg.eval_reps, substream(cfg.seed, STREAM_EVAL))
    solution = solve_full_info(env, cfg, evaluator)
    fixed_point = run_rrm(env, cfg).terminal_beta
    gap, se = evaluator.diff(fixed_point, solution.beta_star)
    ok = gap < 0 and abs(gap) > 5.0 * se
    _verdict(5, ok, f"objective gap {gap:.5f} ({abs(gap) / se:.1f} paired SEs)")


def test_criterion_6_terminal_error_rate():
    # one long run per seed: with per-step substreams the T = 100 and
    # T = 400 runs are exact prefixes of the T = 1600 run
    horizons = (100, 400, 1600)
    errors = {t: [] for t in horizons}
    for seed in range(7, 17):
        cfg = RunConfig(method="iterative", seed=seed,
                        **{**TABLE1_PROFILE, "t_max": 1600})
        betas = run_iterative(ClassificationEnv(), cfg).betas()
        for t in horizons:
            errors[t].append(
                float(np.sum((betas[t - 1] - oracle.CLS_BETA_STAR) ** 2)))
    med = {t: float(np.median(errors[t])) for t in horizons}
    non_increasing = med[100] >= med[400] >= med[1600]
    rate_ok = med[1600] <= med[100] / 4.0 * 2.0
    _verdict(6, non_increasing and rate_ok,
             f"median e_T {med[100]:.5f} -> {med[400]:.5f} -> {med[1600]:.5f}")


def test_criterion_7_weighted_regret_bound(table1):
    rows = [s["methods"]["iterative"] for s in table1["per_seed"]]
    ok_each = [r["weighted_regret"] <= r["regret_bound"] for r in rows]
    worst = max(r["weighted_regret"] - r["regret_bound"] for r in rows)
    _verdict(7, all(ok_each),
             f"{sum(ok_each)}/{len(rows)} seeds, worst slack {-worst:.3f}")


def test_criterion_8_desk_scale_substitutes():
    env = ClassificationEnv()
    # one-step update with a per-coordinate step size
    cfg = RunConfig(env="classification", method="iterative", n=200,
                    t_max=1, eta=(0.3, 0.7), c=0.5, alpha=0.25, seed=42,
                    eval_reps=2000)
    traj = run_iterative(env, cfg)
    h = perturbation_scale(cfg.c, cfg.alpha, cfg.n)
    beta0 = env.project(env.beta_init, margin=h)
    design, record = run_batch(
        env, beta0, cfg.n, h,
        rng_types=substream(cfg.seed, STREAM_TYPES, 1),
        rng_signs=substream(cfg.seed, STREAM_SIGNS, 1),
        c=cfg.c, alpha=cfg.alpha)
    est = estimate_gradient(design, record.pi, demean=True)
    expected = env.project(beta0 + np.array([0.3, 0.7]) * est.gamma_hat,
                           margin=h)
    one_step_ok = np.array_equal(traj.terminal_beta.values, expected)

    # plug-in score arithmetic at published coefficients
    score = float(env.treat(40.0, np.array([-31.43, 0.248])))
    plug_in_ok = score == pytest.approx(-21.51, abs=1e-9)

    _verdict(8, one_step_ok and plug_in_ok,
             f"one-step exact={one_step_ok}, plug-in score {score:.2f}")
