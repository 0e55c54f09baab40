"""The four policy-learning procedures.

- run_iterative: announce per-agent perturbed policies, regress the
  realized objectives on the perturbations, and ascend the estimated
  gradient with step 2*eta/(t+1).
- run_rrm: repeatedly refit the policy treating the reported covariates
  as exogenous (its rest points are generally suboptimal).
- run_naive: fit once on a manipulation-free batch, deploy unchanged.
- solve_full_info / run_full_info: Monte-Carlo grid maximization of the
  true objective under common random numbers.

Agents never persist across batches: each step draws a fresh population.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    ConfigError,
    PolicyParams,
    RunConfig,
    SimulationError,
    STREAM_EVAL,
    STREAM_FIT,
    STREAM_SIGNS,
    STREAM_TYPES,
    Trajectory,
    TrajectoryStep,
    substream,
    validate_config,
)
from .env import Environment, get_environment
from .gradest import design_perturbations, estimate_gradient, perturbation_scale
from .metrics import Evaluator

__all__ = [
    "FullInfoSolution",
    "run_batch",
    "run_iterative",
    "run_rrm",
    "run_naive",
    "run_full_info",
    "run_method",
    "solve_full_info",
]

# A refit whose norm grows beyond this multiple of max(1, |beta^0|) has
# left the plausible region; the run is cut short and tagged.
DIVERGENCE_FACTOR = 1e3


@dataclass(frozen=True)
class FullInfoSolution:
    """Argmax of the Monte-Carlo objective and the evaluated trace."""

    beta_star: PolicyParams
    pi_star: float
    grid_trace: tuple


def _check_cfg(env: Environment, cfg: RunConfig) -> RunConfig:
    validate_config(cfg)
    if cfg.env != env.name:
        raise ConfigError(f"cfg.env is {cfg.env!r} but the environment "
                          f"is {env.name!r}")
    return cfg


def run_batch(env: Environment, base_beta: np.ndarray, n: int, h: float,
              rng_types: np.random.Generator,
              rng_signs: np.random.Generator,
              c: Optional[float] = None, alpha: Optional[float] = None):
    """Simulate one perturbed batch at base_beta.

    Each agent i is announced its own policy base_beta + h*eps_i and
    responds to exactly that policy. Returns the PerturbationDesign and
    the per-agent BatchRecord.
    """
    from .core import BatchRecord

    theta = env.sample_types(n, rng_types)
    design = design_perturbations(n, env.k, h, rng_signs, c=c, alpha=alpha)
    beta_i = np.asarray(base_beta, dtype=float)[None, :] + design.q
    x, w, y, pi = env.simulate(beta_i, theta)
    record = BatchRecord(eps=design.eps, beta_i=beta_i, x=x, w=w, y=y, pi=pi,
                         base_beta=base_beta, h=h)
    return design, record


def run_iterative(env, cfg: RunConfig) -> Trajectory:
    """Gradient-based online experiment.

    For t = 1..T: draw n fresh agents, announce beta_i = beta^{t-1} +
    h*eps_i, regress the realized objectives on the perturbations, and
    update beta^t = beta^{t-1} + 2*eta (.) gamma_hat / (t+1), projecting
    into the safe region shrunk by h so every announced policy stays
    admissible.
    """
    env = get_environment(env)
    _check_cfg(env, cfg)
    h = perturbation_scale(cfg.c, cfg.alpha, cfg.n)
    eta = cfg.eta_vector(env.k)
    beta = env.project(env.beta_init, margin=h)
    steps = []
    for t in range(1, cfg.t_max + 1):
        try:
            design, record = run_batch(
                env, beta, cfg.n, h,
                rng_types=substream(cfg.seed, STREAM_TYPES, t),
                rng_signs=substream(cfg.seed, STREAM_SIGNS, t),
                c=cfg.c, alpha=cfg.alpha)
            est = estimate_gradient(design, record.pi, demean=cfg.demean)
        except SimulationError as exc:
            raise SimulationError(f"step {t}: {exc}") from exc
        beta = env.project(beta + (2.0 / (t + 1)) * eta * est.gamma_hat,
                           margin=h)
        steps.append(TrajectoryStep(
            t=t, beta=PolicyParams(beta), gamma_hat=est.gamma_hat,
            batch_mean_pi=float(record.pi.mean())))
    return Trajectory(env=env.name, method="iterative", steps=tuple(steps))


def run_rrm(env, cfg: RunConfig) -> Trajectory:
    """Repeated risk minimization.

    For t = 1..T: announce beta^{t-1} to a fresh batch, let the agents
    report against it, then refit by the environment's first-order
    condition with the reports held fixed. Stops early and tags the
    trajectory when the refit norm exceeds 1000 * max(1, |beta^0|).
    """
    env = get_environment(env)
    _check_cfg(env, cfg)
    beta = np.array(env.beta_init, dtype=float)
    guard = DIVERGENCE_FACTOR * max(1.0, float(np.linalg.norm(beta)))
    steps = []
    diverged = False
    for t in range(1, cfg.t_max + 1):
        theta = env.sample_types(cfg.n, substream(cfg.seed, STREAM_TYPES, t))
        try:
            x, w, y, pi = env.simulate(beta, theta)
            beta = env.fit_response(x, w, y)
        except SimulationError as exc:
            raise SimulationError(f"step {t}: {exc}") from exc
        steps.append(TrajectoryStep(
            t=t, beta=PolicyParams(beta), gamma_hat=None,
            batch_mean_pi=float(pi.mean())))
        if float(np.linalg.norm(beta)) > guard:
            diverged = True
            break
    return Trajectory(env=env.name, method="rrm", steps=tuple(steps),
                      diverged=diverged)


def run_naive(env, cfg: RunConfig) -> Trajectory:
    """Fit once without manipulation, deploy unchanged.

    The fitting batch reports under the zero-slope initial policy, so
    covariates are exogenous there; the fitted policy is then held fixed
    for all T steps against strategic agents.
    """
    env = get_environment(env)
    _check_cfg(env, cfg)
    free = np.array(env.beta_init, dtype=float)
    if free[1] != 0.0:
        raise ConfigError("the manipulation-free policy must have zero slope")
    theta0 = env.sample_types(cfg.n, substream(cfg.seed, STREAM_FIT))
    try:
        x0, w0, y0, _ = env.simulate(free, theta0)
        beta = env.project(env.fit_response(x0, w0, y0))
    except SimulationError as exc:
        raise SimulationError(f"naive fit: {exc}") from exc
    steps = []
    for t in range(1, cfg.t_max + 1):
        theta = env.sample_types(cfg.n, substream(cfg.seed, STREAM_TYPES, t))
        try:
            _, _, _, pi = env.simulate(beta, theta)
        except SimulationError as exc:
            raise SimulationError(f"step {t}: {exc}") from exc
        steps.append(TrajectoryStep(
            t=t, beta=PolicyParams(beta), gamma_hat=None,
            batch_mean_pi=float(pi.mean())))
    return Trajectory(env=env.name, method="naive", steps=tuple(steps))


def solve_full_info(env, cfg: RunConfig, evaluator: Optional[Evaluator] = None,
                    box: Optional[tuple] = None,
                    points: Optional[tuple] = None) -> FullInfoSolution:
    """Maximize the Monte-Carlo objective by refined grid search.

    All evaluations share one set of cfg.eval_reps type draws (common
    random numbers). A coarse grid over the admissible box is followed by
    two refinement rounds, each shrinking the search window by a factor
    of five around the incumbent. An incumbent still on the boundary of
    the base box after refinement raises "expand search region".
    """
    env = get_environment(env)
    _check_cfg(env, cfg)
    if evaluator is None:
        evaluator = Evaluator(env, cfg.eval_reps,
                              substream(cfg.seed, STREAM_EVAL))
    box = tuple(box if box is not None else env.grid_box)
    points = tuple(points if points is not None else env.grid_points)
    if len(box) != env.k or len(points) != env.k:
        raise ConfigError("box and points need one entry per coordinate")

    trace = []
    spans = [hi - lo for lo, hi in box]
    window = box
    incumbent = None
    best = -np.inf
    for _ in range(3):  # coarse pass plus two refinements
        axes = [np.linspace(lo, hi, p) for (lo, hi), p in zip(window, points)]
        grids = np.meshgrid(*axes, indexing="ij")
        candidates = np.stack([g.ravel() for g in grids], axis=1)
        for beta in candidates:
            mean, _ = evaluator.pi_hat(beta)
            trace.append((PolicyParams(beta), mean))
            if mean > best:
                best, incumbent = mean, beta
        spans = [s / 5.0 for s in spans]
        window = tuple(
            (max(base_lo, b - s / 2.0), min(base_hi, b + s / 2.0))
            for (base_lo, base_hi), b, s in zip(box, incumbent, spans))
    on_edge = any(b == lo or b == hi for (lo, hi), b in zip(box, incumbent))
    if on_edge:
        raise SimulationError(
            "full-information incumbent sits on the search boundary; "
            "expand search region")
    return FullInfoSolution(beta_star=PolicyParams(incumbent),
                            pi_star=float(best), grid_trace=tuple(trace))


def run_full_info(env, cfg: RunConfig,
                  evaluator: Optional[Evaluator] = None) -> Trajectory:
    """Deploy the full-information optimum for all T steps."""
    env = get_environment(env)
    _check_cfg(env, cfg)
    solution = solve_full_info(env, cfg, evaluator)
    beta = solution.beta_star.values
    steps = []
    for t in range(1, cfg.t_max + 1):
        theta = env.sample_types(cfg.n, substream(cfg.seed, STREAM_TYPES, t))
        _, _, _, pi = env.simulate(beta, theta)
        steps.append(TrajectoryStep(
            t=t, beta=solution.beta_star, gamma_hat=None,
            batch_mean_pi=float(pi.mean())))
    return Trajectory(env=env.name, method="full_info", steps=tuple(steps))


_RUNNERS = {
    "iterative": run_iterative,
    "rrm": run_rrm,
    "naive": run_naive,
    "full_info": run_full_info,
}


def run_method(env, cfg: RunConfig) -> Trajectory:
    """Dispatch to the procedure named by cfg.method."""
    validate_config(cfg)
    return _RUNNERS[cfg.method](env, cfg)
