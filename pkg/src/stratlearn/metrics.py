"""Monte-Carlo objective evaluation, regret statistics, and run summaries.

All comparisons between policies reuse one set of evaluation draws
(common random numbers), so differences in the estimated objective
reflect the policies and not the sampling: evaluating the same policy
twice gives exactly the same number, and the full-information
trajectory's average regret is exactly zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    ConfigError,
    PolicyParams,
    RunConfig,
    STREAM_EVAL,
    Trajectory,
    as_vector,
    substream,
)
from .env import get_environment

__all__ = [
    "Evaluator",
    "mc_objective",
    "attach_eval",
    "avg_regret",
    "weighted_regret",
    "RunSummary",
    "summarize",
    "OSCILLATION_THRESHOLD",
]

# A trajectory whose step-to-step movement never falls below this over
# its final tenth is flagged as oscillating rather than converging.
OSCILLATION_THRESHOLD = 0.05


class Evaluator:
    """Fixed-draw Monte-Carlo evaluation of the population objective.

    One set of `reps` agent types is drawn at construction and reused for
    every policy, with results cached per policy.
    """

    def __init__(self, env, reps: int, rng: np.random.Generator):
        self.env = get_environment(env)
        self.reps = int(reps)
        if self.reps < 2:
            raise ConfigError("eval_reps must be at least 2")
        self.theta = self.env.sample_types(self.reps, rng)
        self._cache: dict = {}

    def pi_values(self, beta) -> np.ndarray:
        """Per-agent objective values at a fixed (unperturbed) policy."""
        _, _, _, pi = self.env.simulate(as_vector(beta), self.theta)
        return pi

    def pi_hat(self, beta) -> tuple:
        """Mean objective and its Monte-Carlo standard error."""
        b = as_vector(beta)
        key = b.tobytes()
        hit = self._cache.get(key)
        if hit is None:
            pi = self.pi_values(b)
            hit = (float(pi.mean()),
                   float(pi.std(ddof=1) / np.sqrt(self.reps)))
            self._cache[key] = hit
        return hit

    def diff(self, beta_a, beta_b) -> tuple:
        """Paired difference Pi_hat(a) - Pi_hat(b) and its standard error.

        The per-agent differences share draws, so the standard error is
        the one appropriate for a paired comparison.
        """
        d = self.pi_values(beta_a) - self.pi_values(beta_b)
        return float(d.mean()), float(d.std(ddof=1) / np.sqrt(self.reps))


def mc_objective(env, beta, reps: int, rng: np.random.Generator) -> tuple:
    """Simulate `reps` agents under a fixed policy.

    Returns (mean, se) of the per-agent objective. Identical rng states
    give identical results, so back-to-back calls with the same seed
    differ by exactly zero.
    """
    return Evaluator(env, reps, rng).pi_hat(beta)


def attach_eval(traj: Trajectory, evaluator: Evaluator) -> Trajectory:
    """Fill every step's eval_pi with the evaluator's objective."""
    steps = tuple(s.with_eval(evaluator.pi_hat(s.beta)[0]) for s in traj.steps)
    return Trajectory(env=traj.env, method=traj.method, steps=steps,
                      diverged=traj.diverged)


def _evaluator_for(env, traj_or_reps, reps, rng, evaluator):
    if evaluator is not None:
        return evaluator
    if env is None or reps is None or rng is None:
        raise ConfigError("either an evaluator or (env, reps, rng) is required")
    return Evaluator(env, reps, rng)


def avg_regret(traj: Trajectory, beta_star, env=None, reps: Optional[int] = None,
               rng: Optional[np.random.Generator] = None,
               evaluator: Optional[Evaluator] = None) -> float:
    """Mean over steps of Pi_hat(beta^t) - Pi_hat(beta_star).

    Negative values are shortfalls relative to the reference policy. All
    evaluations share one set of draws; a trajectory constant at
    beta_star has average regret exactly 0.0.
    """
    if len(traj) == 0:
        raise ConfigError("trajectory has no steps")
    ev = _evaluator_for(env, traj, reps, rng, evaluator)
    ref, _ = ev.pi_hat(beta_star)
    means = np.array([ev.pi_hat(s.beta)[0] for s in traj.steps])
    return float(np.mean(means - ref))


def weighted_regret(traj: Trajectory, beta_ref, env=None,
                    reps: Optional[int] = None,
                    rng: Optional[np.random.Generator] = None,
                    evaluator: Optional[Evaluator] = None) -> float:
    """The time-weighted statistic (1/T) sum_t t * (Pi_hat(beta_ref) -
    Pi_hat(beta^t)).

    Later steps carry linearly more weight, so the value depends on step
    order by construction. A trajectory constant at beta_ref gives 0.
    """
    if len(traj) == 0:
        raise ConfigError("trajectory has no steps")
    ev = _evaluator_for(env, traj, reps, rng, evaluator)
    ref, _ = ev.pi_hat(beta_ref)
    ts = np.array([s.t for s in traj.steps], dtype=float)
    means = np.array([ev.pi_hat(s.beta)[0] for s in traj.steps])
    return float(np.mean(ts * (ref - means)))


def _oscillating(traj: Trajectory) -> bool:
    """True when step-to-step movement never settles near the end."""
    betas = traj.betas()
    if betas.shape[0] < 2:
        return False
    deltas = np.linalg.norm(np.diff(betas, axis=0), axis=1)
    tail = deltas[-max(1, deltas.size // 10):]
    return bool(tail.min() >= OSCILLATION_THRESHOLD)


@dataclass(frozen=True)
class RunSummary:
    """Headline statistics of one evaluated trajectory.

    avg_regret is the nonnegative mean shortfall Pi_hat(beta*) -
    Pi_hat(beta^t); signed per-step comparisons live in avg_regret()
    above. terminal_error is the squared distance |beta* - beta^T|^2.
    avg_mse is reported for the classification environment only and
    equals -avg_objective.
    """

    method: str
    avg_objective: float
    avg_regret: float
    weighted_regret: float
    terminal_beta: PolicyParams
    terminal_error: float
    avg_mse: Optional[float] = None
    oscillating: bool = False
    diverged: bool = False

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "avg_objective": self.avg_objective,
            "avg_regret": self.avg_regret,
            "weighted_regret": self.weighted_regret,
            "terminal_beta": self.terminal_beta.to_list(),
            "terminal_error": self.terminal_error,
            "avg_mse": self.avg_mse,
            "oscillating": self.oscillating,
            "diverged": self.diverged,
        }


def summarize(trajs, env, cfg: RunConfig, beta_star=None,
              evaluator: Optional[Evaluator] = None,
              pi_star: Optional[float] = None) -> list:
    """One RunSummary per trajectory, all against one reference optimum.

    When beta_star is not supplied it is computed by the
    full-information solver with the same evaluator, so every comparison
    is paired. Mixing environments raises.
    """
    env = get_environment(env)
    trajs = list(trajs)
    for traj in trajs:
        if traj.env != env.name:
            raise ConfigError(
                f"trajectory environment {traj.env!r} does not match {env.name!r}")
    if evaluator is None:
        evaluator = Evaluator(env, cfg.eval_reps, substream(cfg.seed, STREAM_EVAL))
    if beta_star is None:
        from .learn import solve_full_info

        solution = solve_full_info(env, cfg, evaluator)
        beta_star, pi_star = solution.beta_star, solution.pi_star
    star = as_vector(beta_star)
    if pi_star is None:
        pi_star = evaluator.pi_hat(star)[0]

    summaries = []
    for traj in trajs:
        evaluated = attach_eval(traj, evaluator)
        means = np.array([s.eval_pi for s in evaluated.steps])
        avg_obj = float(means.mean())
        terminal = evaluated.terminal_beta
        # Per-step paired differences keep a trajectory pinned at beta_star
        # at exactly zero regret (identical draws, identical policy).
        summaries.append(RunSummary(
            method=traj.method,
            avg_objective=avg_obj,
            avg_regret=float(np.mean(float(pi_star) - means)),
            weighted_regret=weighted_regret(traj, star, evaluator=evaluator),
            terminal_beta=terminal,
            terminal_error=float(np.sum((terminal.values - star) ** 2)),
            avg_mse=-avg_obj if env.name == "classification" else None,
            oscillating=_oscillating(traj),
            diverged=traj.diverged,
        ))
    return summaries
