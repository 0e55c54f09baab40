"""Perturbation design and the cross-sectional gradient estimator.

Announcing beta + h*eps_i with Rademacher signs eps_i identifies the
objective's gradient from one batch: the least-squares regression of the
per-agent objective on the signed perturbations converges to the true
gradient as the batch grows and h shrinks. A centered-difference oracle
with common random numbers is included as an independent reference.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import ConfigError, PerturbationDesign, SimulationError, as_vector

__all__ = [
    "GradientEstimate",
    "perturbation_scale",
    "design_perturbations",
    "estimate_gradient",
    "fd_oracle",
    "fd_oracle_with_se",
]


@dataclass(frozen=True)
class GradientEstimate:
    """A gradient estimate and the sample it came from."""

    gamma_hat: np.ndarray
    n_used: int
    h_used: float

    def __post_init__(self):
        g = np.array(self.gamma_hat, dtype=float).reshape(-1)
        if not np.all(np.isfinite(g)):
            raise SimulationError("gradient estimate has non-finite entries")
        if self.n_used < 2 * g.size:
            raise ConfigError("n too small for K")
        g.setflags(write=False)
        object.__setattr__(self, "gamma_hat", g)


def perturbation_scale(c: float, alpha: float, n: int) -> float:
    """The batch-size-indexed perturbation radius h = c * n**(-alpha)."""
    if not (float(c) > 0 and np.isfinite(c)):
        raise ConfigError("c must be positive")
    if not (0.0 < float(alpha) < 0.5):
        raise ConfigError("alpha must lie in (0, 0.5)")
    if int(n) < 1:
        raise ConfigError("n must be at least 1")
    return float(c) * float(n) ** (-float(alpha))


def design_perturbations(n: int, k: int, h: float,
                         rng: np.random.Generator,
                         c: Optional[float] = None,
                         alpha: Optional[float] = None) -> PerturbationDesign:
    """Draw the n x k matrix of i.i.d. +/-h perturbations.

    Entries are uniform on {-h, +h}, independent across agents and
    coordinates. Requires n >= 2k so the normal equations of the
    follow-up regression are well posed with high probability.
    """
    if int(k) < 1:
        raise ConfigError("k must be at least 1")
    if int(n) < 2 * int(k):
        raise ConfigError("n too small for K")
    if not (float(h) > 0 and np.isfinite(h)):
        raise ConfigError("h must be a positive real")
    signs = rng.integers(0, 2, size=(int(n), int(k))).astype(float) * 2.0 - 1.0
    return PerturbationDesign(q=float(h) * signs, h=float(h), c=c, alpha=alpha)


def estimate_gradient(design: PerturbationDesign, pi, demean: bool = True) -> GradientEstimate:
    """Regress per-agent objectives on the signed perturbations.

    Parameters
    ----------
    design : PerturbationDesign
        The +/-h matrix the batch was announced with.
    pi : array_like, shape (n,)
        Realized per-agent objective values, aligned with design rows.
    demean : bool
        When true, both the response and the design columns are centered
        by their sample means, which is exactly the regression with an
        intercept. Lower variance, same probability limit. When false,
        the plain no-intercept solve (Q'Q)^{-1} Q'pi is used.

    Returns
    -------
    GradientEstimate

    Raises
    ------
    SimulationError
        If the design is rank deficient; use a larger n or resample.
    """
    q = design.q
    pi = np.asarray(pi, dtype=float).reshape(-1)
    if pi.size != design.n:
        raise ConfigError("pi must have one entry per design row")
    if demean:
        q = q - q.mean(axis=0)
        pi = pi - pi.mean()
    gram = q.T @ q
    scale = float(design.n) * design.h ** 2
    try:
        np.linalg.cholesky(gram + 0.0)
        if np.linalg.det(gram) <= 1e-12 * scale ** design.k:
            raise np.linalg.LinAlgError
        gamma = np.linalg.solve(gram, q.T @ pi)
    except np.linalg.LinAlgError:
        raise SimulationError(
            "perturbation design is rank deficient; "
            "increase n or resample the signs") from None
    return GradientEstimate(gamma_hat=gamma, n_used=design.n, h_used=design.h)


def _pi_mean(env, beta: np.ndarray, theta) -> float:
    _, _, _, pi = env.simulate(beta, theta)
    return float(pi.mean())


def fd_oracle(env, beta, h_fd: float, reps: int, rng: np.random.Generator) -> np.ndarray:
    """Centered-difference gradient of the Monte-Carlo objective.

    One set of `reps` agent types is drawn once and reused on both sides
    of every coordinate difference (common random numbers), so the
    sampling noise largely cancels:

        grad_j = (Pi_hat(beta + h_fd e_j) - Pi_hat(beta - h_fd e_j)) / (2 h_fd)

    Environment domain errors (for example the pricing singularity)
    propagate unchanged.
    """
    grad, _ = fd_oracle_with_se(env, beta, h_fd, reps, rng)
    return grad


def fd_oracle_with_se(env, beta, h_fd: float, reps: int,
                      rng: np.random.Generator) -> tuple:
    """As fd_oracle, also returning the per-coordinate Monte-Carlo
    standard error of the difference quotient."""
    if not (float(h_fd) > 0 and np.isfinite(h_fd)):
        raise ConfigError("h_fd must be a positive real")
    if int(reps) < 2:
        raise ConfigError("reps must be at least 2")
    b = as_vector(beta)
    theta = env.sample_types(int(reps), rng)
    grad = np.empty(b.size)
    se = np.empty(b.size)
    for j in range(b.size):
        step = np.zeros_like(b)
        step[j] = float(h_fd)
        _, _, _, pi_hi = env.simulate(b + step, theta)
        _, _, _, pi_lo = env.simulate(b - step, theta)
        quotient = (pi_hi - pi_lo) / (2.0 * float(h_fd))
        grad[j] = float(quotient.mean())
        se[j] = float(quotient.std(ddof=1) / np.sqrt(quotient.size))
    return grad, se
