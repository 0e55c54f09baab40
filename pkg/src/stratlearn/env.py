"""Simulation environments: type sampling, strategic reports, treatment,
outcomes, per-agent objectives, and the known treatment effect.

Both built-in environments are stateless and pure: every exposed function
is deterministic given (beta, theta), so they may be called concurrently.
Only the seeded generators passed to ``sample_types`` carry state.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Union

import numpy as np

from .core import (
    ClassificationType,
    ConfigError,
    PolicyParams,
    PricingType,
    SimulationError,
    as_vector,
)

__all__ = [
    "Environment",
    "ClassificationEnv",
    "PricingEnv",
    "get_environment",
]


def _split_coords(beta) -> tuple:
    """Accept a (K,) policy or an (n, K) per-agent matrix; return coords."""
    if isinstance(beta, PolicyParams):
        beta = beta.values
    b = np.asarray(beta, dtype=float)
    if b.ndim == 1:
        return b[0], b[1]
    return b[:, 0], b[:, 1]


def _ols_line(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Least-squares intercept and slope of y on (1, x).

    Solves the 2x2 normal equations directly; raises SimulationError when
    the system is singular (no variation in x).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = float(x.size)
    sx, sxx = x.sum(), float(x @ x)
    a = np.array([[n, sx], [sx, sxx]])
    rhs = np.array([y.sum(), float(x @ y)])
    # Relative determinant check: exact zero variance gives det == 0.
    det = n * sxx - sx * sx
    if not np.isfinite(det) or abs(det) <= 1e-12 * max(n * sxx, sx * sx, 1.0):
        raise SimulationError(
            "policy refit failed: singular normal equations "
            "(reports have no variation)")
    return np.linalg.solve(a, rhs)


class Environment(ABC):
    """Interface shared by all simulated populations.

    Attributes
    ----------
    name : str
        Tag used in RunConfig ("classification" or "pricing").
    k : int
        Policy dimension.
    safe_region : str
        Human-readable description of the admissible policy region.
    beta_init : numpy.ndarray
        Default initial policy; its slope coordinate is zero, so the
        first batch of any run is manipulation-free.
    grid_box : tuple of (lo, hi)
        Search box per coordinate for the full-information solver.
    grid_points : tuple of int
        Grid resolution per coordinate for the same solver.
    """

    name: str
    k: int
    safe_region: str
    beta_init: np.ndarray
    grid_box: tuple
    grid_points: tuple

    @abstractmethod
    def sample_types(self, n: int, rng: np.random.Generator):
        """Draw n i.i.d. agent types from the population."""

    @abstractmethod
    def report(self, beta, theta) -> np.ndarray:
        """Covariates the agents choose to report against policy beta."""

    @abstractmethod
    def treat(self, x, beta) -> np.ndarray:
        """Treatment assigned to report x under policy beta (affine)."""

    @abstractmethod
    def outcome(self, w, theta) -> np.ndarray:
        """Realized outcome given treatment w and type theta."""

    @abstractmethod
    def objective(self, w, y) -> np.ndarray:
        """Per-agent planner objective; all methods maximize it."""

    @abstractmethod
    def ite(self, w, theta) -> np.ndarray:
        """The known individual treatment effect dY/dW."""

    @abstractmethod
    def fit_response(self, x, w, y) -> np.ndarray:
        """Solve the empirical first-order condition treating reports as
        exogenous; returns the refit policy vector."""

    @abstractmethod
    def project(self, beta, margin: float = 0.0) -> np.ndarray:
        """Clamp beta into the admissible region, shrunk by margin on
        every side so that beta +/- margin stays admissible."""

    def simulate(self, beta, theta) -> tuple:
        """Full report -> treat -> outcome -> objective chain.

        Returns (x, w, y, pi) arrays aligned with theta.
        """
        x = self.report(beta, theta)
        w = self.treat(x, beta)
        y = self.outcome(w, theta)
        return x, w, y, self.objective(w, y)


class ClassificationEnv(Environment):
    """Prediction population: the planner scores reported engagement.

    Types: Z ~ N(0,1), gamma ~ U(0, 1.5), R ~ N(0,1). Agents shift their
    report by gamma times the announced slope, X = Z + gamma*beta1. The
    outcome Y = Z + R never depends on the score, and the objective is
    the negated squared error -(Y - W)^2, so maximizing it minimizes MSE.
    """

    name = "classification"
    k = 2
    gamma_max = 1.5
    safe_region = ("coefficients kept in the box [-2, 2]^2; the objective "
                   "is quartic in the slope, so unbounded ascent can "
                   "overshoot and diverge")
    beta_init = np.array([0.0, 0.0])
    grid_box = ((-2.0, 2.0), (-2.0, 2.0))
    grid_points = (21, 21)

    def sample_types(self, n: int, rng: np.random.Generator) -> ClassificationType:
        if n < 1:
            raise ConfigError("n must be at least 1")
        # Draw order is part of the reproducibility contract: z, gamma, r.
        z = rng.standard_normal(n)
        gamma = rng.uniform(0.0, self.gamma_max, n)
        r = rng.standard_normal(n)
        return ClassificationType(z=z, gamma=gamma, r=r)

    def report(self, beta, theta) -> np.ndarray:
        _, b1 = _split_coords(beta)
        return theta.z + theta.gamma * b1

    def treat(self, x, beta) -> np.ndarray:
        b0, b1 = _split_coords(beta)
        return b0 + b1 * np.asarray(x, dtype=float)

    def outcome(self, w, theta) -> np.ndarray:
        return theta.z + theta.r

    def objective(self, w, y) -> np.ndarray:
        err = np.asarray(y, dtype=float) - np.asarray(w, dtype=float)
        return -(err * err)

    def ite(self, w, theta) -> np.ndarray:
        return np.zeros(np.broadcast(np.asarray(w), theta.z).shape)

    def fit_response(self, x, w, y) -> np.ndarray:
        # FOC of the squared error with zero treatment effect: OLS of y on x.
        return _ols_line(x, y)

    def project(self, beta, margin: float = 0.0) -> np.ndarray:
        b = np.array(as_vector(beta), dtype=float)
        for j, (lo, hi) in enumerate(self.grid_box):
            lo, hi = lo + margin, hi - margin
            if lo > hi:
                raise SimulationError(
                    f"perturbation scale {margin} leaves no admissible "
                    "policies")
            b[j] = min(max(b[j], lo), hi)
        return b


class PricingEnv(Environment):
    """Price-discrimination population with linear demand.

    Types: Z ~ U(10, 20), V ~ N(5 + Z, sd 2), gamma ~ U(0, 2.4). Against
    prices W = p0 + p1*X agents shade their report to
    X = (Z - gamma*p1*(V - p0)) / (1 - p1^2*gamma), demand is Y = V - W,
    and the objective is revenue W*Y. The report blows up where
    1 - p1^2*gamma reaches zero, so policies are kept inside
    |p1| <= (1 - delta_sing)/sqrt(3) and p0 in [0, 40].
    """

    name = "pricing"
    k = 2
    gamma_max = 2.4
    valuation_sd = 2.0
    delta_sing = 1e-3
    p1_bound = (1.0 - 1e-3) / np.sqrt(3.0)
    p0_range = (0.0, 40.0)
    safe_region = (f"p0 in [0, 40], |p1| <= {p1_bound:.6f} "
                   "(keeps 1 - p1^2*gamma away from zero)")
    beta_init = np.array([10.0, 0.0])
    grid_box = ((0.0, 40.0), (-p1_bound, p1_bound))
    grid_points = (41, 21)

    def sample_types(self, n: int, rng: np.random.Generator) -> PricingType:
        if n < 1:
            raise ConfigError("n must be at least 1")
        # Draw order is part of the reproducibility contract: z, v, gamma.
        z = rng.uniform(10.0, 20.0, n)
        v = 5.0 + z + self.valuation_sd * rng.standard_normal(n)
        gamma = rng.uniform(0.0, self.gamma_max, n)
        return PricingType(v=v, z=z, gamma=gamma)

    def report(self, beta, theta) -> np.ndarray:
        b0, b1 = _split_coords(beta)
        denom = 1.0 - b1 * b1 * theta.gamma
        bad = denom <= self.delta_sing
        if np.any(bad):
            i = int(np.argmax(bad))
            d = float(np.asarray(denom).reshape(-1)[i])
            raise SimulationError(
                f"pricing report is singular for agent {i}: "
                f"denominator 1 - p1^2*gamma = {d:.6g} <= {self.delta_sing}")
        return (theta.z - theta.gamma * b1 * (theta.v - b0)) / denom

    def treat(self, x, beta) -> np.ndarray:
        b0, b1 = _split_coords(beta)
        return b0 + b1 * np.asarray(x, dtype=float)

    def outcome(self, w, theta) -> np.ndarray:
        # Demand may go negative; no truncation, the optimum relies on it.
        return theta.v - np.asarray(w, dtype=float)

    def objective(self, w, y) -> np.ndarray:
        return np.asarray(w, dtype=float) * np.asarray(y, dtype=float)

    def ite(self, w, theta) -> np.ndarray:
        return -np.ones(np.broadcast(np.asarray(w), theta.v).shape)

    def fit_response(self, x, w, y) -> np.ndarray:
        # Revenue FOC with unit-negative treatment effect: reconstruct the
        # valuation V = Y + W, then solve sum((V - 2*(p0 + p1*x)) * (1, x)) = 0,
        # i.e. half the least-squares fit of V on (1, x).
        v = np.asarray(y, dtype=float) + np.asarray(w, dtype=float)
        return 0.5 * _ols_line(x, v)

    def project(self, beta, margin: float = 0.0) -> np.ndarray:
        b = np.array(as_vector(beta), dtype=float)
        lo0, hi0 = self.p0_range
        lo0, hi0 = lo0 + margin, hi0 - margin
        b1_hi = self.p1_bound - margin
        if lo0 > hi0 or b1_hi < 0:
            raise SimulationError(
                f"perturbation scale {margin} leaves no admissible policies")
        b[0] = min(max(b[0], lo0), hi0)
        b[1] = min(max(b[1], -b1_hi), b1_hi)
        return b


_ENVS = {"classification": ClassificationEnv, "pricing": PricingEnv}


def get_environment(name: Union[str, Environment]) -> Environment:
    """Look up a built-in environment by its config tag."""
    if isinstance(name, Environment):
        return name
    if name not in _ENVS:
        raise ConfigError(f"env must be one of {tuple(_ENVS)}, got {name!r}")
    return _ENVS[name]()
