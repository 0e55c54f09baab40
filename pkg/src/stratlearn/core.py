"""Shared domain types, run configuration, and deterministic RNG plumbing.

Every stochastic component in the library draws from substreams derived
from a single 64-bit seed, so two runs with equal configs are
bit-identical. Value types are immutable and safe to share across
threads.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

__all__ = [
    "ConfigError",
    "SimulationError",
    "STREAM_TYPES",
    "STREAM_SIGNS",
    "STREAM_EVAL",
    "STREAM_FIT",
    "substream",
    "PolicyParams",
    "ClassificationType",
    "PricingType",
    "PerturbationDesign",
    "BatchRecord",
    "TrajectoryStep",
    "Trajectory",
    "RunConfig",
    "validate_config",
    "config_to_text",
    "config_from_text",
    "ENV_NAMES",
    "METHOD_NAMES",
    "ENV_DIM",
]


class ConfigError(ValueError):
    """Invalid configuration or invalid construction of a domain type."""


class SimulationError(RuntimeError):
    """Runtime failure inside an environment, estimator, or solver."""


# Purpose tags for deterministic substreams. Batch draws at step t use
# (seed, purpose, t); purpose alone (step 0) is used for one-off streams.
STREAM_TYPES = 1   # agent type draws for a training batch
STREAM_SIGNS = 2   # Rademacher sign draws for the perturbation design
STREAM_EVAL = 3    # common-random-number evaluation draws
STREAM_FIT = 4     # the manipulation-free batch used by the naive fit

_MASK64 = (1 << 64) - 1


def substream(seed: int, purpose: int, step: int = 0) -> np.random.Generator:
    """Return the deterministic generator for (seed, purpose, step).

    Streams for distinct (purpose, step) pairs are statistically
    independent, and the mapping does not depend on how many steps a run
    has, so a shorter run is a prefix of a longer one with the same seed.
    """
    return np.random.default_rng(
        np.random.SeedSequence([int(seed) & _MASK64, int(purpose), int(step)])
    )


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def as_vector(beta: Union["PolicyParams", Sequence[float], np.ndarray]) -> np.ndarray:
    """Coerce a policy argument to a plain 1-D float array."""
    if isinstance(beta, PolicyParams):
        return beta.values
    b = np.asarray(beta, dtype=float)
    if b.ndim != 1:
        raise ConfigError("policy parameters must form a 1-D vector")
    return b


@dataclass(frozen=True)
class PolicyParams:
    """The K-vector of treatment-rule coefficients.

    Parameters
    ----------
    values : array_like of float, shape (K,)
        Policy coefficients, e.g. an intercept and a slope. K >= 1 and
        every entry must be finite.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        if v.size < 1:
            raise ConfigError("PolicyParams needs at least one coefficient")
        if not np.all(np.isfinite(v)):
            raise ConfigError("PolicyParams entries must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, i):
        return float(self.values[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolicyParams):
            return NotImplemented
        return bool(np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash(self.values.tobytes())

    def to_list(self) -> list:
        return [float(v) for v in self.values]


def _check_gamma(gamma: np.ndarray) -> np.ndarray:
    if np.any(np.asarray(gamma) < 0):
        raise ConfigError("gamma (manipulation ability) must be >= 0")
    return gamma


@dataclass(frozen=True)
class ClassificationType:
    """Agent types for the prediction environment: latent engagement z,
    manipulation ability gamma >= 0, and outcome noise r. Fields hold
    scalars or aligned arrays (one batch of agents)."""

    z: np.ndarray
    gamma: np.ndarray
    r: np.ndarray
    env_name = "classification"

    def __post_init__(self):
        object.__setattr__(self, "z", _readonly(self.z))
        object.__setattr__(self, "gamma", _readonly(_check_gamma(self.gamma)))
        object.__setattr__(self, "r", _readonly(self.r))

    def __len__(self) -> int:
        return int(np.size(self.z))

    def __getitem__(self, i) -> "ClassificationType":
        return ClassificationType(self.z[i], self.gamma[i], self.r[i])


@dataclass(frozen=True)
class PricingType:
    """Agent types for the pricing environment: valuation v, latent
    search metric z, and manipulation ability gamma >= 0. Fields hold
    scalars or aligned arrays (one batch of agents)."""

    v: np.ndarray
    z: np.ndarray
    gamma: np.ndarray
    env_name = "pricing"

    def __post_init__(self):
        object.__setattr__(self, "v", _readonly(self.v))
        object.__setattr__(self, "z", _readonly(self.z))
        object.__setattr__(self, "gamma", _readonly(_check_gamma(self.gamma)))

    def __len__(self) -> int:
        return int(np.size(self.v))

    def __getitem__(self, i) -> "PricingType":
        return PricingType(self.v[i], self.z[i], self.gamma[i])


@dataclass(frozen=True)
class PerturbationDesign:
    """The n x K signed-perturbation matrix and its scale.

    Every entry of ``q`` equals +h or -h exactly. When the schedule
    constants are recorded, h must equal c * n**(-alpha) for the n rows
    present.
    """

    q: np.ndarray
    h: float
    c: Optional[float] = None
    alpha: Optional[float] = None

    def __post_init__(self):
        q = _readonly(np.atleast_2d(self.q))
        h = float(self.h)
        if not (h > 0 and np.isfinite(h)):
            raise ConfigError("h must be a positive real")
        if not np.all(np.abs(q) == h):
            raise ConfigError("every perturbation entry must be +h or -h exactly")
        if self.c is not None and self.alpha is not None:
            implied = float(self.c) * q.shape[0] ** (-float(self.alpha))
            if not np.isclose(h, implied, rtol=1e-12, atol=0.0):
                raise ConfigError("h must equal c * n**(-alpha)")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return int(self.q.shape[0])

    @property
    def k(self) -> int:
        return int(self.q.shape[1])

    @property
    def eps(self) -> np.ndarray:
        """The underlying sign matrix q / h, entries in {-1, +1}."""
        return _readonly(np.sign(self.q))


@dataclass(frozen=True)
class BatchRecord:
    """Per-agent realizations for one experimental batch.

    Row i holds the signs eps, the announced per-agent policy beta_i =
    base_beta + h * eps_i, the report x, the treatment w, the outcome y,
    and the objective value pi = objective(w, y).
    """

    eps: np.ndarray
    beta_i: np.ndarray
    x: np.ndarray
    w: np.ndarray
    y: np.ndarray
    pi: np.ndarray
    base_beta: np.ndarray
    h: float

    def __post_init__(self):
        for name in ("eps", "beta_i", "x", "w", "y", "pi", "base_beta"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        if not np.all(np.abs(self.eps) == 1.0):
            raise ConfigError("eps entries must be -1 or +1")
        implied = self.base_beta[None, :] + float(self.h) * self.eps
        if not np.array_equal(self.beta_i, implied):
            raise ConfigError("beta_i rows must equal base_beta + h * eps exactly")

    @property
    def n(self) -> int:
        return int(self.pi.size)


@dataclass(frozen=True)
class TrajectoryStep:
    """One recorded step: the post-update policy, the gradient estimate
    (absent for refit-based methods), the realized batch mean objective,
    and the out-of-band Monte-Carlo objective (absent until attached)."""

    t: int
    beta: PolicyParams
    gamma_hat: Optional[np.ndarray]
    batch_mean_pi: float
    eval_pi: Optional[float] = None

    def __post_init__(self):
        if self.t < 1:
            raise ConfigError("step index t must be >= 1")
        if self.gamma_hat is not None:
            object.__setattr__(self, "gamma_hat", _readonly(self.gamma_hat))

    def with_eval(self, value: float) -> "TrajectoryStep":
        return TrajectoryStep(self.t, self.beta, self.gamma_hat,
                              self.batch_mean_pi, float(value))


_METHODS = ("iterative", "rrm", "naive", "full_info")
METHOD_NAMES = _METHODS
ENV_NAMES = ("classification", "pricing")
# Policy dimension of each built-in environment.
ENV_DIM = {"classification": 2, "pricing": 2}


@dataclass(frozen=True)
class Trajectory:
    """Ordered per-step history of one learning run."""

    env: str
    method: str
    steps: tuple
    diverged: bool = False

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ConfigError(f"method must be one of {_METHODS}")
        steps = tuple(self.steps)
        for i, s in enumerate(steps):
            if s.t != i + 1:
                raise ConfigError("step indices must run 1, 2, ... with no gaps")
        object.__setattr__(self, "steps", steps)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def terminal_beta(self) -> PolicyParams:
        return self.steps[-1].beta

    def betas(self) -> np.ndarray:
        """All per-step policies as a (T, K) array."""
        return np.array([s.beta.values for s in self.steps])

    def to_json(self) -> str:
        def step_dict(s: TrajectoryStep) -> dict:
            return {
                "t": s.t,
                "beta": s.beta.to_list(),
                "gamma_hat": None if s.gamma_hat is None
                else [float(v) for v in s.gamma_hat],
                "batch_mean_pi": float(s.batch_mean_pi),
                "eval_pi": None if s.eval_pi is None else float(s.eval_pi),
            }

        payload = {
            "env": self.env,
            "method": self.method,
            "diverged": self.diverged,
            "steps": [step_dict(s) for s in self.steps],
        }
        return json.dumps(payload, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "Trajectory":
        payload = json.loads(text)
        steps = tuple(
            TrajectoryStep(
                t=int(d["t"]),
                beta=PolicyParams(d["beta"]),
                gamma_hat=None if d["gamma_hat"] is None else np.array(d["gamma_hat"]),
                batch_mean_pi=float(d["batch_mean_pi"]),
                eval_pi=None if d["eval_pi"] is None else float(d["eval_pi"]),
            )
            for d in payload["steps"]
        )
        return Trajectory(env=payload["env"], method=payload["method"],
                          steps=steps, diverged=bool(payload["diverged"]))


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one learning run.

    Parameters
    ----------
    env : {"classification", "pricing"}
    method : {"iterative", "rrm", "naive", "full_info"}
    n : int
        Agents per batch; must be at least 2K for the gradient OLS.
    t_max : int
        Number of steps T >= 1.
    eta : float or sequence of float
        Step size, scalar or one entry per policy coordinate.
    c : float
        Perturbation scale constant, h = c * n**(-alpha).
    alpha : float
        Perturbation decay exponent, strictly inside (0, 0.5).
    seed : int
        64-bit seed; all randomness derives from it deterministically.
    demean : bool
        Center the gradient OLS (intercept-equivalent). False runs the
        plain no-intercept regression.
    eval_reps : int
        Monte-Carlo sample size for out-of-band objective evaluation.
    """

    env: str
    method: str
    n: int = 1000
    t_max: int = 1000
    eta: Union[float, tuple] = 0.5
    c: float = 0.5
    alpha: float = 0.25
    seed: int = 0
    demean: bool = True
    eval_reps: int = 100000

    def __post_init__(self):
        eta = self.eta
        if isinstance(eta, (list, tuple, np.ndarray)):
            eta = tuple(float(v) for v in np.asarray(eta).reshape(-1))
            if len(eta) == 1:
                eta = eta[0]
        else:
            eta = float(eta)
        object.__setattr__(self, "eta", eta)

    def eta_vector(self, k: int) -> np.ndarray:
        """Step size broadcast to one entry per policy coordinate."""
        if isinstance(self.eta, tuple):
            return np.asarray(self.eta, dtype=float)
        return np.full(k, float(self.eta))

    def replace(self, **kwargs) -> "RunConfig":
        return replace(self, **kwargs)


def validate_config(cfg: RunConfig) -> RunConfig:
    """Check every RunConfig invariant; return cfg unchanged if all hold.

    Raises
    ------
    ConfigError
        Naming the first violated field.
    """
    if cfg.env not in ENV_NAMES:
        raise ConfigError(f"env must be one of {ENV_NAMES}, got {cfg.env!r}")
    if cfg.method not in _METHODS:
        raise ConfigError(f"method must be one of {_METHODS}, got {cfg.method!r}")
    k = ENV_DIM[cfg.env]
    if int(cfg.n) < 2 * k:
        raise ConfigError("n too small for K")
    if int(cfg.t_max) < 1:
        raise ConfigError("t_max must be at least 1")
    eta = cfg.eta_vector(k)
    if eta.size not in (1, k):
        raise ConfigError(f"eta must be a scalar or a length-{k} vector")
    if not np.all(eta > 0) or not np.all(np.isfinite(eta)):
        raise ConfigError("eta must be positive")
    if not (float(cfg.c) > 0 and np.isfinite(cfg.c)):
        raise ConfigError("c must be positive")
    if not (0.0 < float(cfg.alpha) < 0.5):
        raise ConfigError("alpha must lie in (0, 0.5)")
    if int(cfg.seed) != cfg.seed:
        raise ConfigError("seed must be an integer")
    if not isinstance(cfg.demean, (bool, np.bool_)):
        raise ConfigError("demean must be a boolean")
    if int(cfg.eval_reps) < 2:
        raise ConfigError("eval_reps must be at least 2")
    return cfg


# -- flat key = value serialization ------------------------------------

_CONFIG_FIELDS = ("env", "method", "n", "t_max", "eta", "c", "alpha",
                  "seed", "demean", "eval_reps")


def config_to_text(cfg: RunConfig) -> str:
    """Render a RunConfig as one `key = value` line per field."""
    lines = []
    for name in _CONFIG_FIELDS:
        value = getattr(cfg, name)
        if name == "eta" and isinstance(value, tuple):
            text = ",".join(repr(v) for v in value)
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{name} = {text}")
    return "\n".join(lines) + "\n"


def config_from_text(text: str) -> RunConfig:
    """Parse the flat `key = value` format (UTF-8, `#` comments)."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected `key = value`, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_FIELDS:
            raise ConfigError(f"line {lineno}: unknown config field {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate config field {key!r}")
        values[key] = val
    for required in ("env", "method"):
        if required not in values:
            raise ConfigError(f"config is missing required field {required!r}")

    def parse(key: str, val: str):
        if key in ("env", "method"):
            return val
        if key in ("n", "t_max", "seed", "eval_reps"):
            try:
                return int(val)
            except ValueError:
                raise ConfigError(f"{key} must be an integer, got {val!r}") from None
        if key == "demean":
            if val.lower() in ("true", "1", "yes"):
                return True
            if val.lower() in ("false", "0", "no"):
                return False
            raise ConfigError(f"demean must be true or false, got {val!r}")
        if key == "eta":
            try:
                parts = tuple(float(p) for p in val.split(","))
            except ValueError:
                raise ConfigError(f"eta must be a number or comma-separated "
                                  f"numbers, got {val!r}") from None
            return parts if len(parts) > 1 else parts[0]
        try:
            return float(val)
        except ValueError:
            raise ConfigError(f"{key} must be a number, got {val!r}") from None

    kwargs = {k: parse(k, v) for k, v in values.items()}
    return RunConfig(**kwargs)
