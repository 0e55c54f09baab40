"""Zeroth-order policy learning against strategically reporting agents.

A simulator and optimizer library: populations of agents best-respond to
an announced treatment rule, and the planner learns the rule's
coefficients from randomized per-agent perturbations, with refit-based
and manipulation-blind baselines plus a full-information Monte-Carlo
oracle for comparison.
"""
from .core import (
    BatchRecord,
    ClassificationType,
    ConfigError,
    PerturbationDesign,
    PolicyParams,
    PricingType,
    RunConfig,
    SimulationError,
    Trajectory,
    TrajectoryStep,
    config_from_text,
    config_to_text,
    substream,
    validate_config,
)
from .env import ClassificationEnv, Environment, PricingEnv, get_environment
from .gradest import (
    GradientEstimate,
    design_perturbations,
    estimate_gradient,
    fd_oracle,
    fd_oracle_with_se,
    perturbation_scale,
)
from .learn import (
    FullInfoSolution,
    run_batch,
    run_full_info,
    run_iterative,
    run_method,
    run_naive,
    run_rrm,
    solve_full_info,
)
from .metrics import (
    Evaluator,
    RunSummary,
    attach_eval,
    avg_regret,
    mc_objective,
    summarize,
    weighted_regret,
)

__version__ = "0.1.0"
