"""Differential-game guidance simulation toolkit.

Builds the linear master equation of a nonlinear drift and extracts feedback
trajectory estimates from its root condition; simulates two-player bang-bang
games and planar homing-missile intercepts under perfect and jammed
measurements. Deterministic fixed-step integration throughout.
"""

from .control import (
    Bounds,
    CuttingSpec,
    LawParams,
    guidance_accels,
    law_example2,
    law_theta,
    sign0,
    switching_surface,
    theta_tau,
)
from .engagement import (
    EngagementParams,
    EngagementResult,
    EngagementState,
    GeometryError,
    measure,
    rhs_imperfect,
    rhs_perfect,
    run_engagement,
    sigma_diagnostics,
)
from .games import (
    CubicDrift,
    GameResult,
    GameScenario,
    GameState,
    rhs_example1,
    rhs_example2,
    rhs_example3,
    run_game,
    terminal_payoff,
)
from .master import (
    DissipativityReport,
    DriftModel,
    LambdaPath,
    MasterSolution,
    NoRootError,
    dissipativity_probe,
    master_rhs,
    solve_lambda_path,
    solve_master,
)
from .numerics import (
    BracketError,
    ConvergenceError,
    NonFiniteError,
    RootConfig,
    TimeGrid,
    Trajectory,
    integrate,
    jacobian_fd,
    rk4_step,
    root_scalar,
)
from .scenario import Scenario, ScenarioError, load_scenario
from .uncertainty import (
    NoiseChannel,
    Waveform,
    eval_waveform,
    gaussian_increment,
    gaussian_increments,
)

__version__ = "0.1.0"

__all__ = [
    "Bounds", "CuttingSpec", "LawParams", "guidance_accels", "law_example2",
    "law_theta", "sign0", "switching_surface", "theta_tau",
    "EngagementParams", "EngagementResult", "EngagementState", "GeometryError",
    "measure", "rhs_imperfect", "rhs_perfect", "run_engagement",
    "sigma_diagnostics",
    "CubicDrift", "GameResult", "GameScenario", "GameState", "rhs_example1",
    "rhs_example2", "rhs_example3", "run_game", "terminal_payoff",
    "DissipativityReport", "DriftModel", "LambdaPath", "MasterSolution",
    "NoRootError", "dissipativity_probe", "master_rhs", "solve_lambda_path",
    "solve_master",
    "BracketError", "ConvergenceError", "NonFiniteError", "RootConfig",
    "TimeGrid", "Trajectory", "integrate", "jacobian_fd", "rk4_step",
    "root_scalar",
    "Scenario", "ScenarioError", "load_scenario",
    "NoiseChannel", "Waveform", "eval_waveform", "gaussian_increment",
    "gaussian_increments",
    "__version__",
]
