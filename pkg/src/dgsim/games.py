"""Benchmark closed-loop systems.

Three models: a forced scalar cubic ODE (the trajectory-estimate cross-check
target), a two-player nonlinear game under perfect measurements with the
exp-augmented bang-bang law, and the same game family under a jammed rate
measurement with the sawtooth-horizon law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .control import CuttingSpec, law_example2, law_theta, sign0, switching_surface
from .master import DriftModel
from .numerics import TimeGrid, Trajectory, _check_finite, rk4_step
from .uncertainty import NoiseChannel, Waveform, eval_waveform, gaussian_increments

PAYOFF_KINDS = ("x1^2+x2^2", "R^2", "R^2+z^2")


@dataclass(frozen=True)
class GameState:
    x1: float
    x2: float


@dataclass(frozen=True)
class CubicDrift:
    """Forced cubic scalar drift -a*x^3 - b*x^2 - c*x - sigma*t^n - chi*t^m*sin(Omega*t^k)."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    sigma: float = 0.0
    chi: float = 0.0
    m: float = 1.0
    n: float = 1.0
    omega: float = 1.0
    k: float = 1.0

    def eval(self, x: float, t: float) -> float:
        return (
            -self.a * x * x * x
            - self.b * x * x
            - self.c * x
            - self.sigma * t**self.n
            - self.chi * t**self.m * math.sin(self.omega * t**self.k)
        )

    def jacobian(self, x: float, t: float) -> float:
        return -(3.0 * self.a * x * x + 2.0 * self.b * x + self.c)

    def as_drift_model(self) -> DriftModel:
        return DriftModel(
            dim=1,
            eval=lambda xv, t: np.array([self.eval(float(xv[0]), t)]),
            params={
                "a": self.a, "b": self.b, "c": self.c,
                "sigma": self.sigma, "chi": self.chi,
                "m": self.m, "n": self.n, "omega": self.omega, "k": self.k,
            },
            analytic_jacobian=lambda xv, t: np.array([[self.jacobian(float(xv[0]), t)]]),
            eval1=self.eval,
            jacobian1=self.jacobian,
        )


@dataclass(frozen=True)
class GameScenario:
    """Complete parameterization of one closed-loop game run."""

    t1: float
    dt: float
    x0: GameState = GameState(0.0, 0.0)
    kappa: float = 0.0            # cubic drag gain (perfect-measurement game)
    kappa1: float = 0.0           # cubic drag gain (jammed game)
    kappa2: float = 0.0           # quadratic gain (jammed game)
    rho1: float = 0.0
    rho2: float = 0.0
    opponent: Waveform = field(default_factory=Waveform)
    opponent_mode: str = "waveform"   # waveform | feedback
    beta: Waveform = field(default_factory=Waveform)
    tau: float = 0.0
    horizon_mode: str = "native"      # native | theta | fixed
    cubic: Optional[CubicDrift] = None
    noise: NoiseChannel = field(default_factory=NoiseChannel)

    def __post_init__(self):
        # zero-span horizons are allowed (single-node run), matching the
        # degenerate estimate-path contract
        if self.t1 < 0.0:
            raise ValueError("t1 must be >= 0")
        if self.rho1 < 0.0 or self.rho2 < 0.0:
            raise ValueError("control bounds rho1, rho2 must be >= 0")
        if self.opponent_mode not in ("waveform", "feedback"):
            raise ValueError(f"unknown opponent_mode {self.opponent_mode!r}")
        if self.horizon_mode not in ("native", "theta", "fixed"):
            raise ValueError(f"unknown horizon_mode {self.horizon_mode!r}")


@dataclass
class GameResult:
    trajectory: Trajectory
    payoff: float
    payoff_kind: str


def rhs_example1(x: float, t: float, drift: CubicDrift) -> float:
    """Forced cubic scalar dynamics."""
    return drift.eval(x, t)


def _example2_controls(s: GameState, t: float, sc: GameScenario) -> Tuple[float, float]:
    if sc.horizon_mode == "theta":
        a1 = law_theta(1, s.x1, s.x2, t, CuttingSpec(sc.tau), sc.rho1)
    elif sc.horizon_mode == "fixed":
        h = max(sc.t1 - t, 0.0)
        a1 = -sc.rho1 * sign0(switching_surface(s.x1, s.x2, h))
    else:
        a1 = law_example2(1, s.x1, s.x2, t, sc.t1, sc.kappa, sc.rho1)
    if sc.opponent_mode == "feedback":
        a2 = law_example2(2, s.x1, s.x2, t, sc.t1, sc.kappa, sc.rho2)
    else:
        a2 = eval_waveform(sc.opponent, t)
    return a1, a2


def rhs_example2(s: GameState, t: float, sc: GameScenario) -> Tuple[float, float]:
    """Perfect-measurement game: dx1 = x2, dx2 = -kappa*x2^3 + a1 + a2."""
    a1, a2 = _example2_controls(s, t, sc)
    return (s.x2, -sc.kappa * s.x2 * s.x2 * s.x2 + a1 + a2)


def _example3_controls(s: GameState, t: float, sc: GameScenario) -> Tuple[float, float]:
    b = eval_waveform(sc.beta, t)
    if sc.horizon_mode == "fixed":
        h = max(sc.t1 - t, 0.0)
        a1 = -sc.rho1 * sign0(switching_surface(s.x1, s.x2 + b, h))
        a2 = sc.rho2 * sign0(switching_surface(s.x1, s.x2, h))
    else:
        spec = CuttingSpec(sc.tau)
        a1 = law_theta(1, s.x1, s.x2, t, spec, sc.rho1, beta=b)
        a2 = law_theta(2, s.x1, s.x2, t, spec, sc.rho2)
    return a1, a2


def rhs_example3(s: GameState, t: float, sc: GameScenario) -> Tuple[float, float]:
    """Jammed-rate game: dx2 = -kappa1*x2^3 + kappa2*x2^2 + a1 + a2.

    Player 1's surface sees the measured rate x2 + beta(t); player 2's sees
    the true rate. The kappa2 quadratic term makes these dynamics non-odd.
    """
    a1, a2 = _example3_controls(s, t, sc)
    x2 = s.x2
    return (x2, -sc.kappa1 * x2 * x2 * x2 + sc.kappa2 * x2 * x2 + a1 + a2)


def terminal_payoff(traj: Trajectory, kind: str) -> float:
    """Terminal payoff evaluated on the final trajectory row.

    Column conventions: game trajectories are [x1, x2]; engagement
    trajectories are [R, Vr, z, w, ...]. Scalar trajectories use their single
    column for the x1^2+x2^2 form.
    """
    if kind not in PAYOFF_KINDS:
        raise ValueError(f"unknown payoff kind {kind!r}")
    if traj.states.shape[0] == 0:
        raise ValueError("empty trajectory")
    last = traj.states[-1]
    if kind == "x1^2+x2^2":
        if last.size == 1:
            return float(last[0] * last[0])
        return float(last[0] * last[0] + last[1] * last[1])
    if kind == "R^2":
        return float(last[0] * last[0])
    return float(last[0] * last[0] + last[2] * last[2])


def _run_example1(sc: GameScenario) -> GameResult:
    if sc.cubic is None:
        raise ValueError("example1 run requires a CubicDrift")
    grid = TimeGrid(0.0, sc.t1, sc.dt)
    drift = sc.cubic
    t_nodes = grid.times()
    states = np.empty((grid.n_nodes, 1))
    x = float(sc.x0.x1)
    noise = gaussian_increments(sc.noise, np.arange(grid.n_steps), sc.dt) \
        if sc.noise.epsilon > 0.0 else None

    def rhs(v: np.ndarray, t: float) -> np.ndarray:
        return np.array([drift.eval(float(v[0]), t)])

    vec = np.array([x])
    for k in range(grid.n_nodes):
        _check_finite(vec, k)
        states[k, 0] = vec[0]
        if k < grid.n_steps:
            vec = rk4_step(rhs, vec, float(t_nodes[k]), grid.dt)
            if noise is not None:
                vec = vec + np.array([noise[k]])
    traj = Trajectory(
        t=t_nodes,
        states=states,
        controls=np.zeros((grid.n_nodes, 2)),
        control_names=("alpha1", "alpha2"),
    )
    return GameResult(traj, terminal_payoff(traj, "x1^2+x2^2"), "x1^2+x2^2")


def _run_two_player(sc: GameScenario, which: str) -> GameResult:
    grid = TimeGrid(0.0, sc.t1, sc.dt)
    t_nodes = grid.times()
    rhs_pair = rhs_example2 if which == "example2" else rhs_example3
    controls_at = _example2_controls if which == "example2" else _example3_controls

    def rhs(v: np.ndarray, t: float) -> np.ndarray:
        d = rhs_pair(GameState(float(v[0]), float(v[1])), t, sc)
        return np.array(d)

    states = np.empty((grid.n_nodes, 2))
    controls = np.empty((grid.n_nodes, 2))
    vec = np.array([sc.x0.x1, sc.x0.x2], dtype=float)
    noise = gaussian_increments(sc.noise, np.arange(grid.n_steps), sc.dt) \
        if sc.noise.epsilon > 0.0 else None
    for k in range(grid.n_nodes):
        _check_finite(vec, k)
        states[k] = vec
        controls[k] = controls_at(GameState(float(vec[0]), float(vec[1])),
                                  float(t_nodes[k]), sc)
        if k < grid.n_steps:
            vec = rk4_step(rhs, vec, float(t_nodes[k]), grid.dt)
            if noise is not None:
                vec = vec + np.array([0.0, noise[k]])
    traj = Trajectory(
        t=t_nodes,
        states=states,
        controls=controls,
        control_names=("alpha1", "alpha2"),
    )
    return GameResult(traj, terminal_payoff(traj, "x1^2+x2^2"), "x1^2+x2^2")


def run_game(sc: GameScenario, which: str) -> GameResult:
    """Integrate the selected model over [0, t1], recording both controls."""
    if which == "example1":
        return _run_example1(sc)
    if which in ("example2", "example3"):
        return _run_two_player(sc, which)
    raise ValueError(f"unknown game model {which!r}")
