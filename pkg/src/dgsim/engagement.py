"""Planar missile-target intercept dynamics in polar form.

State is (R, Vr, z, w, sigma): range, range rate, displacement normal to the
initial line of sight, its rate, and the integrated LOS angle (diagnostic).
The closed loop couples these kinematics with the composite bang-bang
guidance law; measurements can be jammed by additive error waveforms on each
channel. A perfect-measurement run is exactly the imperfect run with all
error channels at zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .control import Bounds, CuttingSpec, LawParams, guidance_accels, sign0, \
    switching_surface, horizon_factor
from .numerics import TimeGrid, Trajectory, _check_finite, rk4_step
from .uncertainty import NoiseChannel, Waveform, eval_waveform, gaussian_increments

ENGAGEMENT_CONTROL_NAMES = (
    "aMr", "aMn", "aTr", "aTn", "beta1", "beta2", "beta3", "beta4",
)


class GeometryError(RuntimeError):
    """Regularized range R + eps_reg became non-positive during a run."""


@dataclass(frozen=True)
class EngagementState:
    R: float
    Vr: float
    z: float
    w: float
    sigma: float = 0.0


@dataclass(frozen=True)
class EngagementParams:
    """Complete parameterization of one intercept run.

    rho_M* are the missile's per-channel acceleration bounds, rho_T* the
    target's. In "waveform" target mode the target plays the open-loop
    target_r/target_n signals; "feedback" mode plays the adversarial
    bang-bang-plus-cubic law on the true state instead. beta1..beta4 are the
    additive measurement errors on (R, Vr, z, w); they only act in the
    imperfect-measurement mode.
    """

    x0: EngagementState
    t1: float
    dt: float
    tau: float = 1e-2
    kappa1: float = 0.0
    kappa2: float = 0.0
    rho_Mr: float = 20.0
    rho_Mn: float = 20.0
    rho_Tr: float = 0.0
    rho_Tn: float = 0.0
    eps_reg: float = 1e-6
    R_stop: float = 1e-3
    target_r: Waveform = field(default_factory=Waveform)
    target_n: Waveform = field(default_factory=Waveform)
    beta1: Waveform = field(default_factory=Waveform)
    beta2: Waveform = field(default_factory=Waveform)
    beta3: Waveform = field(default_factory=Waveform)
    beta4: Waveform = field(default_factory=Waveform)
    target_mode: str = "waveform"    # waveform | feedback
    horizon_mode: str = "theta"      # theta | fixed
    noise: NoiseChannel = field(default_factory=NoiseChannel)

    def __post_init__(self):
        if not (self.t1 > 0.0):
            raise ValueError("t1 must be positive")
        if not (self.eps_reg > 0.0):
            raise ValueError("eps_reg must be positive")
        if min(self.rho_Mr, self.rho_Mn, self.rho_Tr, self.rho_Tn) < 0.0:
            raise ValueError("acceleration bounds must be >= 0")
        if self.kappa1 < 0.0 or self.kappa2 < 0.0:
            raise ValueError("cubic gains must be >= 0")
        if self.R_stop < 0.0:
            raise ValueError("R_stop must be >= 0 (0 disables the capture stop)")
        if self.target_mode not in ("waveform", "feedback"):
            raise ValueError(f"unknown target_mode {self.target_mode!r}")
        if self.horizon_mode not in ("theta", "fixed"):
            raise ValueError(f"unknown horizon_mode {self.horizon_mode!r}")

    def law_params(self) -> LawParams:
        horizon = CuttingSpec(self.tau) if self.horizon_mode == "theta" else self.t1
        return LawParams(
            rho_r=Bounds(self.rho_Mr),
            rho_n=Bounds(self.rho_Mn),
            horizon=horizon,
            kappa1=self.kappa1,
            kappa2=self.kappa2,
        )


@dataclass
class EngagementResult:
    """Trajectory plus the terminal quantities of one run.

    miss is |R| at the final recorded node (the capture node when the run
    stopped early, the horizon node otherwise); payoff is R^2 there and
    payoff_rz the R^2 + z^2 variant. capture_time is the first node time with
    R <= R_stop, None if capture never happened.
    """

    trajectory: Trajectory
    miss: float
    payoff: float
    payoff_rz: float
    capture_time: Optional[float]


def measure(state: EngagementState, t: float, p: EngagementParams
            ) -> Tuple[float, float, float, float]:
    """Measured (R, Vr, z, w): the true state plus the beta error channels."""
    return (
        state.R + eval_waveform(p.beta1, t),
        state.Vr + eval_waveform(p.beta2, t),
        state.z + eval_waveform(p.beta3, t),
        state.w + eval_waveform(p.beta4, t),
    )


def _target_accels(state: EngagementState, t: float, p: EngagementParams,
                   law: LawParams) -> Tuple[float, float]:
    if p.target_mode == "waveform":
        return eval_waveform(p.target_r, t), eval_waveform(p.target_n, t)
    # adversarial feedback target with perfect information (its own error
    # channels default to zero); sign conventions mirror the missile law
    # with the opposite orientation, cubic terms as written
    h = horizon_factor(law.horizon, t)
    a_tr = p.rho_Tr * sign0(switching_surface(state.R, state.Vr, h)) \
        - p.kappa1 * (state.Vr * state.Vr * state.Vr)
    a_tn = p.rho_Tn * sign0(switching_surface(state.z, state.w, h)) \
        - p.kappa2 * (state.w * state.w * state.w)
    return a_tr, a_tn


def _rhs_core(state: EngagementState, t: float, p: EngagementParams,
              betas: Tuple[float, float, float, float], law: LawParams
              ) -> Tuple[float, float, float, float, float]:
    b1, b2, b3, b4 = betas
    meas = (state.R + b1, state.Vr + b2, state.z + b3, state.w + b4)
    a_mr, a_mn = guidance_accels(meas, t, law)
    a_tr, a_tn = _target_accels(state, t, p, law)
    den = state.R + p.eps_reg
    d_r = state.Vr
    d_v = (state.w * state.w) / den + a_mr + a_tr
    d_z = state.w
    d_w = -(state.Vr * state.w) / den + a_mn + a_tn
    d_sigma = state.w / den
    return (d_r, d_v, d_z, d_w, d_sigma)


def rhs_perfect(state: EngagementState, t: float, p: EngagementParams
                ) -> Tuple[float, float, float, float, float]:
    """Closed-loop derivative with guidance driven by the true state."""
    return _rhs_core(state, t, p, (0.0, 0.0, 0.0, 0.0), p.law_params())


def _eval_betas(t: float, p: EngagementParams) -> Tuple[float, float, float, float]:
    return (
        eval_waveform(p.beta1, t),
        eval_waveform(p.beta2, t),
        eval_waveform(p.beta3, t),
        eval_waveform(p.beta4, t),
    )


def rhs_imperfect(state: EngagementState, t: float, p: EngagementParams
                  ) -> Tuple[float, float, float, float, float]:
    """Closed-loop derivative with guidance driven by jammed measurements."""
    return _rhs_core(state, t, p, _eval_betas(t, p), p.law_params())


def _node_controls(state: EngagementState, t: float, p: EngagementParams,
                   imperfect: bool, law: LawParams) -> Tuple[float, ...]:
    if imperfect:
        b1, b2, b3, b4 = _eval_betas(t, p)
    else:
        b1 = b2 = b3 = b4 = 0.0
    meas = (state.R + b1, state.Vr + b2, state.z + b3, state.w + b4)
    a_mr, a_mn = guidance_accels(meas, t, law)
    a_tr, a_tn = _target_accels(state, t, p, law)
    return (a_mr, a_mn, a_tr, a_tn, b1, b2, b3, b4)


def run_engagement(p: EngagementParams, mode: str) -> EngagementResult:
    """Integrate the selected closed loop over [0, t1].

    Records the state, all four accelerations, and the beta channel values
    at every node. The run stops early at the first node with R <= R_stop
    (when R_stop > 0); if instead R + eps_reg becomes non-positive the run
    aborts with GeometryError.
    """
    if mode not in ("perfect", "imperfect"):
        raise ValueError(f"mode must be 'perfect' or 'imperfect', got {mode!r}")
    imperfect = mode == "imperfect"
    law = p.law_params()
    zero_betas = (0.0, 0.0, 0.0, 0.0)

    def rhs(v: np.ndarray, t: float) -> np.ndarray:
        st = EngagementState(float(v[0]), float(v[1]), float(v[2]), float(v[3]),
                             float(v[4]))
        betas = _eval_betas(t, p) if imperfect else zero_betas
        return np.array(_rhs_core(st, t, p, betas, law))

    grid = TimeGrid(0.0, p.t1, p.dt)
    t_nodes = grid.times()
    states = np.empty((grid.n_nodes, 5))
    controls = np.empty((grid.n_nodes, len(ENGAGEMENT_CONTROL_NAMES)))
    noise = None
    if p.noise.epsilon > 0.0:
        lanes = np.arange(2 * grid.n_steps)
        noise = gaussian_increments(p.noise, lanes, p.dt).reshape(-1, 2)

    vec = np.array([p.x0.R, p.x0.Vr, p.x0.z, p.x0.w, p.x0.sigma], dtype=float)
    captured_at = None
    n_recorded = 0
    with np.errstate(all="ignore"):
        for k in range(grid.n_nodes):
            _check_finite(vec, k)
            t = float(t_nodes[k])
            st = EngagementState(*[float(v) for v in vec])
            states[k] = vec
            controls[k] = _node_controls(st, t, p, imperfect, law)
            n_recorded = k + 1
            if p.R_stop > 0.0 and st.R <= p.R_stop:
                captured_at = k
                break
            if st.R + p.eps_reg <= 0.0:
                raise GeometryError(
                    f"R + eps_reg <= 0 at step {k} (t={t}): R={st.R!r}")
            if k < grid.n_steps:
                vec = rk4_step(rhs, vec, t, grid.dt)
                if noise is not None:
                    vec = vec + np.array([0.0, noise[k, 0], 0.0, noise[k, 1], 0.0])

    traj = Trajectory(
        t=t_nodes[:n_recorded],
        states=states[:n_recorded],
        controls=controls[:n_recorded],
        control_names=ENGAGEMENT_CONTROL_NAMES,
    )
    final = traj.states[-1]
    miss = abs(float(final[0]))
    payoff = float(final[0] * final[0])
    payoff_rz = float(final[0] * final[0] + final[2] * final[2])
    capture_time = float(traj.t[captured_at]) if captured_at is not None else None
    return EngagementResult(traj, miss, payoff, payoff_rz, capture_time)


def sigma_diagnostics(traj: Trajectory) -> Tuple[np.ndarray, np.ndarray]:
    """LOS-rate diagnostics per node: sigma_dot_a = w/R and sigma_dot_b = z/R.

    The two columns disagree on purpose: the first follows the rate
    substitution ż = R*sigma_dot, the second matches the reported initial
    values z(0)/R(0) of the benchmark runs. Both are emitted so either
    convention can be inspected.
    """
    R = traj.states[:, 0]
    z = traj.states[:, 2]
    w = traj.states[:, 3]
    return w / R, z / R
