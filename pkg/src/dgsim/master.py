"""Linear master equation for a nonlinear drift and the trajectory estimate
extracted from its root condition.

For a drift b(x, t), the master equation at parameter lambda is the affine ODE

    dU/dt = J[b](lambda, t) U + b(lambda, t),     U(t0) = x0 - lambda,

with J the Jacobian of b in x evaluated at lambda. Scanning lambda for the
root U(t, lambda(t)) = 0 at each grid node produces an estimate lambda(t) of
the nonlinear trajectory; for affine drifts the estimate is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from .numerics import (
    RootConfig,
    TimeGrid,
    Trajectory,
    _root_bracketed,
    integrate,
    jacobian_fd,
)


class NoRootError(RuntimeError):
    """Bracket expansion found no sign change for the root condition."""

    def __init__(self, node_index: int, t: float, center: float, half_width: float):
        self.node_index = node_index
        self.t = t
        super().__init__(
            f"no root bracket at node {node_index} (t={t}): searched "
            f"{center} +/- {half_width}"
        )


@dataclass
class DriftModel:
    """Right-hand side b(x, t) with dimension, parameters, and optional
    analytic Jacobian.

    eval maps (state vector, t) to the drift vector. analytic_jacobian, when
    present, is used instead of finite differences. eval1/jacobian1 are
    optional plain-float forms for dim-1 drifts; the lambda-path solver uses
    them to avoid per-call array overhead and falls back to the array forms
    otherwise.
    """

    dim: int
    eval: Callable[[np.ndarray, float], np.ndarray]
    params: Dict[str, float] = field(default_factory=dict)
    analytic_jacobian: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    eval1: Optional[Callable[[float, float], float]] = None
    jacobian1: Optional[Callable[[float, float], float]] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")


@dataclass
class MasterSolution:
    """Solution U(t, lambda) of the master equation on a grid."""

    lam: np.ndarray
    grid: TimeGrid
    trajectory: Trajectory

    @property
    def u(self) -> np.ndarray:
        return self.trajectory.states


@dataclass
class LambdaPath:
    """Per-node roots lambda(t_k) of U(t_k, lambda) = 0.

    lam holds NaN from the first node where bracketing failed onward;
    failed_at records that node index and failure carries the recorded
    NoRootError (both None when the whole path resolved).
    """

    t: np.ndarray
    lam: np.ndarray
    failed_at: Optional[int] = None
    failure: Optional[NoRootError] = None

    @property
    def ok(self) -> bool:
        return self.failed_at is None


def master_rhs(drift: DriftModel, lam) -> Callable[[np.ndarray, float], np.ndarray]:
    """Affine right-hand side J[b](lambda, t) U + b(lambda, t)."""
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if lam.size != drift.dim:
        raise ValueError(f"lambda has size {lam.size}, drift dim is {drift.dim}")

    if drift.analytic_jacobian is not None:
        jac = drift.analytic_jacobian
    else:
        jac = lambda x, t: jacobian_fd(drift.eval, x, t)

    def rhs(u: np.ndarray, t: float) -> np.ndarray:
        J = np.asarray(jac(lam, t), dtype=float).reshape(drift.dim, drift.dim)
        b = np.asarray(drift.eval(lam, t), dtype=float).reshape(-1)
        return J @ np.asarray(u, dtype=float) + b

    return rhs


def solve_master(drift: DriftModel, lam, x0, grid: TimeGrid) -> MasterSolution:
    """Integrate the master equation from U(t0) = x0 - lambda over the grid."""
    lam = np.asarray(lam, dtype=float).reshape(-1)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.size != drift.dim:
        raise ValueError(f"x0 has size {x0.size}, drift dim is {drift.dim}")
    u0 = x0 - lam
    traj = integrate(master_rhs(drift, lam), u0, grid)
    return MasterSolution(lam=lam, grid=grid, trajectory=traj)


def _scalar_funcs(drift: DriftModel):
    """Plain-float (drift, jacobian) callables for a dim-1 drift."""
    fe = drift.eval1
    if fe is None:
        ev = drift.eval

        def fe(lam: float, t: float) -> float:
            return float(np.asarray(ev(np.array([lam]), t)).reshape(-1)[0])

    fj = drift.jacobian1
    if fj is None:
        if drift.analytic_jacobian is not None:
            aj = drift.analytic_jacobian

            def fj(lam: float, t: float) -> float:
                return float(np.asarray(aj(np.array([lam]), t)).reshape(-1)[0])

        else:
            fe_local = fe

            def fj(lam: float, t: float) -> float:
                h = max(1e-6, 1e-6 * abs(lam))
                return (fe_local(lam + h, t) - fe_local(lam - h, t)) / (2.0 * h)

    return fe, fj


def _u_terminal(fe, fj, lam: float, x0: float, t0: float, dt: float, n: int) -> float:
    """U(t0 + n*dt, lambda) for a scalar drift, by fixed-step RK4.

    The Jacobian and drift depend on t only (lambda is fixed inside one
    evaluation), so the two midpoint stages share one evaluation of each.
    """
    u = x0 - lam
    for i in range(n):
        t = t0 + i * dt
        tm = t + 0.5 * dt
        te = t + dt
        a1 = fj(lam, t)
        c1 = fe(lam, t)
        am = fj(lam, tm)
        cm = fe(lam, tm)
        a4 = fj(lam, te)
        c4 = fe(lam, te)
        k1 = a1 * u + c1
        k2 = am * (u + 0.5 * dt * k1) + cm
        k3 = am * (u + 0.5 * dt * k2) + cm
        k4 = a4 * (u + dt * k3) + c4
        u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return u


def _expand_bracket(f, center: float, abs_tol: float, expand_factor: float,
                    max_expansions: int):
    """Grow a bracket geometrically around center until f changes sign.

    Returns (lo, hi, flo, fhi) or None. When the center value already splits
    the sign, the tighter half-bracket is returned.
    """
    fc = f(center)
    if abs(fc) <= abs_tol:
        return (center, center, fc, fc)
    half = max(0.1, 0.1 * abs(center))
    for _ in range(max_expansions + 1):
        lo = center - half
        hi = center + half
        flo = f(lo)
        fhi = f(hi)
        if flo * fc <= 0.0:
            return (lo, center, flo, fc)
        if fc * fhi <= 0.0:
            return (center, hi, fc, fhi)
        if flo * fhi <= 0.0:
            return (lo, hi, flo, fhi)
        half *= expand_factor
    return None


def solve_lambda_path(
    drift: DriftModel,
    x0: float,
    grid: TimeGrid,
    cfg: Optional[RootConfig] = None,
    expand_factor: float = 2.0,
    max_expansions: int = 40,
) -> LambdaPath:
    """Root path lambda(t_k) with |U(t_k, lambda(t_k))| <= cfg.abs_tol.

    Scalar drifts only. Each node's search is warm-started from the previous
    node's root (lambda(t0) = x0 by the initial condition); the bracket is
    grown geometrically around the warm start, half-width starting at
    max(0.1, 0.1*|lambda_prev|). On bracketing failure the path is truncated
    and failed_at records the node.
    """
    if drift.dim != 1:
        raise ValueError("solve_lambda_path handles scalar drifts only")
    if cfg is None:
        cfg = RootConfig()
    fe, fj = _scalar_funcs(drift)
    x0 = float(np.asarray(x0, dtype=float).reshape(-1)[0])

    t_nodes = grid.times()
    lam = np.full(grid.n_nodes, np.nan)
    lam[0] = x0
    failed_at = None
    failure = None
    prev = x0
    for k in range(1, grid.n_nodes):
        def f(candidate: float, _k=k) -> float:
            return _u_terminal(fe, fj, candidate, x0, grid.t0, grid.dt, _k)

        bracket = _expand_bracket(f, prev, cfg.abs_tol, expand_factor, max_expansions)
        if bracket is None:
            failed_at = k
            final_half = max(0.1, 0.1 * abs(prev)) * expand_factor ** max_expansions
            failure = NoRootError(k, float(t_nodes[k]), prev, final_half)
            break
        lo, hi, flo, fhi = bracket
        if lo == hi:
            root = lo  # warm start already satisfied the residual
        else:
            root = _root_bracketed(f, lo, hi, flo, fhi, cfg, x0=prev)
        lam[k] = root
        prev = root
    return LambdaPath(t=t_nodes, lam=lam, failed_at=failed_at, failure=failure)


@dataclass
class DissipativityReport:
    """Sampled Lyapunov-decay diagnostic for V(x) = ||x||^2.

    ratio = 2<x, b(x, t)>/||x||^2 is sampled over shells ||x|| >= radius;
    the drift is reported dissipative when the worst sampled ratio is
    negative, with decay_rate = -worst_ratio. Diagnostic only, not a gate.
    """

    dissipative: bool
    decay_rate: float
    worst_ratio: float
    worst_point: np.ndarray
    n_samples: int


def dissipativity_probe(
    drift: DriftModel,
    radius: float,
    t_samples=(0.0,),
    n_directions: int = 64,
    radial_factors=(1.0, 2.0, 4.0),
    seed: int = 0,
) -> DissipativityReport:
    """Probe V-dot = 2<x, b(x, t)> against -C*||x||^2 outside a ball."""
    if not (radius > 0.0):
        raise ValueError("radius must be positive")
    rng = np.random.default_rng(seed)
    if drift.dim == 1:
        dirs = np.array([[1.0], [-1.0]])
    else:
        dirs = rng.normal(size=(n_directions, drift.dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)

    worst = -math.inf
    worst_point = np.zeros(drift.dim)
    count = 0
    for fac in radial_factors:
        r = radius * fac
        for d in dirs:
            x = r * d
            for t in t_samples:
                b = np.asarray(drift.eval(x, float(t)), dtype=float).reshape(-1)
                ratio = 2.0 * float(x @ b) / float(x @ x)
                count += 1
                if ratio > worst:
                    worst = ratio
                    worst_point = x.copy()
    return DissipativityReport(
        dissipative=worst < 0.0,
        decay_rate=-worst if worst < 0.0 else 0.0,
        worst_ratio=worst,
        worst_point=worst_point,
        n_samples=count,
    )
