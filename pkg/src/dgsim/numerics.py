"""Fixed-step ODE integration, finite-difference Jacobians, and safeguarded
scalar root finding.

Everything here is deterministic: the integrator is the classical fourth-order
Runge-Kutta scheme with a fixed step, so identical inputs produce bit-identical
trajectories. Discontinuous right-hand sides (sign-type feedback laws) are
handled by keeping the step small, not by event location.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

RhsFunc = Callable[[np.ndarray, float], np.ndarray]

# relative slack allowed between n_steps*dt and the grid span
_GRID_RTOL = 1e-9


class NonFiniteError(RuntimeError):
    """A NaN or infinity showed up in an integrated state."""

    def __init__(self, step_index: int, component: int, value: float):
        self.step_index = step_index
        self.component = component
        self.value = value
        super().__init__(
            f"non-finite state at step {step_index}, component {component}: {value!r}"
        )


class BracketError(ValueError):
    """The supplied root bracket does not straddle a sign change."""


class ConvergenceError(RuntimeError):
    """Root iteration ran out of iterations; carries the best iterate seen."""

    def __init__(self, best_x: float, best_f: float, iterations: int):
        self.best_x = best_x
        self.best_f = best_f
        self.iterations = iterations
        super().__init__(
            f"no root after {iterations} iterations; "
            f"best x={best_x!r} with f(x)={best_f!r}"
        )


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid t0, t0+dt, ..., t1 with n_steps = (t1-t0)/dt steps.

    dt must tile the span to within one part in 1e9. A zero-span grid
    (t1 == t0) is allowed and has a single node.
    """

    t0: float
    t1: float
    dt: float
    n_steps: int = field(init=False)

    def __post_init__(self):
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t1 < self.t0:
            raise ValueError(f"t1={self.t1} must not precede t0={self.t0}")
        span = self.t1 - self.t0
        n = int(round(span / self.dt))
        if span > 0.0 and (n == 0 or abs(n * self.dt - span) > _GRID_RTOL * max(span, 1.0)):
            raise ValueError(
                f"dt={self.dt} does not tile [{self.t0}, {self.t1}] "
                f"(n={n}, residual={n * self.dt - span!r})"
            )
        object.__setattr__(self, "n_steps", n)

    @property
    def n_nodes(self) -> int:
        return self.n_steps + 1

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_nodes)


@dataclass(frozen=True)
class RootConfig:
    """Scalar root-finder settings. bracket is (lo, hi) with lo < hi."""

    abs_tol: float = 1e-9
    max_iter: int = 100
    bracket: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if not (self.abs_tol > 0.0):
            raise ValueError("abs_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.bracket is not None and not (self.bracket[0] < self.bracket[1]):
            raise ValueError(f"bracket lo must be below hi, got {self.bracket}")


@dataclass
class Trajectory:
    """Uniform grid plus per-node state rows and (optionally) control rows."""

    t: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    control_names: Tuple[str, ...] = ()

    @property
    def n_nodes(self) -> int:
        return self.t.shape[0]


def _check_finite(x: np.ndarray, step_index: int) -> None:
    if np.isfinite(x).all():
        return
    bad = int(np.argmax(~np.isfinite(x)))
    raise NonFiniteError(step_index, bad, float(x[bad]))


def rk4_step(rhs: RhsFunc, x: np.ndarray, t: float, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step from (x, t) to t + dt."""
    k1 = rhs(x, t)
    k2 = rhs(x + (0.5 * dt) * k1, t + 0.5 * dt)
    k3 = rhs(x + (0.5 * dt) * k2, t + 0.5 * dt)
    k4 = rhs(x + dt * k3, t + dt)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(rhs: RhsFunc, x0, grid: TimeGrid) -> Trajectory:
    """Integrate rhs over the grid; row 0 is x0 exactly.

    Raises NonFiniteError (with step index and component) as soon as the
    state stops being finite.
    """
    x = np.array(x0, dtype=float).reshape(-1)
    t_nodes = grid.times()
    out = np.empty((grid.n_nodes, x.size))
    # numeric blowups surface as NonFiniteError at the next node check,
    # so transient overflow warnings inside a step are just noise
    with np.errstate(all="ignore"):
        for k in range(grid.n_nodes):
            _check_finite(x, k)
            out[k] = x
            if k < grid.n_steps:
                x = np.asarray(rk4_step(rhs, x, float(t_nodes[k]), grid.dt),
                               dtype=float)
    return Trajectory(t=t_nodes, states=out, controls=np.empty((grid.n_nodes, 0)))


def jacobian_fd(f: RhsFunc, x, t: float, h: Optional[float] = None) -> np.ndarray:
    """Central-difference Jacobian J[i, j] = d f_i / d x_j at (x, t).

    The default step is max(1e-6, 1e-6*|x_j|) per component; pass h to force
    a uniform step. Exact (up to roundoff) on affine and quadratic maps.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    n = x.size
    J = np.empty((n, n))
    for j in range(n):
        hj = h if h is not None else max(1e-6, 1e-6 * abs(x[j]))
        xp = x.copy()
        xp[j] += hj
        xm = x.copy()
        xm[j] -= hj
        fp = np.asarray(f(xp, t), dtype=float).reshape(-1)
        fm = np.asarray(f(xm, t), dtype=float).reshape(-1)
        with np.errstate(invalid="ignore", over="ignore"):
            J[:, j] = (fp - fm) / (2.0 * hj)
        if not np.isfinite(J[:, j]).all():
            i = int(np.argmax(~np.isfinite(J[:, j])))
            raise ValueError(f"non-finite Jacobian entry at ({i}, {j})")
    return J


def _root_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    flo: float,
    fhi: float,
    cfg: RootConfig,
    x0: Optional[float] = None,
) -> float:
    """Bisection refined by safeguarded Newton steps on a known bracket.

    Newton trials use a one-sided difference quotient; any trial that leaves
    the current bracket (or fails to be finite) is replaced by a bisection
    step. Returns the first iterate whose residual is within abs_tol.
    """
    if abs(flo) <= cfg.abs_tol:
        return lo
    if abs(fhi) <= cfg.abs_tol:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo!r}, {fhi!r}")

    if x0 is not None and lo < x0 < hi:
        x = float(x0)
    else:
        x = 0.5 * (lo + hi)
    best_x, best_f = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)

    for _ in range(cfg.max_iter):
        fx = f(x)
        if abs(fx) <= cfg.abs_tol:
            return x
        if abs(fx) < abs(best_f):
            best_x, best_f = x, fx
        if (fx > 0.0) == (flo > 0.0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx

        delta = 1e-7 * max(1.0, abs(x))
        slope = (f(x + delta) - fx) / delta
        x_new = x - fx / slope if slope != 0.0 else math.inf
        if not math.isfinite(x_new) or not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        x = x_new

    raise ConvergenceError(best_x, best_f, cfg.max_iter)


def root_scalar(f: Callable[[float], float], cfg: RootConfig) -> float:
    """Find x with |f(x)| <= cfg.abs_tol inside cfg.bracket.

    Raises BracketError when f does not change sign over the bracket and
    ConvergenceError (carrying the best iterate) when max_iter is exhausted.
    """
    if cfg.bracket is None:
        raise ValueError("root_scalar requires cfg.bracket")
    lo, hi = float(cfg.bracket[0]), float(cfg.bracket[1])
    return _root_bracketed(f, lo, hi, f(lo), f(hi), cfg)
