"""Feedback-law building blocks.

Sign with a fixed tie-break, the sawtooth time-to-go ("cutting") function,
switching surfaces, the two-player bang-bang laws, and the composite missile
guidance accelerations (bang-bang plus cubic rate compensation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union


def sign0(x: float) -> float:
    """Sign function with sign0(0) = 0.

    The zero tie-break avoids injecting a +/-rho bias exactly on a switching
    surface; with a discretized integrator the case still occurs at t = 0.
    """
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


@dataclass(frozen=True)
class CuttingSpec:
    """Period of the sawtooth time-to-go signal."""

    tau: float

    def __post_init__(self):
        if not (self.tau > 0.0):
            raise ValueError("tau must be positive")


def theta_tau(t: float, spec: CuttingSpec) -> float:
    """Sawtooth time-to-go signal with period tau.

    Within each period the value falls from just under tau to 0. The phase is
    eta = t - (ceil(t/tau) - 1)*tau; the bare recurrence without the tau
    factor would be dimensionally inconsistent and unbounded, so the scaled
    form is used. Exact multiples of tau (including t = 0, where ceil gives
    0 and eta = tau) evaluate to 0 for determinism.
    """
    tau = spec.tau
    eta = t - (math.ceil(t / tau) - 1.0) * tau
    theta = tau - eta
    # roundoff at period boundaries can push theta a hair outside [0, tau);
    # pin both corners to the boundary value 0
    if not (0.0 <= theta < tau):
        return 0.0
    return theta


@dataclass(frozen=True)
class Bounds:
    """Control magnitude bound: admissible values are [-rho, rho]."""

    rho: float

    def __post_init__(self):
        if self.rho < 0.0:
            raise ValueError("rho must be >= 0")


HorizonSpec = Union[CuttingSpec, float]


def horizon_factor(horizon: HorizonSpec, t: float) -> float:
    """Look-ahead factor multiplying the rate term of a switching surface.

    A CuttingSpec gives the periodic sawtooth; a float T gives the fixed
    time-to-go max(T - t, 0).
    """
    if isinstance(horizon, CuttingSpec):
        return theta_tau(t, horizon)
    return max(horizon - t, 0.0)


@dataclass(frozen=True)
class LawParams:
    """Parameters of the composite guidance law (two channels).

    horizon selects the look-ahead: a CuttingSpec for the sawtooth form or a
    float end time for the fixed-horizon form. kappa1/kappa2 weight the cubic
    rate-compensation terms, which are added unsaturated on top of the
    bang-bang term.
    """

    rho_r: Bounds
    rho_n: Bounds
    horizon: HorizonSpec
    kappa1: float = 0.0
    kappa2: float = 0.0

    def __post_init__(self):
        if self.kappa1 < 0.0 or self.kappa2 < 0.0:
            raise ValueError("cubic gains kappa1, kappa2 must be >= 0")


def switching_surface(x1: float, x2: float, h: float) -> float:
    """Zero-effort-miss style surface s = x1 + h*x2."""
    return x1 + h * x2


def law_example2(
    player: int,
    x1: float,
    x2: float,
    t: float,
    horizon_t: float,
    kappa: float,
    rho: float,
) -> float:
    """Two-player bang-bang law with the exp-augmented horizon factor.

    The surface is x1 + [(T-t) + exp(-3*kappa*x2^2*(T-t))]*x2; player 1
    returns -rho*sign(s), player 2 returns +rho*sign(s).
    """
    rem = horizon_t - t
    h = rem + math.exp(-3.0 * kappa * (x2 * x2) * rem)
    s = switching_surface(x1, x2, h)
    if player == 1:
        return -rho * sign0(s)
    if player == 2:
        return rho * sign0(s)
    raise ValueError(f"player must be 1 or 2, got {player}")


def law_theta(
    player: int,
    x1: float,
    x2: float,
    t: float,
    spec: CuttingSpec,
    rho: float,
    beta: float = 0.0,
) -> float:
    """Sawtooth-horizon bang-bang law; player 1 sees x2 + beta, player 2 sees x2."""
    th = theta_tau(t, spec)
    if player == 1:
        return -rho * sign0(switching_surface(x1, x2 + beta, th))
    if player == 2:
        return rho * sign0(switching_surface(x1, x2, th))
    raise ValueError(f"player must be 1 or 2, got {player}")


def guidance_accels(
    meas: Tuple[float, float, float, float], t: float, p: LawParams
) -> Tuple[float, float]:
    """Missile acceleration commands from measured (R, Vr, z, w).

    Radial channel: -rho_r*sign(R + h*Vr) - kappa1*Vr^3.
    Normal channel: -rho_n*sign(z + h*w)  - kappa2*w^3.
    The cubic terms are evaluated on the measured rates and are not clipped
    into [-rho, rho]; with kappa = 0 the law is pure bang-bang.
    """
    r_m, vr_m, z_m, w_m = meas
    h = horizon_factor(p.horizon, t)
    a_r = -p.rho_r.rho * sign0(switching_surface(r_m, vr_m, h)) - p.kappa1 * (
        vr_m * vr_m * vr_m
    )
    a_n = -p.rho_n.rho * sign0(switching_surface(z_m, w_m, h)) - p.kappa2 * (
        w_m * w_m * w_m
    )
    return a_r, a_n
