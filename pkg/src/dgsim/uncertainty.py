"""Deterministic forcing/jamming waveforms and a counter-based noise channel.

Waveforms cover the maneuver and measurement-error signals used by the
benchmark scenarios (amp * sin(omega*t + phase)^p and friends). The noise
channel produces Gaussian increments as a pure function of (seed, step index),
so trajectories are reproducible and runs can be parallelized without any
shared generator state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

WAVEFORM_KINDS = ("zero", "constant", "pow_sine", "sine")

_M64 = (1 << 64) - 1
_TWO53 = 9007199254740992.0  # 2**53


@dataclass(frozen=True)
class Waveform:
    """Deterministic scalar signal of time.

    kind "zero" is identically 0, "constant" is amp, "sine" is
    amp*sin(omega*t + phase), and "pow_sine" is amp*sin(omega*t + phase)**p
    with integer p >= 1.
    """

    kind: str = "zero"
    amp: float = 0.0
    omega: float = 0.0
    p: int = 1
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in WAVEFORM_KINDS:
            raise ValueError(f"unknown waveform kind {self.kind!r}")
        if not math.isfinite(self.amp):
            raise ValueError("waveform amp must be finite")
        if self.kind == "pow_sine" and self.p < 1:
            raise ValueError("pow_sine exponent p must be >= 1")


ZERO_WAVEFORM = Waveform()


def eval_waveform(w: Waveform, t: float) -> float:
    if w.kind == "zero":
        return 0.0
    if w.kind == "constant":
        return w.amp
    s = math.sin(w.omega * t + w.phase)
    if w.kind == "sine":
        return w.amp * s
    # pow_sine: repeated multiplication keeps sign symmetry exact
    v = s
    for _ in range(w.p - 1):
        v *= s
    return w.amp * v


@dataclass(frozen=True)
class NoiseChannel:
    """Seeded Gaussian increment source; epsilon = 0 disables it exactly."""

    epsilon: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise ValueError("noise intensity epsilon must be >= 0")


def _mix64(z: int) -> int:
    """splitmix64 finalizer: a well-scrambled 64-bit hash."""
    z = (z + 0x9E3779B97F4A7C15) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return (z ^ (z >> 31)) & _M64


def _normal01(seed: int, index: int) -> float:
    """Standard normal as a pure function of (seed, index) via Box-Muller."""
    base = _mix64((seed & _M64) ^ _mix64(index & _M64))
    u1 = ((base >> 11) + 1) / _TWO53  # in (0, 1]
    u2 = (_mix64(base) >> 11) / _TWO53  # in [0, 1)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def gaussian_increment(ch: NoiseChannel, step_index: int, dt: float) -> float:
    """One N(0, epsilon*dt) increment for the given step index.

    Deterministic in (seed, step_index); exactly 0.0 when epsilon == 0.
    """
    if not (dt > 0.0):
        raise ValueError("dt must be positive")
    if ch.epsilon == 0.0:
        return 0.0
    return math.sqrt(ch.epsilon * dt) * _normal01(ch.seed, step_index)


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = (z + np.uint64(0x9E3779B97F4A7C15)).astype(np.uint64)
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)).astype(np.uint64)
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)).astype(np.uint64)
    return (z ^ (z >> np.uint64(31))).astype(np.uint64)


def gaussian_increments(ch: NoiseChannel, indices, dt: float) -> np.ndarray:
    """Vectorized gaussian_increment over an array of step indices."""
    if not (dt > 0.0):
        raise ValueError("dt must be positive")
    idx = np.asarray(indices, dtype=np.uint64)
    if ch.epsilon == 0.0:
        return np.zeros(idx.shape)
    with np.errstate(over="ignore"):
        base = _mix64_vec(np.uint64(ch.seed & _M64) ^ _mix64_vec(idx))
        u1 = ((base >> np.uint64(11)).astype(np.float64) + 1.0) / _TWO53
        u2 = (_mix64_vec(base) >> np.uint64(11)).astype(np.float64) / _TWO53
    z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
    return math.sqrt(ch.epsilon * dt) * z
