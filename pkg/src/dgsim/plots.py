"""Figure rendering for run reports.

Each renderer writes PNG files next to the delimited output and returns the
paths it created. The CSV stays the machine contract; these are the
human-readable view of the same columns.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .engagement import EngagementResult, sigma_diagnostics  # noqa: E402
from .games import GameResult  # noqa: E402

_DPI = 120


def _save(fig, outdir: Path, name: str, created: List[str]) -> None:
    path = outdir / name
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    created.append(str(path))


def _line_fig(t, series, labels, ylabel, title):
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for y, label in zip(series, labels):
        ax.plot(t, y, lw=1.0, label=label)
    ax.set_xlabel("t [s]")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if len(series) > 1:
        ax.legend(loc="best", fontsize=8)
    return fig


def render_engagement(result: EngagementResult, outdir, stem: str = "engagement"
                      ) -> List[str]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tr = result.trajectory
    t = tr.t
    created: List[str] = []

    _save(_line_fig(t, [tr.states[:, 0]], ["R"], "R [m]", "Target-to-missile range"),
          outdir, f"{stem}_range.png", created)
    _save(_line_fig(t, [tr.states[:, 1]], ["Vr"], "Vr [m/s]", "Range rate"),
          outdir, f"{stem}_range_rate.png", created)
    _save(_line_fig(t, [tr.states[:, 2], tr.states[:, 3]], ["z", "w"],
                    "z [m], w [m/s]", "Normal displacement and rate"),
          outdir, f"{stem}_normal.png", created)
    _save(_line_fig(t, [tr.controls[:, 0], tr.controls[:, 1]], ["aMr", "aMn"],
                    "a [m/s^2]", "Missile accelerations"),
          outdir, f"{stem}_missile_accel.png", created)
    _save(_line_fig(t, [tr.controls[:, 2], tr.controls[:, 3]], ["aTr", "aTn"],
                    "a [m/s^2]", "Target accelerations"),
          outdir, f"{stem}_target_accel.png", created)
    sdot_a, sdot_b = sigma_diagnostics(tr)
    _save(_line_fig(t, [sdot_a, sdot_b], ["w/R", "z/R"], "LOS rate [rad/s]",
                    "Line-of-sight rate diagnostics"),
          outdir, f"{stem}_los_rate.png", created)
    betas = tr.controls[:, 4:8]
    if np.any(betas != 0.0):
        _save(_line_fig(t, [betas[:, i] for i in range(4)],
                        ["beta1", "beta2", "beta3", "beta4"], "beta",
                        "Measurement error channels"),
              outdir, f"{stem}_jamming.png", created)
    return created


def render_game(result: GameResult, outdir, stem: str = "game") -> List[str]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tr = result.trajectory
    created: List[str] = []
    if tr.states.shape[1] > 1:
        _save(_line_fig(tr.t, [tr.states[:, 0], tr.states[:, 1]], ["x1", "x2"],
                        "state", "Closed-loop state"),
              outdir, f"{stem}_states.png", created)
        _save(_line_fig(tr.t, [tr.controls[:, 0], tr.controls[:, 1]],
                        ["alpha1", "alpha2"], "control", "Player controls"),
              outdir, f"{stem}_controls.png", created)
    else:
        _save(_line_fig(tr.t, [tr.states[:, 0]], ["x"], "x", "Trajectory"),
              outdir, f"{stem}_states.png", created)
    return created


def render_master(t, lam, x_ode, rel_err, outdir, stem: str = "master") -> List[str]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    created: List[str] = []
    _save(_line_fig(t, [lam, x_ode], ["lambda(t)", "x(t)"], "value",
                    "Trajectory estimate vs direct solution"),
          outdir, f"{stem}_lambda_vs_ode.png", created)
    _save(_line_fig(t, [rel_err], ["rel_err"], "relative error",
                    "Estimate error (relative to peak |x|)"),
          outdir, f"{stem}_rel_err.png", created)
    return created


def render_sweep(values: Sequence[float], misses: Sequence[float], key: str,
                 outdir, stem: str = "sweep") -> List[str]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    created: List[str] = []
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(values, misses, "o-", lw=1.0)
    ax.set_xlabel(key)
    ax.set_ylabel("miss [m]")
    ax.set_title(f"Miss distance vs {key}")
    ax.grid(True, alpha=0.3)
    _save(fig, outdir, f"{stem}_miss.png", created)
    return created


def render_compare(t_theta, r_theta, t_fixed, r_fixed, outdir,
                   stem: str = "compare", ylabel: str = "R [m]") -> List[str]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    created: List[str] = []
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(t_theta, r_theta, lw=1.0, label="sawtooth horizon")
    ax.plot(t_fixed, r_fixed, lw=1.0, label="fixed horizon")
    ax.set_xlabel("t [s]")
    ax.set_ylabel(ylabel)
    ax.set_title("Guidance law comparison")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    _save(fig, outdir, f"{stem}_overlay.png", created)
    return created
