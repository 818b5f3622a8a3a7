"""CSV serialization and run summaries.

Numbers are written with 17 significant digits so the CSV round-trips double
precision exactly; column order is part of the contract and must not change.
Files are written atomically (temp file + rename) so a failed run never
leaves partial output behind.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .engagement import EngagementResult, sigma_diagnostics
from .games import GameResult

ENGAGEMENT_HEADER = (
    "t,R,Vr,z,w,sigma_dot_a,sigma_dot_b,aMr,aMn,aTr,aTn,beta1,beta2,beta3,beta4"
)
GAME_HEADER = "t,x1,x2,alpha1,alpha2"
MASTER_HEADER = "t,lambda,x_ode,rel_err"
SWEEP_HEADER = "value,miss,payoff,capture_time"
COMPARE_HEADER = "law,miss,payoff,capture_time"


def fmt(value: float) -> str:
    """17-significant-digit decimal form; exact float64 round trip."""
    return f"{value:.17g}"


def write_rows_atomic(path, header: str, rows: Iterable[str]) -> None:
    """Write header + rows to path via a temp file in the same directory."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=p.name + ".", dir=str(p.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header + "\n")
            for row in rows:
                fh.write(row + "\n")
        os.replace(tmp_name, p)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def engagement_rows(result: EngagementResult) -> List[str]:
    tr = result.trajectory
    sdot_a, sdot_b = sigma_diagnostics(tr)
    rows = []
    for i in range(tr.n_nodes):
        vals = (
            tr.t[i],
            tr.states[i, 0], tr.states[i, 1], tr.states[i, 2], tr.states[i, 3],
            sdot_a[i], sdot_b[i],
            *tr.controls[i],
        )
        rows.append(",".join(fmt(float(v)) for v in vals))
    return rows


def game_rows(result: GameResult) -> List[str]:
    tr = result.trajectory
    scalar = tr.states.shape[1] == 1
    rows = []
    for i in range(tr.n_nodes):
        x1 = tr.states[i, 0]
        x2 = 0.0 if scalar else tr.states[i, 1]
        vals = (tr.t[i], x1, x2, tr.controls[i, 0], tr.controls[i, 1])
        rows.append(",".join(fmt(float(v)) for v in vals))
    return rows


def master_rows(t: np.ndarray, lam: np.ndarray, x_ode: np.ndarray,
                rel_err: np.ndarray) -> List[str]:
    return [
        ",".join(fmt(float(v)) for v in (t[i], lam[i], x_ode[i], rel_err[i]))
        for i in range(t.shape[0])
    ]


def capture_text(capture_time: Optional[float]) -> str:
    return "none" if capture_time is None else fmt(capture_time)


@dataclass
class RunSummary:
    """The summary triple printed by every run-style command."""

    miss: float
    payoff: float
    capture_time: Optional[float]
    extras: Sequence[str] = ()

    def lines(self) -> List[str]:
        out = [
            f"miss={fmt(self.miss)}",
            f"payoff={fmt(self.payoff)}",
            f"capture_time={capture_text(self.capture_time)}",
        ]
        out.extend(self.extras)
        return out


def summarize_engagement(result: EngagementResult) -> RunSummary:
    final = result.trajectory.states[-1]
    extras = (
        f"R_T={fmt(float(final[0]))}",
        f"Vr_T={fmt(float(final[1]))}",
        f"payoff_rz={fmt(result.payoff_rz)}",
    )
    return RunSummary(result.miss, result.payoff, result.capture_time, extras)


def summarize_game(result: GameResult) -> RunSummary:
    final = result.trajectory.states[-1]
    x1 = float(final[0])
    x2 = float(final[1]) if final.size > 1 else 0.0
    extras = (f"x1_T={fmt(x1)}", f"x2_T={fmt(x2)}")
    return RunSummary(math.sqrt(result.payoff), result.payoff, None, extras)
