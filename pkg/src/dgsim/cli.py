"""Scenario-driven command line front end.

Subcommands: run (single closed-loop simulation), master (trajectory-estimate
cross-check for the scalar cubic model), sweep (one run per parameter value),
compare (sawtooth vs fixed-horizon guidance on the same scenario). Every
command writes CSV; --plots DIR additionally renders PNG figures.

Exit codes: 0 success, 2 input error, 3 runtime error. SIM_THREADS caps sweep
parallelism; output row order is always the input order regardless.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from . import scenarios as shipped
from .engagement import GeometryError, run_engagement
from .games import run_game
from .master import NoRootError, solve_lambda_path
from .numerics import (
    BracketError,
    ConvergenceError,
    NonFiniteError,
    RootConfig,
    TimeGrid,
    integrate,
)
from .output import (
    COMPARE_HEADER,
    ENGAGEMENT_HEADER,
    GAME_HEADER,
    MASTER_HEADER,
    SWEEP_HEADER,
    RunSummary,
    capture_text,
    engagement_rows,
    fmt,
    game_rows,
    master_rows,
    summarize_engagement,
    summarize_game,
    write_rows_atomic,
)
from .scenario import Scenario, ScenarioError, load_scenario, override_entry, \
    with_horizon_mode

_RUNTIME_ERRORS = (NonFiniteError, GeometryError, ConvergenceError, BracketError,
                   NoRootError)


def _resolve_scenario(arg: str) -> Scenario:
    path = Path(arg)
    if path.exists():
        return load_scenario(path)
    packaged = shipped.find(arg)
    if packaged is not None:
        return load_scenario(packaged)
    raise ScenarioError(f"scenario not found: {arg}")


def _execute(scn: Scenario) -> Tuple[object, RunSummary, str, List[str]]:
    """Run a scenario; returns (result, summary, csv header, csv rows)."""
    if scn.is_engagement:
        result = run_engagement(scn.eng, scn.engagement_mode)
        return result, summarize_engagement(result), ENGAGEMENT_HEADER, \
            engagement_rows(result)
    result = run_game(scn.game, scn.model)
    return result, summarize_game(result), GAME_HEADER, game_rows(result)


def cmd_run(args) -> int:
    scn = _resolve_scenario(args.scenario)
    result, summary, header, rows = _execute(scn)
    write_rows_atomic(args.out, header, rows)
    for line in summary.lines():
        print(line)
    if args.plots:
        from . import plots

        if scn.is_engagement:
            created = plots.render_engagement(result, args.plots)
        else:
            created = plots.render_game(result, args.plots)
        for p in created:
            print(f"figure: {p}", file=sys.stderr)
    return 0


def cmd_master(args) -> int:
    scn = _resolve_scenario(args.scenario)
    if scn.model != "example1":
        raise ScenarioError(
            f"master requires a model=example1 scenario, got {scn.model}")
    game = scn.game
    drift = game.cubic.as_drift_model()
    grid = TimeGrid(0.0, game.t1, game.dt)
    x0 = game.x0.x1

    traj = integrate(lambda v, t: np.array([game.cubic.eval(float(v[0]), t)]),
                     [x0], grid)
    x_ode = traj.states[:, 0]
    path = solve_lambda_path(drift, x0, grid,
                             RootConfig(abs_tol=scn.root_tol, max_iter=200))
    scale = float(np.abs(x_ode).max())
    with np.errstate(invalid="ignore"):
        rel_err = np.abs(path.lam - x_ode) / scale if scale > 0.0 \
            else np.abs(path.lam - x_ode)

    write_rows_atomic(args.out, MASTER_HEADER,
                      master_rows(path.t, path.lam, x_ode, rel_err))
    valid = np.isfinite(rel_err)
    sup = float(np.max(rel_err[valid])) if valid.any() else float("nan")
    warnings = int((~valid).sum())
    print(f"sup_rel_err={fmt(sup)}")
    if warnings:
        print(f"no_root_nodes={warnings}")
    if args.plots:
        from . import plots

        for p in plots.render_master(path.t, path.lam, x_ode, rel_err, args.plots):
            print(f"figure: {p}", file=sys.stderr)
    return 0


def _sweep_row(scn: Scenario, key: str, value: float) -> Tuple[str, Optional[float]]:
    try:
        variant = override_entry(scn, key, value)
        result, summary, _, _ = _execute(variant)
        row = ",".join((
            fmt(value),
            fmt(summary.miss),
            fmt(summary.payoff),
            capture_text(summary.capture_time),
        ))
        return row, summary.miss
    except (ScenarioError, *_RUNTIME_ERRORS) as exc:
        print(f"value {value!r}: {exc}", file=sys.stderr)
        return f"{fmt(value)},nan,nan,none", None


def cmd_sweep(args) -> int:
    scn = _resolve_scenario(args.scenario)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise ScenarioError(f"bad sweep values {args.values!r}: {exc}") from exc
    if not values:
        raise ScenarioError("sweep needs at least one value")
    # validate the key up front so a typo fails the whole command, not each row
    override_entry(scn, args.key, values[0])

    cap = os.environ.get("SIM_THREADS", "")
    max_workers = min(len(values), int(cap)) if cap.strip() else min(len(values), 4)
    max_workers = max(1, max_workers)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        outcomes = list(pool.map(lambda v: _sweep_row(scn, args.key, v), values))

    rows = [row for row, _ in outcomes]
    write_rows_atomic(args.out, SWEEP_HEADER, rows)
    for row in rows:
        print(row)
    successes = [m for _, m in outcomes if m is not None]
    if args.plots and successes:
        from . import plots

        ok_pairs = [(v, m) for v, (_, m) in zip(values, outcomes) if m is not None]
        for p in plots.render_sweep([v for v, _ in ok_pairs],
                                    [m for _, m in ok_pairs], args.key, args.plots):
            print(f"figure: {p}", file=sys.stderr)
    return 0 if successes else 3


def cmd_compare(args) -> int:
    scn = _resolve_scenario(args.scenario)
    results = {}
    for label, mode in (("theta", "theta"), ("fixed", "fixed")):
        variant = with_horizon_mode(scn, mode)
        result, summary, _, _ = _execute(variant)
        results[label] = (result, summary)
    rows = [
        ",".join((label, fmt(summary.miss), fmt(summary.payoff),
                  capture_text(summary.capture_time)))
        for label, (_, summary) in results.items()
    ]
    write_rows_atomic(args.out, COMPARE_HEADER, rows)
    for label, (_, summary) in results.items():
        print(f"miss_{label}={fmt(summary.miss)}")
        print(f"payoff_{label}={fmt(summary.payoff)}")
        print(f"capture_time_{label}={capture_text(summary.capture_time)}")
    if args.plots:
        from . import plots

        (res_t, _), (res_f, _) = results["theta"], results["fixed"]
        col = 0
        ylabel = "R [m]" if scn.is_engagement else "x1"
        for p in plots.render_compare(
            res_t.trajectory.t, res_t.trajectory.states[:, col],
            res_f.trajectory.t, res_f.trajectory.states[:, col],
            args.plots, ylabel=ylabel,
        ):
            print(f"figure: {p}", file=sys.stderr)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim",
        description="Differential-game guidance simulations: closed-loop runs, "
                    "trajectory-estimate cross-checks, parameter sweeps, and "
                    "guidance-law comparisons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario, write trajectory CSV")
    p_run.add_argument("scenario", help="scenario file path or shipped scenario name")
    p_run.add_argument("--out", required=True, help="output CSV path")
    p_run.add_argument("--plots", help="directory for PNG figures")
    p_run.set_defaults(func=cmd_run)

    p_master = sub.add_parser(
        "master", help="trajectory estimate vs direct solution (model=example1)")
    p_master.add_argument("scenario")
    p_master.add_argument("--out", required=True)
    p_master.add_argument("--plots")
    p_master.set_defaults(func=cmd_master)

    p_sweep = sub.add_parser("sweep", help="one run per value of a scenario key")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--key", required=True, help="numeric scenario key to vary")
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--plots")
    p_sweep.set_defaults(func=cmd_sweep)

    p_cmp = sub.add_parser(
        "compare", help="sawtooth-horizon vs fixed-horizon law on one scenario")
    p_cmp.add_argument("scenario")
    p_cmp.add_argument("--out", required=True)
    p_cmp.add_argument("--plots")
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except _RUNTIME_ERRORS as exc:
        print(f"simulation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
