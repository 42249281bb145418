"""Command-line interface.

Subcommands: analyze, sweep, simulate, switch-design, estimate-eps,
reproduce. Exit codes: 0 success, 2 config error, 3 numerical failure,
4 verdict mismatch.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import backend, fixtures
from .dynamics import ModelParams
from .errors import ConfigError, NumericalError, OpinionNetError
from .graphs import (
    SwitchingAssignment,
    balance_certificate,
    is_strongly_connected,
    load_graph,
    save_graph,
    switch,
)
from .output import svg_scatter, svg_timeseries, write_events_json, write_trajectory_csv
from .reproduce import FIGURES, run_reproduction
from .scenario import load_scenario, run_scenario, summary_to_json
from .spectral import leading_eigenpair, thresholds
from .sweep import run_sweep, sweep_to_csv
from .switching import estimate_epsilon

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VERDICT = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opinionnet",
        description="Opinion dynamics on signed networks with switching "
                    "transformations")
    parser.add_argument("--seed", type=int, default=0, help="master RNG seed")
    parser.add_argument("--dt", type=float, default=None,
                        help="integrator step override")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="tabular output format")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(p):
        p.add_argument("--d", type=float, default=fixtures.DEFAULT_D)
        p.add_argument("--alpha", type=float, default=fixtures.DEFAULT_ALPHA)
        p.add_argument("--gamma", type=float, default=fixtures.DEFAULT_GAMMA)
        p.add_argument("--u", type=float, default=None,
                       help="homogeneous attention level")

    p = sub.add_parser("analyze", help="spectral and balance report for a graph")
    p.add_argument("graph", help="graph JSON file")
    add_params(p)

    p = sub.add_parser("sweep", help="bifurcation scan over the attention u")
    p.add_argument("graph")
    add_params(p)
    p.add_argument("--u-min", type=float, required=True)
    p.add_argument("--u-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=41)

    p = sub.add_parser("simulate", help="run a scenario config")
    p.add_argument("config", help="scenario JSON file")
    p.add_argument("--svg", action="store_true", help="also write an SVG plot")

    p = sub.add_parser("switch-design",
                       help="switch an all-positive graph to a task pattern")
    p.add_argument("graph")
    p.add_argument("--agents", required=True,
                   help="comma-separated 1-based agents forming W")
    p.add_argument("--output", default="switched_graph.json")

    p = sub.add_parser("estimate-eps",
                       help="Monte-Carlo basin-margin estimate")
    p.add_argument("graph")
    add_params(p)
    p.add_argument("--n-directions", type=int, default=200)

    p = sub.add_parser("reproduce", help="rerun a preset figure scenario")
    p.add_argument("figure", choices=FIGURES)
    p.add_argument("--svg", action="store_true")
    return parser


def _params_for(args, n: int) -> ModelParams:
    u = args.u if args.u is not None else 0.0
    return ModelParams.homogeneous(n, u, d=args.d, alpha=args.alpha,
                                   gamma=args.gamma)


def _analysis_report(g, params: ModelParams) -> dict:
    report = {
        "n": g.n,
        "strongly_connected": is_strongly_connected(g),
    }
    cert = balance_certificate(g)
    report["balanced"] = cert.balanced
    if cert.balanced:
        report["theta"] = cert.theta.theta.tolist()
        report["switching_set"] = sorted(cert.theta.switching_set)
    else:
        report["witness_cycle"] = [list(e) for e in cert.witness_cycle]
    if report["strongly_connected"]:
        spec = leading_eigenpair(g)
        th = thresholds(spec, params)
        report.update({
            "lambda_star": spec.lambda_star,
            "lambda2_re": spec.lambda2_re,
            "simple": spec.simple,
            "v_star": spec.v_star.tolist(),
            "w_star": spec.w_star.tolist(),
            "u_star": th.u_star,
            "u_two": "inf" if math.isinf(th.u_two) else th.u_two,
            "cubic_ok": th.cubic_ok,
            "pitchfork_valid": th.pitchfork_valid,
        })
    return report


def cmd_analyze(args) -> int:
    g = load_graph(args.graph)
    report = _analysis_report(g, _params_for(args, g.n))
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_sweep(args) -> int:
    g = load_graph(args.graph)
    p = _params_for(args, g.n)
    result = run_sweep(g, p, args.u_min, args.u_max, args.steps)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "sweep.csv")
    with open(csv_path, "w") as fh:
        fh.write(sweep_to_csv(result))
    svg_path = os.path.join(args.out, "sweep.svg")
    svg_scatter(result.us,
                [result.branch_proj_pos, result.branch_proj_neg],
                svg_path, title="pitchfork branches: <w*, x*> vs u")
    print(json.dumps({
        "u_star": result.u_star,
        "u_hat": result.u_hat,
        "fit_exponent": result.fit_exponent,
        "csv": csv_path,
        "svg": svg_path,
    }, indent=2, sort_keys=True))
    return EXIT_OK


def _write_run_outputs(args, traj, summary, stem: str, svg: bool) -> dict:
    os.makedirs(args.out, exist_ok=True)
    paths = {
        "csv": os.path.join(args.out, f"{stem}.csv"),
        "events": os.path.join(args.out, f"{stem}_events.json"),
        "summary": os.path.join(args.out, f"{stem}_summary.json"),
    }
    write_trajectory_csv(traj, paths["csv"])
    write_events_json(traj, paths["events"])
    with open(paths["summary"], "w") as fh:
        fh.write(summary_to_json(summary))
    if svg:
        paths["svg"] = os.path.join(args.out, f"{stem}.svg")
        svg_timeseries(traj, paths["svg"], title=stem)
    return paths


def cmd_simulate(args) -> int:
    cfg = load_scenario(args.config)
    if args.dt is not None:
        cfg.dt = args.dt
    res = run_scenario(cfg)
    stem = os.path.splitext(os.path.basename(args.config))[0]
    paths = _write_run_outputs(args, res.trajectory, res.summary, stem, args.svg)
    out = dict(res.summary)
    out["outputs"] = paths
    print(summary_to_json(out), end="")
    return EXIT_OK


def cmd_switch_design(args) -> int:
    g = load_graph(args.graph)
    try:
        agents = [int(v) for v in args.agents.split(",") if v]
    except ValueError as exc:
        raise ConfigError("--agents", str(exc)) from exc
    w = SwitchingAssignment.from_set(g.n, agents)
    from .switching import PatternSpec, design_pattern

    switched = design_pattern(
        g, PatternSpec.from_task2_agents(g.n, agents))
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, args.output)
    save_graph(switched, out_path)
    print(json.dumps({
        "switching_set": sorted(w.switching_set),
        "proportion": f"{len(agents)}-{g.n - len(agents)}",
        "output": out_path,
    }, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_estimate_eps(args) -> int:
    g = load_graph(args.graph)
    if args.u is None:
        raise ConfigError("--u", "estimate-eps requires an attention level")
    p = _params_for(args, g.n)
    est = estimate_epsilon(g, p, n_directions=args.n_directions, seed=args.seed)
    print(json.dumps({
        "eps_hat": est.eps_hat,
        "samples": est.samples,
        "max_boundary_ratio": est.max_boundary_ratio,
        "min_equilibrium_ratio": est.min_equilibrium_ratio,
    }, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    res = run_reproduction(args.figure, seed=args.seed, dt=args.dt)
    paths = _write_run_outputs(args, res.scenario.trajectory,
                               res.scenario.summary, args.figure, args.svg)
    print(json.dumps({
        "figure": args.figure,
        "verdict": res.verdict,
        "detail": res.detail,
        "outputs": paths,
        "backend": backend.BACKEND_NAME,
    }, indent=2, sort_keys=True))
    return EXIT_OK if res.verdict else EXIT_VERDICT


_COMMANDS = {
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "switch-design": cmd_switch_design,
    "estimate-eps": cmd_estimate_eps,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OpinionNetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
