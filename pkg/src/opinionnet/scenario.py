"""Scenario configs: parsing with field-path diagnostics and execution.

Schema (JSON object):
  graph:    path to a graph file, or inline {"n": int, "edges": [[i,k,s],..]}
  params:   {d, alpha, gamma, u (scalar or per-agent list), saturation}
  x0:       explicit list, or {"mode": "uniform", low, high, seed},
            or {"mode": "near_equilibrium", perturbation, seed}
  switches: [{t, agents, mode: "instant"|"smooth", tau_a (smooth only)}]
  dt, horizon, seed (optional master seed for sampled x0)
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .dynamics import ModelParams, Trajectory, find_equilibria, integrate
from .errors import ConfigError, HeterogeneousUError
from .graphs import (
    SignedGraph,
    SwitchingAssignment,
    graph_from_dict,
    load_graph,
    switch,
)
from .spectral import leading_eigenpair
from .switching import predict_post_switch, run_smooth_switch

from . import backend


@dataclass
class SwitchEvent:
    t: float
    agents: tuple[int, ...]
    mode: str
    tau_a: float | None = None


@dataclass
class ScenarioConfig:
    graph: SignedGraph
    params: ModelParams
    x0: np.ndarray
    switches: list[SwitchEvent]
    dt: float
    horizon: float
    seed: int


def _require(d: dict, key: str, path: str):
    if key not in d:
        raise ConfigError(f"{path}.{key}", "missing required field")
    return d[key]


def _number(v, path: str) -> float:
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ConfigError(path, f"expected a number, got {type(v).__name__}")
    return float(v)


def parse_scenario(raw: dict, base_dir: str = ".") -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigError("$", "scenario must be a JSON object")
    gspec = _require(raw, "graph", "$")
    if isinstance(gspec, str):
        path = gspec if os.path.isabs(gspec) else os.path.join(base_dir, gspec)
        try:
            graph = load_graph(path)
        except OSError as exc:
            raise ConfigError("$.graph", str(exc)) from exc
    elif isinstance(gspec, dict):
        graph = graph_from_dict(gspec)
    else:
        raise ConfigError("$.graph", "expected a file path or inline graph object")

    praw = _require(raw, "params", "$")
    u = _require(praw, "u", "$.params")
    if isinstance(u, list):
        if len(u) != graph.n:
            raise ConfigError("$.params.u", f"expected {graph.n} entries")
        u_vec = np.asarray([_number(v, "$.params.u[]") for v in u])
    else:
        u_vec = np.full(graph.n, _number(u, "$.params.u"))
    params = ModelParams(
        d=_number(praw.get("d", 1.0), "$.params.d"),
        alpha=_number(praw.get("alpha", 1.2), "$.params.alpha"),
        gamma=_number(praw.get("gamma", 1.3), "$.params.gamma"),
        u=u_vec,
        saturation=praw.get("saturation", "tanh"),
    )

    seed = int(raw.get("seed", 0))
    xraw = _require(raw, "x0", "$")
    if isinstance(xraw, list):
        if len(xraw) != graph.n:
            raise ConfigError("$.x0", f"expected {graph.n} entries")
        x0 = np.asarray([_number(v, "$.x0[]") for v in xraw])
    elif isinstance(xraw, dict):
        mode = _require(xraw, "mode", "$.x0")
        rng = np.random.default_rng(int(xraw.get("seed", seed)))
        if mode == "uniform":
            low = _number(xraw.get("low", -0.1), "$.x0.low")
            high = _number(xraw.get("high", 0.1), "$.x0.high")
            x0 = rng.uniform(low, high, size=graph.n)
        elif mode == "near_equilibrium":
            pert = _number(xraw.get("perturbation", 1e-3), "$.x0.perturbation")
            pair = find_equilibria(graph, params)
            if pair is None:
                raise ConfigError("$.x0", "near_equilibrium requires u above u*")
            x0 = pair.x1 + rng.uniform(-pert, pert, size=graph.n)
        else:
            raise ConfigError("$.x0.mode", f"unknown mode {mode!r}")
    else:
        raise ConfigError("$.x0", "expected a list or a sampling object")

    dt = _number(raw.get("dt", 0.01), "$.dt")
    horizon = _number(_require(raw, "horizon", "$"), "$.horizon")
    if dt <= 0 or horizon <= 0:
        raise ConfigError("$.dt", "dt and horizon must be positive")

    switches = []
    for j, sraw in enumerate(raw.get("switches", [])):
        path = f"$.switches[{j}]"
        t = _number(_require(sraw, "t", path), f"{path}.t")
        agents = _require(sraw, "agents", path)
        if not isinstance(agents, list) or not agents:
            raise ConfigError(f"{path}.agents", "expected a non-empty list")
        for v in agents:
            if not isinstance(v, int) or not 1 <= v <= graph.n:
                raise ConfigError(f"{path}.agents", f"agent {v} not in 1..{graph.n}")
        mode = sraw.get("mode", "instant")
        if mode not in ("instant", "smooth"):
            raise ConfigError(f"{path}.mode", f"unknown mode {mode!r}")
        tau_a = None
        if mode == "smooth":
            tau_a = _number(sraw.get("tau_a", 0.01), f"{path}.tau_a")
            if tau_a <= 0:
                raise ConfigError(f"{path}.tau_a", "must be positive")
        if not 0 < t < horizon:
            raise ConfigError(f"{path}.t", "switch time must lie inside the horizon")
        switches.append(SwitchEvent(t=t, agents=tuple(agents), mode=mode,
                                    tau_a=tau_a))
    modes = {s.mode for s in switches}
    if len(modes) > 1:
        raise ConfigError("$.switches", "cannot mix instant and smooth switches")
    if "smooth" in modes and len({s.tau_a for s in switches}) > 1:
        raise ConfigError("$.switches", "smooth switches must share tau_a")
    return ScenarioConfig(graph=graph, params=params, x0=x0,
                          switches=sorted(switches, key=lambda s: s.t),
                          dt=dt, horizon=horizon, seed=seed)


def load_scenario(path: str) -> ScenarioConfig:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("$", f"invalid JSON: {exc}") from exc
    return parse_scenario(raw, base_dir=os.path.dirname(os.path.abspath(path)))


@dataclass
class ScenarioResult:
    trajectory: Trajectory
    summary: dict
    predictions: list = field(default_factory=list)


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    """Deterministic execution; emits prediction verdicts for instant
    switches when the attention level is homogeneous."""
    notes = []
    predictions = []
    if cfg.switches and cfg.switches[0].mode == "smooth":
        triggers = [(s.t, a) for s in cfg.switches for a in s.agents]
        res = run_smooth_switch(cfg.x0, cfg.graph, triggers, cfg.params,
                                tau_a=cfg.switches[0].tau_a,
                                horizon=cfg.horizon, dt=cfg.dt)
        traj = res.trajectory
    else:
        events = []
        graphs_after = []
        g = cfg.graph
        for s in cfg.switches:
            w = SwitchingAssignment.from_set(cfg.graph.n, s.agents)
            g = switch(g, w)
            graphs_after.append(g)
            events.append((s.t, (lambda gg, frozen=g: frozen),
                           f"instant switch agents={list(s.agents)}"))
        traj = integrate(cfg.x0, cfg.graph, cfg.params, dt=cfg.dt,
                         horizon=cfg.horizon, events=events)
        if cfg.switches:
            try:
                for s, g_after in zip(cfg.switches, graphs_after):
                    spec_after = leading_eigenpair(g_after)
                    pair_after = find_equilibria(g_after, cfg.params, spec_after)
                    if pair_after is None:
                        continue
                    idx = int(round(s.t / cfg.dt))
                    pred = predict_post_switch(traj.xs[idx], spec_after, None,
                                               pair_after)
                    match = None
                    if pred.predicted_equilibrium is not None:
                        match = bool(np.array_equal(
                            np.sign(traj.final()),
                            np.sign(pred.predicted_equilibrium)))
                    predictions.append({
                        "t": s.t,
                        "agents": list(s.agents),
                        "projection_sign": pred.projection_sign,
                        "confident": pred.confident,
                        "verdict_matches_final": match,
                    })
            except HeterogeneousUError:
                notes.append("analysis predicates skipped (heterogeneous u)")
    if not cfg.params.is_homogeneous and not notes:
        notes.append("analysis predicates skipped (heterogeneous u)")
    final = traj.final()
    summary = {
        "backend": backend.BACKEND_NAME,
        "n": cfg.graph.n,
        "final_state": [float(v) for v in final],
        "final_pattern": [int(np.sign(v)) for v in final],
        "positive_count": int((final > 0).sum()),
        "negative_count": int((final < 0).sum()),
        "events": [{"t": float(t), "detail": d} for t, d in traj.events],
        "predictions": predictions,
        "notes": notes,
    }
    return ScenarioResult(trajectory=traj, summary=summary,
                          predictions=predictions)


def summary_to_json(summary: dict) -> str:
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"
