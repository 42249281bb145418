"""Figure-reproduction presets on the built-in 10-agent fixture.

The original figure topology and initial conditions are not recoverable,
so verdicts are qualitative: final sign patterns and flip counts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fixtures
from .errors import ConfigError
from .scenario import ScenarioResult, parse_scenario, run_scenario
from .switching import PatternSpec, design_pattern

FIGURES = ("fig2", "fig4", "fig5")


def figure_config(figure: str, seed: int = 0, dt: float | None = None) -> dict:
    """The scenario dict for a figure preset (also consumable by simulate)."""
    g = fixtures.fixture_graph()
    base = {
        "params": {"d": fixtures.DEFAULT_D, "alpha": fixtures.DEFAULT_ALPHA,
                   "gamma": fixtures.DEFAULT_GAMMA},
        "x0": {"mode": "uniform", "low": -0.1, "high": 0.1, "seed": seed},
        "horizon": fixtures.FIGURE_HORIZON,
        "seed": seed,
    }
    if figure == "fig2":
        switched = design_pattern(
            g, PatternSpec.from_task2_agents(g.n, fixtures.FIG2_SWITCHED_AGENTS))
        base["graph"] = switched.to_dict()
        base["params"]["u"] = fixtures.FIG2_U
        base["dt"] = dt if dt is not None else 0.01
    elif figure == "fig4":
        base["graph"] = g.to_dict()
        base["params"]["u"] = fixtures.FIG4_U
        base["dt"] = dt if dt is not None else 0.01
        base["switches"] = [{"t": fixtures.FIG4_SWITCH_TIME,
                             "agents": list(fixtures.FIG4_SWITCHED_AGENTS),
                             "mode": "instant"}]
    elif figure == "fig5":
        base["graph"] = g.to_dict()
        base["params"]["u"] = fixtures.FIG5_U
        base["dt"] = dt if dt is not None else 0.001
        base["switches"] = [
            {"t": t, "agents": [a], "mode": "smooth",
             "tau_a": fixtures.FIG5_TAU_A}
            for t, a in fixtures.FIG5_TRIGGERS
        ]
    else:
        raise ConfigError("figure", f"unknown figure {figure!r}; "
                          f"expected one of {FIGURES}")
    return base


@dataclass
class ReproductionResult:
    figure: str
    scenario: ScenarioResult
    verdict: bool
    detail: str


def _pattern(x) -> np.ndarray:
    return np.sign(np.asarray(x))


def run_reproduction(figure: str, seed: int = 0,
                     dt: float | None = None) -> ReproductionResult:
    cfg = parse_scenario(figure_config(figure, seed=seed, dt=dt))
    res = run_scenario(cfg)
    traj = res.trajectory
    final = _pattern(traj.final())
    group = np.array([1, 1, 1] + [0] * 7, dtype=bool)  # agents 1..3

    if figure == "fig2":
        split_ok = (final[group] == final[group][0]).all() and \
                   (final[~group] == final[~group][0]).all() and \
                   final[0] != final[3]
        verdict = bool(split_ok)
        detail = (f"3-vs-7 sign split along the switched set: {verdict}; "
                  f"pattern={final.astype(int).tolist()}")
    elif figure == "fig4":
        idx = int(round(fixtures.FIG4_SWITCH_TIME / cfg.dt))
        before = _pattern(traj.xs[idx])
        expected = before.copy()
        expected[0] = -expected[0]
        verdict = bool(np.array_equal(final, expected))
        detail = (f"agent 1 flipped, neighbors unchanged: {verdict}; "
                  f"before={before.astype(int).tolist()}, "
                  f"after={final.astype(int).tolist()}")
    else:  # fig5
        verdict = bool((final[group] == final[group][0]).all()
                       and (final[~group] == final[~group][0]).all()
                       and final[0] != final[3])
        detail = (f"agents 1-3 sign-opposed to the rest: {verdict}; "
                  f"pattern={final.astype(int).tolist()}")
    return ReproductionResult(figure=figure, scenario=res, verdict=verdict,
                              detail=detail)
