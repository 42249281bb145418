"""Built-in 10-agent fixture graph and scenario parameter presets."""
from __future__ import annotations

import numpy as np

from .dynamics import ModelParams
from .graphs import SignedGraph, validate_graph

FIXTURE_N = 10
FIXTURE_CHORDS = ((1, 5), (2, 7), (3, 8), (4, 9), (6, 10))

# Default gains shared by all preset scenarios.
DEFAULT_D = 1.0
DEFAULT_ALPHA = 1.2
DEFAULT_GAMMA = 1.3

FIG2_U = 0.324
FIG2_SWITCHED_AGENTS = (1, 2, 3)
FIG4_U = 0.294
FIG4_SWITCH_TIME = 15.0
FIG4_SWITCHED_AGENTS = (1,)
FIG5_U = 0.315
FIG5_TAU_A = 0.01
FIG5_TRIGGERS = ((10.0, 1), (10.0, 2), (15.0, 3))
FIGURE_HORIZON = 30.0


def fixture_graph() -> SignedGraph:
    """All-positive directed ring 1->2->...->10->1 plus symmetric chords."""
    edges = [(i, i % FIXTURE_N + 1, 1) for i in range(1, FIXTURE_N + 1)]
    for i, k in FIXTURE_CHORDS:
        edges.append((i, k, 1))
        edges.append((k, i, 1))
    return validate_graph(FIXTURE_N, edges)


def default_params(n: int, u: float) -> ModelParams:
    return ModelParams.homogeneous(n, u, d=DEFAULT_D, alpha=DEFAULT_ALPHA,
                                   gamma=DEFAULT_GAMMA)


def initial_condition(n: int, seed: int, low: float = -0.1,
                      high: float = 0.1) -> np.ndarray:
    return np.random.default_rng(seed).uniform(low, high, size=n)
