"""Opinion dynamics on signed networks with switching transformations."""

from .backend import BACKEND_NAME
from .dynamics import (
    EquilibriumPair,
    ModelParams,
    OpinionState,
    Trajectory,
    boundedness_check,
    find_equilibria,
    integrate,
    jacobian,
    lyapunov_check,
    rhs,
    settle,
)
from .fixtures import default_params, fixture_graph, initial_condition
from .graphs import (
    BalanceCertificate,
    SignedGraph,
    SwitchingAssignment,
    balance_certificate,
    compose,
    is_strongly_connected,
    load_graph,
    save_graph,
    switch,
    validate_graph,
)
from .spectral import (
    BifurcationThresholds,
    SpectralSummary,
    dense_eigenvalues,
    leading_eigenpair,
    thresholds,
)
from .switching import (
    EpsilonEstimate,
    PatternSpec,
    SwitchPrediction,
    design_pattern,
    estimate_epsilon,
    predict_post_switch,
    run_instantaneous_switch,
    run_smooth_switch,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "BalanceCertificate",
    "BifurcationThresholds",
    "EpsilonEstimate",
    "EquilibriumPair",
    "ModelParams",
    "OpinionState",
    "PatternSpec",
    "SignedGraph",
    "SpectralSummary",
    "SwitchPrediction",
    "SwitchingAssignment",
    "Trajectory",
    "balance_certificate",
    "boundedness_check",
    "compose",
    "default_params",
    "dense_eigenvalues",
    "design_pattern",
    "estimate_epsilon",
    "find_equilibria",
    "fixture_graph",
    "initial_condition",
    "integrate",
    "is_strongly_connected",
    "jacobian",
    "leading_eigenpair",
    "load_graph",
    "lyapunov_check",
    "predict_post_switch",
    "rhs",
    "run_instantaneous_switch",
    "run_smooth_switch",
    "save_graph",
    "settle",
    "switch",
    "thresholds",
    "validate_graph",
]
