"""Pattern synthesis and dynamic switching.

Covers the design procedure (switch an all-positive graph to realize a
target sign partition), post-switch equilibrium prediction from the
left-eigenvector projection with an epsilon margin, Monte-Carlo estimation
of that margin from basin-boundary samples, and the instantaneous and
smooth (edge-relaxation) switch executors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    DEFAULT_DT,
    EDGE_DYNAMICS_DT,
    EquilibriumPair,
    ModelParams,
    Trajectory,
    find_equilibria,
    integrate,
    omega_radius,
    settle,
)
from .errors import (
    AssumptionViolatedError,
    BisectionFailedError,
    InvalidParamsError,
    NotAllPositiveError,
    NotBalancedError,
    NotStronglyConnectedError,
    OutsideBistableWindowError,
    PreconditionViolatedError,
    UnknownAgentError,
)
from .graphs import (
    SignedGraph,
    SwitchingAssignment,
    balance_certificate,
    is_strongly_connected,
    switch,
)
from .spectral import SpectralSummary, leading_eigenpair, thresholds

TIE_RTOL = 1e-12

TASK1 = "task1"
TASK2 = "task2"


@dataclass(frozen=True)
class PatternSpec:
    """Per-agent target task labels; task2 agents form the switching set."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not all(lab in (TASK1, TASK2) for lab in self.labels):
            raise InvalidParamsError("labels must be 'task1' or 'task2'")

    @classmethod
    def from_task2_agents(cls, n: int, agents) -> "PatternSpec":
        agents = set(agents)
        for v in agents:
            if not 1 <= v <= n:
                raise UnknownAgentError(f"agent {v} not in 1..{n}")
        return cls(tuple(TASK2 if i + 1 in agents else TASK1 for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def switching_set(self) -> frozenset[int]:
        return frozenset(i + 1 for i, lab in enumerate(self.labels) if lab == TASK2)

    def assignment(self) -> SwitchingAssignment:
        return SwitchingAssignment.from_set(self.n, self.switching_set)


def design_pattern(g_positive: SignedGraph, pattern: PatternSpec) -> SignedGraph:
    """Realize a two-task sign partition by switching the task2 agents.

    The input must be strongly connected and all-positive; the result is
    bistable with one stable state carrying exactly |W| negative agents
    and the other n - |W|.
    """
    if not g_positive.is_all_positive():
        raise NotAllPositiveError("design starts from an all-positive graph")
    if not is_strongly_connected(g_positive):
        raise NotStronglyConnectedError("design needs a strongly connected graph")
    if pattern.n != g_positive.n:
        raise InvalidParamsError("pattern length does not match the graph")
    return switch(g_positive, pattern.assignment())


@dataclass(frozen=True)
class SwitchPrediction:
    """Predicted post-switch equilibrium from the projection test."""

    predicted_equilibrium: np.ndarray | None
    confident: bool
    margin: float
    projection_sign: int


@dataclass(frozen=True)
class EpsilonEstimate:
    """Basin-margin bound estimated from sampled basin-boundary points."""

    eps_hat: float
    samples: int
    max_boundary_ratio: float
    min_equilibrium_ratio: float


def _eps_value(eps) -> float:
    if eps is None:
        return 0.0
    if isinstance(eps, EpsilonEstimate):
        return eps.eps_hat
    return float(eps)


def predict_post_switch(x_now, spec_switched: SpectralSummary, eps,
                        pair_switched: EquilibriumPair, *,
                        graph_switched: SignedGraph | None = None,
                        params: ModelParams | None = None) -> SwitchPrediction:
    """Projection of the current state onto the switched graph's unit-norm
    left eigenvector decides the attracting equilibrium; the prediction is
    confident when |projection| clears eps * ||x||^2.

    ``graph_switched`` / ``params`` are optional and only enable the
    balance and bistable-window validation.
    """
    if graph_switched is not None and not balance_certificate(graph_switched).balanced:
        raise NotBalancedError("prediction requires a structurally balanced end graph")
    if params is not None:
        th = thresholds(spec_switched, params)
        u = params.u_value
        if not (th.u_star < u and (math.isinf(th.u_two) or u < th.u_two)):
            raise OutsideBistableWindowError(
                f"u={u} outside ({th.u_star}, {th.u_two})")
    x = np.asarray(x_now, dtype=np.float64)
    proj = float(np.dot(spec_switched.w_star_unit, x))
    norm_sq = float(np.dot(x, x))
    if abs(proj) <= TIE_RTOL * norm_sq:
        return SwitchPrediction(predicted_equilibrium=None, confident=False,
                                margin=abs(proj) - _eps_value(eps) * norm_sq,
                                projection_sign=0)
    sign = 1 if proj > 0 else -1
    margin = abs(proj) - _eps_value(eps) * norm_sq
    predicted = pair_switched.x1 if sign > 0 else pair_switched.x2
    confident = eps is not None and margin > 0
    return SwitchPrediction(predicted_equilibrium=predicted, confident=confident,
                            margin=margin, projection_sign=sign)


def classify_basin(x0, g, p: ModelParams, pair: EquilibriumPair,
                   dt: float = DEFAULT_DT, tol: float = 1e-5,
                   sustain: int = 5, max_steps: int = 400_000) -> int:
    """1 or 2: which bistable equilibrium the point converges to."""
    x = settle(x0, g, p, dt=dt, tol=tol, sustain=sustain, max_steps=max_steps)
    return pair.nearest(x)


def estimate_epsilon(g: SignedGraph, p: ModelParams, n_directions: int = 200,
                     seed: int = 0, safety_factor: float = 1.25, r: float = 2.0,
                     scan_points: int = 10, s_tol: float = 1e-6,
                     dt: float = DEFAULT_DT) -> EpsilonEstimate:
    """Estimate the basin-margin bound by bisecting the basin boundary.

    Along each random unit direction the boundary scale is bracketed on a
    log-spaced scan of (0, s_max] and refined by bisection; the boundary
    point's |<w_unit, x>| / ||x||^2 ratio is recorded. Directions whose ray
    never changes basin (e.g. near the unstable eigenvector) are skipped.

    Isotropic rays cross the boundary with probability ~|<w_unit, dir>| /
    (curvature * s_max), which is tiny, so the sampler draws the
    left-eigenvector component log-uniformly small while keeping the
    orthogonal part isotropic; this concentrates rays where crossings
    exist without changing what is measured at the boundary.
    """
    cert = balance_certificate(g)
    if not cert.balanced:
        raise NotBalancedError("epsilon estimation requires a balanced graph")
    spec = leading_eigenpair(g)
    th = thresholds(spec, p)
    u = p.u_value
    if u <= th.u_star:
        raise PreconditionViolatedError("requires u above the opinion threshold")
    if not math.isinf(th.u_two) and u >= th.u_two:
        raise OutsideBistableWindowError(f"u={u} outside ({th.u_star}, {th.u_two})")
    pair = find_equilibria(g, p, spec)
    w_unit = spec.w_star_unit
    s_max = 0.5 * omega_radius(p, r)
    rng = np.random.default_rng(seed)

    def ratio_at(x):
        return abs(float(np.dot(w_unit, x))) / float(np.dot(x, x))

    ratios = []
    for _ in range(n_directions):
        z = rng.normal(size=g.n)
        perp = z - np.dot(w_unit, z) * w_unit
        perp /= np.linalg.norm(perp)
        delta = rng.choice((-1.0, 1.0)) * 10.0 ** rng.uniform(-4.0, 0.0)
        direction = perp + delta * w_unit
        direction /= np.linalg.norm(direction)
        scales = np.geomspace(s_max / 256.0, s_max, scan_points)
        classes = [classify_basin(s * direction, g, p, pair, dt=dt) for s in scales]
        bracket = None
        for j in range(scan_points - 1):
            if classes[j] != classes[j + 1]:
                bracket = (scales[j], scales[j + 1], classes[j])
                break
        if bracket is None:
            continue  # ray stays in one basin; no boundary crossing to sample
        lo, hi, lo_class = bracket
        while hi - lo > s_tol:
            mid = 0.5 * (lo + hi)
            if classify_basin(mid * direction, g, p, pair, dt=dt) == lo_class:
                lo = mid
            else:
                hi = mid
        ratios.append(ratio_at(0.5 * (lo + hi) * direction))

    if not ratios:
        raise BisectionFailedError(
            "no basin-boundary crossing found; enlarge s_max or n_directions")
    max_ratio = max(ratios)
    eps_hat = safety_factor * max_ratio
    min_eq_ratio = min(ratio_at(pair.x1), ratio_at(pair.x2))
    if eps_hat >= min_eq_ratio:
        raise AssumptionViolatedError(
            f"eps_hat={eps_hat} does not separate the equilibria "
            f"(min equilibrium ratio {min_eq_ratio})")
    return EpsilonEstimate(eps_hat=float(eps_hat), samples=len(ratios),
                           max_boundary_ratio=float(max_ratio),
                           min_equilibrium_ratio=float(min_eq_ratio))


@dataclass
class InstantSwitchResult:
    trajectory: Trajectory
    prediction: SwitchPrediction | None
    verdict: bool | None
    final_state: np.ndarray
    graph_after: SignedGraph


def run_instantaneous_switch(x0, g: SignedGraph, w: SwitchingAssignment,
                             p: ModelParams, t_switch: float, horizon: float,
                             dt: float = DEFAULT_DT, eps=None,
                             predict: bool = True) -> InstantSwitchResult:
    """Integrate on g, swap in switch(g, w) at t_switch, continue to horizon.

    When ``predict`` is set the projection prediction is made at the switch
    instant and the verdict compares the final sign pattern against it.
    """
    if not t_switch < horizon:
        raise InvalidParamsError("t_switch must precede the horizon")
    g_after = switch(g, w)
    traj = integrate(
        x0, g, p, dt=dt, horizon=horizon,
        events=[(t_switch, lambda _: g_after,
                 f"instant switch W={sorted(w.switching_set)}")],
    )
    prediction = None
    verdict = None
    if predict:
        spec_after = leading_eigenpair(g_after)
        pair_after = find_equilibria(g_after, p, spec_after)
        if pair_after is None:
            raise PreconditionViolatedError("no bistable pair below threshold")
        idx = int(round(t_switch / dt))
        prediction = predict_post_switch(
            traj.xs[idx], spec_after, eps, pair_after,
            graph_switched=g_after, params=p)
        if prediction.predicted_equilibrium is not None:
            verdict = bool(np.array_equal(np.sign(traj.final()),
                                          np.sign(prediction.predicted_equilibrium)))
    return InstantSwitchResult(trajectory=traj, prediction=prediction,
                               verdict=verdict, final_state=traj.final(),
                               graph_after=g_after)


@dataclass
class EdgeDynamicsState:
    """Time-varying edge weights relaxing toward a0 * theta_i * theta_k."""

    a: np.ndarray
    a0: np.ndarray
    theta: np.ndarray
    tau_a: float

    def targets(self) -> np.ndarray:
        t = self.theta.astype(np.float64)
        return self.a0.astype(np.float64) * np.outer(t, t)


@dataclass
class SmoothSwitchResult:
    trajectory: Trajectory
    edge_state: EdgeDynamicsState
    theta_final: np.ndarray


def run_smooth_switch(x0, g: SignedGraph, triggers, p: ModelParams,
                      tau_a: float, horizon: float,
                      dt: float = EDGE_DYNAMICS_DT,
                      record_edges: bool = True) -> SmoothSwitchResult:
    """Co-integrate the opinion dynamics with first-order edge relaxation.

    ``triggers`` is a list of (t, agent) with 1-based agents; each trigger
    toggles that agent's switching bit, retargeting only its incident
    edges. Repeated triggers flip the agent back.
    """
    if tau_a <= 0:
        raise InvalidParamsError("tau_a must be positive")
    n = g.n
    for _, agent in triggers:
        if not 1 <= agent <= n:
            raise UnknownAgentError(f"agent {agent} not in 1..{n}")
    triggers = sorted(triggers, key=lambda tr: tr[0])
    nsteps = int(round(horizon / dt))
    a0 = g.matrix()
    theta = np.ones(n)
    x = np.asarray(x0, dtype=np.float64).copy()
    a = a0.copy()
    target = a0 * np.outer(theta, theta)
    xs = np.empty((nsteps + 1, n))
    edge_states = np.empty((nsteps + 1, n, n)) if record_edges else None
    xs[0] = x
    if record_edges:
        edge_states[0] = a
    events = []
    trig_idx = [(int(round(t / dt)), agent) for t, agent in triggers]
    ti = 0

    def f(xc, ac):
        fx = -p.d * xc + p.u * p.sat(p.alpha * xc + p.gamma * (ac @ xc))
        fa = (target - ac) / tau_a
        return fx, fa

    for s in range(nsteps):
        while ti < len(trig_idx) and trig_idx[ti][0] == s:
            agent = trig_idx[ti][1]
            theta[agent - 1] = -theta[agent - 1]
            target = a0 * np.outer(theta, theta)
            events.append((s * dt, f"agent {agent} toggled theta to "
                           f"{int(theta[agent - 1]):+d}"))
            ti += 1
        k1x, k1a = f(x, a)
        k2x, k2a = f(x + 0.5 * dt * k1x, a + 0.5 * dt * k1a)
        k3x, k3a = f(x + 0.5 * dt * k2x, a + 0.5 * dt * k2a)
        k4x, k4a = f(x + dt * k3x, a + dt * k3a)
        x = x + (dt / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x)
        a = a + (dt / 6.0) * (k1a + 2 * k2a + 2 * k3a + k4a)
        xs[s + 1] = x
        if record_edges:
            edge_states[s + 1] = a
    traj = Trajectory(ts=dt * np.arange(nsteps + 1), xs=xs, dt=dt,
                      events=events, edge_states=edge_states)
    state = EdgeDynamicsState(a=a, a0=g.adjacency.copy(), theta=theta.copy(),
                              tau_a=tau_a)
    return SmoothSwitchResult(trajectory=traj, edge_state=state,
                              theta_final=theta.copy())
