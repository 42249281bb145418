"""The opinion ODE: xdot = -d x + U S(alpha x + gamma A x).

Fixed-step RK4 throughout (the compiled/numpy kernel for the default tanh
saturation, a generic python path for custom saturations). Analysis
operations (Jacobian, equilibria, Lyapunov) require a homogeneous
attention level u.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import backend
from .errors import (
    DimensionMismatchError,
    HeterogeneousUError,
    InvalidParamsError,
    NewtonSingularError,
    NoConvergenceError,
    NonFiniteStateError,
    PreconditionViolatedError,
)
from .graphs import SignedGraph
from .spectral import SpectralSummary, leading_eigenpair, thresholds

DEFAULT_DT = 0.01
EDGE_DYNAMICS_DT = 0.001
EQUILIBRIUM_TOL = 1e-6
EQUILIBRIUM_SUSTAIN = 100
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50


class CustomSaturation:
    """Odd sigmoid supplied by the caller, checked numerically at load.

    Requirements: S(0) = 0, S'(0) = 1 (finite differences, tol 1e-4) and
    sign(S''(x)) = -sign(x), checked on a 1001-point grid over [-10, 10].
    """

    def __init__(self, fn, deriv=None):
        self.fn = fn
        self._deriv = deriv
        if abs(float(fn(np.array([0.0]))[0])) > 1e-12:
            raise InvalidParamsError("saturation must satisfy S(0) = 0")
        h = 1e-6
        slope = float((fn(np.array([h])) - fn(np.array([-h])))[0]) / (2 * h)
        if abs(slope - 1.0) > 1e-4:
            raise InvalidParamsError(f"saturation slope at 0 is {slope}, expected 1")
        grid = np.linspace(-10.0, 10.0, 1001)
        d2 = fn(grid + h) - 2.0 * fn(grid) + fn(grid - h)
        bad = np.sign(d2[np.abs(grid) > 1e-3]) == np.sign(grid[np.abs(grid) > 1e-3])
        if bad.any():
            raise InvalidParamsError("saturation must be concave for x>0, convex for x<0")

    def __call__(self, y):
        return self.fn(y)

    def deriv(self, y):
        if self._deriv is not None:
            return self._deriv(y)
        h = 1e-6
        return (self.fn(y + h) - self.fn(y - h)) / (2 * h)


@dataclass(frozen=True)
class ModelParams:
    """d, alpha, gamma, per-agent attention u, saturation selector."""

    d: float
    alpha: float
    gamma: float
    u: np.ndarray
    saturation: str | CustomSaturation = "tanh"

    def __post_init__(self):
        if self.d <= 0:
            raise InvalidParamsError("d must be positive")
        if self.gamma <= 0:
            raise InvalidParamsError("gamma must be positive")
        if self.alpha < 0:
            raise InvalidParamsError("alpha must be nonnegative")
        u = np.atleast_1d(np.asarray(self.u, dtype=np.float64)).copy()
        if (u < 0).any():
            raise InvalidParamsError("attention entries must be nonnegative")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)
        if isinstance(self.saturation, str) and self.saturation != "tanh":
            raise InvalidParamsError(f"unknown saturation {self.saturation!r}")

    @classmethod
    def homogeneous(cls, n: int, u: float, d: float = 1.0, alpha: float = 1.2,
                    gamma: float = 1.3, saturation="tanh") -> "ModelParams":
        return cls(d=d, alpha=alpha, gamma=gamma, u=np.full(n, float(u)),
                   saturation=saturation)

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def is_homogeneous(self) -> bool:
        return bool(np.all(self.u == self.u[0]))

    @property
    def u_value(self) -> float:
        if not self.is_homogeneous:
            raise HeterogeneousUError("operation requires homogeneous u")
        return float(self.u[0])

    def with_u(self, u: float) -> "ModelParams":
        return ModelParams(d=self.d, alpha=self.alpha, gamma=self.gamma,
                           u=np.full(self.n, float(u)), saturation=self.saturation)

    def sat(self, y):
        if self.saturation == "tanh":
            return np.tanh(y)
        return self.saturation(y)

    def sat_deriv(self, y):
        if self.saturation == "tanh":
            t = np.tanh(y)
            return 1.0 - t * t
        return self.saturation.deriv(y)


@dataclass(frozen=True)
class OpinionState:
    t: float
    x: np.ndarray


@dataclass
class Trajectory:
    """Uniformly sampled states; ``xs[j]`` is the opinion vector at ``ts[j]``."""

    ts: np.ndarray
    xs: np.ndarray
    dt: float
    events: list = field(default_factory=list)  # (t, description)
    edge_states: np.ndarray | None = None  # (m, n, n) when edge dynamics ran

    @property
    def n(self) -> int:
        return self.xs.shape[1]

    def final(self) -> np.ndarray:
        return self.xs[-1]

    def state(self, j: int) -> OpinionState:
        return OpinionState(t=float(self.ts[j]), x=self.xs[j])


def _matrix_of(g) -> np.ndarray:
    if isinstance(g, SignedGraph):
        return g.matrix()
    return np.asarray(g, dtype=np.float64)


def rhs(x, g, p: ModelParams) -> np.ndarray:
    """-d x + U S(alpha x + gamma A x), elementwise saturation."""
    a = _matrix_of(g)
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != a.shape[0] or p.u.shape[0] != a.shape[0]:
        raise DimensionMismatchError("state/graph/params dimensions disagree")
    return -p.d * x + p.u * p.sat(p.alpha * x + p.gamma * (a @ x))


def _rk4_generic(a, p: ModelParams, x0, dt, nsteps):
    def f(x):
        return -p.d * x + p.u * p.sat(p.alpha * x + p.gamma * (a @ x))

    out = np.empty((nsteps + 1, x0.shape[0]))
    x = np.array(x0, dtype=np.float64)
    out[0] = x
    for s in range(nsteps):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[s + 1] = x
    return out


def _segment(a, p: ModelParams, x0, dt, nsteps):
    if p.saturation == "tanh":
        return backend.rk4_trajectory(a, p.u, p.d, p.alpha, p.gamma, x0, dt, nsteps)
    return _rk4_generic(a, p, x0, dt, nsteps)


def integrate(x0, g, p: ModelParams, dt: float = DEFAULT_DT, horizon: float = 10.0,
              t0: float = 0.0, events=None) -> Trajectory:
    """Fixed-step RK4 trajectory of the opinion dynamics.

    ``events`` is an optional list of (t, fn, description) entries; at the
    step boundary nearest to t the graph is replaced by fn(graph). Event
    hooks enable instantaneous switches; the smooth variant lives in
    :func:`opinionnet.switching.run_smooth_switch`.
    """
    if dt <= 0 or horizon <= 0:
        raise InvalidParamsError("dt and horizon must be positive")
    x0 = np.asarray(x0, dtype=np.float64)
    nsteps = int(round(horizon / dt))
    marks = []
    if events:
        for ev in sorted(events, key=lambda e: e[0]):
            idx = int(round((ev[0] - t0) / dt))
            if not 0 <= idx <= nsteps:
                raise InvalidParamsError(f"event at t={ev[0]} outside horizon")
            marks.append((idx, ev[1], ev[2] if len(ev) > 2 else "event"))

    graph = g
    a = _matrix_of(graph)
    xs = np.empty((nsteps + 1, x0.shape[0]))
    recorded_events = []
    pos = 0
    x = x0
    for idx, fn, desc in marks:
        if idx > pos:
            seg = _segment(a, p, x, dt, idx - pos)
            xs[pos: idx + 1] = seg
            x = seg[-1]
            pos = idx
        graph = fn(graph)
        a = _matrix_of(graph)
        recorded_events.append((t0 + idx * dt, desc))
    if pos < nsteps:
        seg = _segment(a, p, x, dt, nsteps - pos)
        xs[pos:] = seg
    elif pos == 0:
        xs[0] = x0
    if not np.isfinite(xs).all():
        raise NonFiniteStateError("trajectory left the finite domain")
    ts = t0 + dt * np.arange(nsteps + 1)
    return Trajectory(ts=ts, xs=xs, dt=dt, events=recorded_events)


def settle(x0, g, p: ModelParams, dt: float = DEFAULT_DT,
           tol: float = EQUILIBRIUM_TOL, sustain: int = EQUILIBRIUM_SUSTAIN,
           max_steps: int = 1_000_000) -> np.ndarray:
    """Integrate until ||rhs||_inf < tol is sustained; returns the end state."""
    a = _matrix_of(g)
    x0 = np.asarray(x0, dtype=np.float64)
    if p.saturation == "tanh":
        x, _, ok = backend.rk4_to_equilibrium(
            a, p.u, p.d, p.alpha, p.gamma, x0, dt, max_steps, tol, sustain)
    else:
        x = np.array(x0)
        run = 0
        ok = False
        for _ in range(max_steps):
            x = _rk4_generic(a, p, x, dt, 1)[-1]
            if np.max(np.abs(rhs(x, a, p))) < tol:
                run += 1
                if run >= sustain:
                    ok = True
                    break
            else:
                run = 0
    if not np.isfinite(x).all():
        raise NonFiniteStateError("divergent trajectory")
    if not ok:
        raise NoConvergenceError("no equilibrium reached within the step budget")
    return x


def jacobian(x, g, p: ModelParams) -> np.ndarray:
    """J(x) = -d I + u diag(S'(At x)) At with At = alpha I + gamma A."""
    u = p.u_value
    a = _matrix_of(g)
    at = p.alpha * np.eye(a.shape[0]) + p.gamma * a
    x = np.asarray(x, dtype=np.float64)
    return -p.d * np.eye(a.shape[0]) + u * (p.sat_deriv(at @ x)[:, None] * at)


@dataclass(frozen=True)
class EquilibriumPair:
    """The two mirror equilibria above threshold; <w*, x1> > 0, x2 = -x1."""

    x1: np.ndarray
    residual: float

    @property
    def x2(self) -> np.ndarray:
        return -self.x1

    def nearest(self, x) -> int:
        """1 or 2: which member is closer in Euclidean distance."""
        d1 = np.linalg.norm(x - self.x1)
        d2 = np.linalg.norm(x + self.x1)
        return 1 if d1 <= d2 else 2


def newton_refine(x, g, p: ModelParams, tol: float = NEWTON_TOL) -> np.ndarray:
    a = _matrix_of(g)
    x = np.array(x, dtype=np.float64)
    res = np.max(np.abs(rhs(x, a, p)))
    for _ in range(NEWTON_MAX_ITER):
        if res <= tol:
            return x
        j = jacobian(x, a, p)
        try:
            step = np.linalg.solve(j, -rhs(x, a, p))
        except np.linalg.LinAlgError as exc:
            raise NewtonSingularError(str(exc)) from exc
        lam = 1.0
        while lam > 1e-6:
            x_new = x + lam * step
            res_new = np.max(np.abs(rhs(x_new, a, p)))
            if res_new < res:
                break
            lam *= 0.5
        else:
            raise NoConvergenceError("Newton stalled")
        x, res = x_new, res_new
    if res <= tol:
        return x
    raise NoConvergenceError(f"Newton residual {res} above {tol}")


def find_equilibria(g, p: ModelParams, spec: SpectralSummary | None = None,
                    dt: float = DEFAULT_DT) -> EquilibriumPair | None:
    """The bistable pair above threshold, or None when only the origin exists.

    Seeds along v*, settles by integration, then Newton-refines; the pair
    is oriented so that <w*, x1> > 0.
    """
    u = p.u_value
    if spec is None:
        spec = leading_eigenpair(g)
    th = thresholds(spec, p)
    if not th.pitchfork_valid:
        raise PreconditionViolatedError("pitchfork hypotheses not satisfied")
    if u <= th.u_star:
        return None
    x = settle(0.1 * spec.v_star, g, p, dt=dt)
    x = newton_refine(x, g, p)
    if np.max(np.abs(x)) < 1e-9:
        raise NoConvergenceError("seed settled back to the origin")
    if np.dot(spec.w_star, x) < 0:
        x = -x
    res = float(np.max(np.abs(rhs(x, g, p))))
    return EquilibriumPair(x1=x, residual=res)


SIMPSON_PANELS = 64


def lyapunov_values(traj: Trajectory, g, p: ModelParams) -> np.ndarray:
    """V(x) = sum_i int_0^{f_i(x)} S(eta) d eta along the samples.

    f(x) = At x; each component integral by composite Simpson with 64
    panels.
    """
    a = _matrix_of(g)
    at = p.alpha * np.eye(a.shape[0]) + p.gamma * a
    f = traj.xs @ at.T  # (m, n)
    h = f / SIMPSON_PANELS
    acc = np.zeros_like(f)
    for j in range(SIMPSON_PANELS + 1):
        w = 1.0 if j in (0, SIMPSON_PANELS) else (4.0 if j % 2 == 1 else 2.0)
        acc += w * p.sat(h * j)
    return np.sum(h / 3.0 * acc, axis=1)


@dataclass(frozen=True)
class LyapunovReport:
    values: np.ndarray
    max_positive_jump: float
    nonincreasing: bool


def lyapunov_check(traj: Trajectory, g, p: ModelParams,
                   tol: float = 1e-6) -> LyapunovReport:
    """Check that V is non-increasing along the trajectory (requires u < u*)."""
    u = p.u_value
    spec = leading_eigenpair(g) if isinstance(g, SignedGraph) else None
    if spec is not None:
        th = thresholds(spec, p)
        if u >= th.u_star:
            raise PreconditionViolatedError("Lyapunov decrease requires u < u*")
    v = lyapunov_values(traj, g, p)
    jumps = np.diff(v)
    max_jump = float(jumps.max(initial=0.0))
    return LyapunovReport(values=v, max_positive_jump=max_jump,
                          nonincreasing=bool(max_jump <= tol))


def omega_radius(p: ModelParams, r: float) -> float:
    return r * float(p.u.max()) / p.d


def boundedness_check(traj: Trajectory, p: ModelParams, r: float) -> bool:
    """True iff every sample stays inside Omega_r = {|x_i| < r max(u)/d}."""
    if r <= 1:
        raise InvalidParamsError("r must exceed 1")
    return bool(np.max(np.abs(traj.xs)) < omega_radius(p, r))
