"""Attention-parameter sweeps: origin stability, branch amplitudes, and the
pitchfork-exponent fit near the opinion-forming threshold."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import ModelParams, find_equilibria, jacobian
from .errors import InvalidParamsError, NoConvergenceError
from .spectral import dense_eigenvalues, leading_eigenpair, thresholds


def origin_rightmost_eigenvalue(g, p: ModelParams) -> float:
    """Rightmost real part of the Jacobian spectrum at the origin."""
    j = jacobian(np.zeros(p.n), g, p)
    return dense_eigenvalues(j)[0].real


@dataclass
class SweepResult:
    us: np.ndarray
    branch_norm: np.ndarray        # ||x1*(u)||, 0 below threshold
    branch_proj_pos: np.ndarray    # <w*, x1*>
    branch_proj_neg: np.ndarray    # <w*, x2*>
    origin_stable: np.ndarray      # bool per grid point
    u_star: float
    u_hat: float                   # threshold detected from the grid
    fit_exponent: float            # nan if too few supercritical points


def run_sweep(g, p_base: ModelParams, u_min: float, u_max: float,
              steps: int) -> SweepResult:
    if not u_min < u_max or steps < 2:
        raise InvalidParamsError("need u_min < u_max and at least 2 steps")
    spec = leading_eigenpair(g)
    th = thresholds(spec, p_base.with_u(1.0))
    if not (u_min < th.u_star < u_max):
        raise InvalidParamsError("u range must straddle the threshold u*")
    us = np.linspace(u_min, u_max, steps)
    norms = np.zeros(steps)
    proj_pos = np.zeros(steps)
    proj_neg = np.zeros(steps)
    stable = np.zeros(steps, dtype=bool)
    for i, u in enumerate(us):
        p = p_base.with_u(float(u))
        stable[i] = origin_rightmost_eigenvalue(g, p) < 0
        pair = find_equilibria(g, p, spec) if u > th.u_star else None
        if pair is not None:
            norms[i] = float(np.linalg.norm(pair.x1))
            proj_pos[i] = float(np.dot(spec.w_star, pair.x1))
            proj_neg[i] = float(np.dot(spec.w_star, pair.x2))
    u_hat = th.u_star
    flips = np.flatnonzero(stable[:-1] & ~stable[1:])
    if flips.size:
        j = int(flips[0])
        u_hat = 0.5 * float(us[j] + us[j + 1])
    return SweepResult(us=us, branch_norm=norms, branch_proj_pos=proj_pos,
                       branch_proj_neg=proj_neg, origin_stable=stable,
                       u_star=th.u_star, u_hat=float(u_hat),
                       fit_exponent=fit_branch_exponent(us, norms, th.u_star))


def fit_branch_exponent(us, norms, u_star: float, max_points: int = 8) -> float:
    """Least-squares slope of log||x1*|| against log(u - u*) near threshold."""
    us = np.asarray(us, dtype=np.float64)
    norms = np.asarray(norms, dtype=np.float64)
    mask = (us > u_star + 1e-9) & (norms > 1e-8)
    if mask.sum() < 3:
        return math.nan
    idx = np.flatnonzero(mask)[np.argsort(us[mask])][:max_points]
    slope, _ = np.polyfit(np.log(us[idx] - u_star), np.log(norms[idx]), 1)
    return float(slope)


def find_origin_crossing(g, p_base: ModelParams, u_lo: float, u_hi: float,
                         tol: float = 1e-9, max_iter: int = 200) -> float:
    """Bisect for the u at which the origin's rightmost eigenvalue crosses 0."""
    f_lo = origin_rightmost_eigenvalue(g, p_base.with_u(u_lo))
    f_hi = origin_rightmost_eigenvalue(g, p_base.with_u(u_hi))
    if not f_lo < 0 < f_hi:
        raise InvalidParamsError("bracket does not straddle the crossing")
    for _ in range(max_iter):
        mid = 0.5 * (u_lo + u_hi)
        if u_hi - u_lo <= tol:
            return mid
        if origin_rightmost_eigenvalue(g, p_base.with_u(mid)) < 0:
            u_lo = mid
        else:
            u_hi = mid
    raise NoConvergenceError("crossing bisection did not tighten")


def sweep_to_csv(result: SweepResult) -> str:
    lines = ["u,branch_norm,branch_proj_pos,branch_proj_neg,origin_stable"]
    for i in range(result.us.shape[0]):
        lines.append(
            f"{result.us[i]:.17g},{result.branch_norm[i]:.17g},"
            f"{result.branch_proj_pos[i]:.17g},{result.branch_proj_neg[i]:.17g},"
            f"{int(result.origin_stable[i])}")
    return "\n".join(lines) + "\n"
