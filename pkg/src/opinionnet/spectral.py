"""Eigen-analysis of signed adjacency matrices and bifurcation thresholds.

Two routes to the leading eigenvalue are kept deliberately independent:
power iteration on the nonnegative representative (the hot path, convergent
by Perron-Frobenius once shifted), and a dense solve used for the full
spectrum and as a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDirectionError,
    DimensionMismatchError,
    InvalidParamsError,
    NoConvergenceError,
    NoRealDominantEigenvalueError,
    NotStronglyConnectedError,
)
from .graphs import SignedGraph, balance_certificate, is_strongly_connected

SIMPLE_GAP_RTOL = 1e-8


@dataclass(frozen=True)
class SpectralSummary:
    """Leading eigen-data of a signed adjacency matrix.

    ``v_star`` has unit Euclidean norm; ``w_star`` is scaled so that
    <w_star, v_star> = 1. ``w_star_unit`` is the unit-norm copy used by
    basin-margin computations.
    """

    lambda_star: float
    v_star: np.ndarray
    w_star: np.ndarray
    w_star_unit: np.ndarray
    lambda2_re: float
    simple: bool

    @property
    def n(self) -> int:
        return self.v_star.shape[0]

    def cubic_coefficient(self) -> float:
        """<w_star, v_star^3> with the cube taken elementwise."""
        return float(np.dot(self.w_star, self.v_star**3))

    def residuals(self, a: np.ndarray) -> tuple[float, float]:
        r_v = float(np.max(np.abs(a @ self.v_star - self.lambda_star * self.v_star)))
        r_w = float(np.max(np.abs(a.T @ self.w_star - self.lambda_star * self.w_star)))
        return r_v, r_w


@dataclass(frozen=True)
class BifurcationThresholds:
    u_star: float
    u_two: float  # math.inf when the uniqueness window is unbounded
    cubic_ok: bool
    pitchfork_valid: bool


def dense_eigenvalues(m) -> list[complex]:
    """All eigenvalues of a real square matrix, sorted by descending real part.

    Backed by LAPACK's Hessenberg + shifted-QR driver (numpy.linalg.eigvals).
    """
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("matrix must be square")
    if a.shape[0] > 256:
        raise DimensionMismatchError("dense solver limited to n <= 256")
    try:
        ev = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    return sorted((complex(z) for z in ev), key=lambda z: (-z.real, -abs(z.imag)))


def _power_iteration(
    b: np.ndarray, tol: float = 1e-12, max_iter: int = 100_000
) -> tuple[float, np.ndarray]:
    """Dominant eigenpair of a primitive nonnegative matrix."""
    n = b.shape[0]
    v = np.full(n, 1.0 / math.sqrt(n))
    mu_prev = math.inf
    for _ in range(max_iter):
        bv = b @ v
        nrm = float(np.linalg.norm(bv))
        if nrm == 0.0:
            return 0.0, v
        v_new = bv / nrm
        mu = float(v_new @ (b @ v_new))
        if abs(mu - mu_prev) < tol and np.max(np.abs(b @ v_new - mu * v_new)) < 1e-9:
            return mu, v_new
        mu_prev = mu
        v = v_new
    raise NoConvergenceError("power iteration exceeded iteration cap")


def _second_real_part(eigs: list[complex], lambda_star: float) -> float:
    """Largest real part among eigenvalues excluding (one copy of) lambda_star."""
    rest = list(eigs)
    rest.pop(int(np.argmin([abs(z - lambda_star) for z in rest])))
    if not rest:
        return -math.inf
    return max(z.real for z in rest)


def leading_eigenpair(g: SignedGraph) -> SpectralSummary:
    """Leading eigenvalue with right/left eigenvectors, <w*, v*> = 1.

    Balanced graphs go through the nonnegative representative: power-iterate
    A+ + I (the shift makes an irreducible nonnegative matrix primitive, so
    the iteration always converges) and conjugate the eigenvectors back.
    Unbalanced graphs fall back to the dense solver and must present a real,
    simple, strictly dominant eigenvalue.
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnectedError("leading eigenpair needs strong connectivity")
    a = g.matrix()
    eigs = dense_eigenvalues(a)
    cert = balance_certificate(g)
    if cert.balanced:
        theta = cert.theta.theta.astype(np.float64)
        a_pos = (theta[:, None] * a) * theta[None, :]
        b = a_pos + np.eye(g.n)
        mu_r, v_pos = _power_iteration(b)
        mu_l, w_pos = _power_iteration(b.T)
        lam = 0.5 * (mu_r + mu_l) - 1.0
        v_pos = np.abs(v_pos)  # Perron vector of the positive representative
        w_pos = np.abs(w_pos)
        v = theta * v_pos
        w = theta * w_pos
    else:
        lam_c = eigs[0]
        gap = lam_c.real - (eigs[1].real if len(eigs) > 1 else -math.inf)
        if abs(lam_c.imag) > 1e-9 or gap <= SIMPLE_GAP_RTOL * max(1.0, abs(lam_c)):
            raise NoRealDominantEigenvalueError(
                "no real, simple, strictly dominant eigenvalue"
            )
        lam = lam_c.real
        v = _real_eigvec(a, lam)
        w = _real_eigvec(a.T, lam)
    v = v / np.linalg.norm(v)
    w_unit = w / np.linalg.norm(w)
    wv = float(np.dot(w, v))
    if wv == 0.0:
        raise NoRealDominantEigenvalueError("left/right eigenvectors are orthogonal")
    w = w / wv
    if np.dot(w_unit, v) < 0:
        w_unit = -w_unit
    lambda2 = _second_real_part(eigs, lam)
    simple = lam - lambda2 > SIMPLE_GAP_RTOL * max(1.0, abs(lam))
    return SpectralSummary(
        lambda_star=float(lam),
        v_star=v,
        w_star=w,
        w_star_unit=w_unit,
        lambda2_re=float(lambda2),
        simple=bool(simple),
    )


def _real_eigvec(a: np.ndarray, lam: float) -> np.ndarray:
    ev, vecs = np.linalg.eig(a)
    idx = int(np.argmin(np.abs(ev - lam)))
    v = vecs[:, idx]
    if np.max(np.abs(v.imag)) > 1e-9 * np.max(np.abs(v.real)):
        raise NoRealDominantEigenvalueError("dominant eigenvector is not real")
    v = v.real
    # Fix a deterministic global sign: largest-magnitude entry positive.
    j = int(np.argmax(np.abs(v)))
    return v if v[j] > 0 else -v


def thresholds(spec: SpectralSummary, params) -> BifurcationThresholds:
    """Opinion-forming threshold u* and uniqueness-window bound u2."""
    d, alpha, gamma = params.d, params.alpha, params.gamma
    if d <= 0 or gamma <= 0:
        raise InvalidParamsError("d and gamma must be positive")
    denom = alpha + gamma * spec.lambda_star
    if denom <= 0:
        raise DegenerateDirectionError("alpha + gamma * lambda_star must be positive")
    u_star = d / denom
    denom2 = alpha + gamma * spec.lambda2_re
    u_two = d / denom2 if denom2 > 0 else math.inf
    cubic_ok = spec.cubic_coefficient() > 0
    return BifurcationThresholds(
        u_star=float(u_star),
        u_two=float(u_two),
        cubic_ok=bool(cubic_ok),
        pitchfork_valid=bool(spec.simple and cubic_ok),
    )
