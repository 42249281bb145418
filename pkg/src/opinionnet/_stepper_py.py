"""Pure-numpy fixed-step RK4 kernels (fallback backend).

Same call signatures as the compiled extension ``_stepper``. All kernels
assume the tanh saturation; other saturations go through the generic
python path in :mod:`opinionnet.dynamics`.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def _rhs(a, u, d, alpha, gamma, x):
    return -d * x + u * np.tanh(alpha * x + gamma * (a @ x))


def _step(a, u, d, alpha, gamma, x, dt):
    k1 = _rhs(a, u, d, alpha, gamma, x)
    k2 = _rhs(a, u, d, alpha, gamma, x + 0.5 * dt * k1)
    k3 = _rhs(a, u, d, alpha, gamma, x + 0.5 * dt * k2)
    k4 = _rhs(a, u, d, alpha, gamma, x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_trajectory(a, u, d, alpha, gamma, x0, dt, nsteps):
    """Integrate nsteps RK4 steps; returns the (nsteps+1, n) sample array."""
    n = x0.shape[0]
    out = np.empty((nsteps + 1, n))
    x = np.array(x0, dtype=np.float64)
    out[0] = x
    for s in range(nsteps):
        x = _step(a, u, d, alpha, gamma, x, dt)
        out[s + 1] = x
    return out


def rk4_final(a, u, d, alpha, gamma, x0, dt, nsteps):
    """Integrate nsteps RK4 steps; returns only the final state."""
    x = np.array(x0, dtype=np.float64)
    for _ in range(nsteps):
        x = _step(a, u, d, alpha, gamma, x, dt)
    return x


def rk4_to_equilibrium(a, u, d, alpha, gamma, x0, dt, max_steps, tol, sustain):
    """Step until ||rhs||_inf < tol for ``sustain`` consecutive steps.

    Returns (x, steps_taken, converged).
    """
    x = np.array(x0, dtype=np.float64)
    run = 0
    for s in range(max_steps):
        x = _step(a, u, d, alpha, gamma, x, dt)
        if np.max(np.abs(_rhs(a, u, d, alpha, gamma, x))) < tol:
            run += 1
            if run >= sustain:
                return x, s + 1, True
        else:
            run = 0
    return x, max_steps, False
