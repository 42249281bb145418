# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-step RK4 kernels for the tanh opinion dynamics.

Mirrors the API of ``_stepper_py``; selected at import by
:mod:`opinionnet.backend` when the extension built successfully.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport tanh, fabs

cnp.import_array()

BACKEND_NAME = "cython"


cdef inline void _rhs(const double[:, ::1] a, const double[::1] u,
                      double d, double alpha, double gamma,
                      const double[::1] x, double[::1] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, k
    cdef double acc
    for i in range(n):
        acc = 0.0
        for k in range(n):
            acc += a[i, k] * x[k]
        out[i] = -d * x[i] + u[i] * tanh(alpha * x[i] + gamma * acc)


cdef inline void _step(const double[:, ::1] a, const double[::1] u,
                       double d, double alpha, double gamma, double dt,
                       double[::1] x, double[::1] tmp,
                       double[::1] k1, double[::1] k2,
                       double[::1] k3, double[::1] k4, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    _rhs(a, u, d, alpha, gamma, x, k1, n)
    for i in range(n):
        tmp[i] = x[i] + 0.5 * dt * k1[i]
    _rhs(a, u, d, alpha, gamma, tmp, k2, n)
    for i in range(n):
        tmp[i] = x[i] + 0.5 * dt * k2[i]
    _rhs(a, u, d, alpha, gamma, tmp, k3, n)
    for i in range(n):
        tmp[i] = x[i] + dt * k3[i]
    _rhs(a, u, d, alpha, gamma, tmp, k4, n)
    for i in range(n):
        x[i] = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


def rk4_trajectory(a, u, double d, double alpha, double gamma, x0,
                   double dt, Py_ssize_t nsteps):
    """Integrate nsteps RK4 steps; returns the (nsteps+1, n) sample array."""
    cdef const double[:, ::1] am = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] um = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n = am.shape[0]
    out_arr = np.empty((nsteps + 1, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] x = np.array(x0, dtype=np.float64)
    cdef double[::1] tmp = np.empty(n)
    cdef double[::1] k1 = np.empty(n)
    cdef double[::1] k2 = np.empty(n)
    cdef double[::1] k3 = np.empty(n)
    cdef double[::1] k4 = np.empty(n)
    cdef Py_ssize_t s, i
    with nogil:
        for i in range(n):
            out[0, i] = x[i]
        for s in range(nsteps):
            _step(am, um, d, alpha, gamma, dt, x, tmp, k1, k2, k3, k4, n)
            for i in range(n):
                out[s + 1, i] = x[i]
    return out_arr


def rk4_final(a, u, double d, double alpha, double gamma, x0,
              double dt, Py_ssize_t nsteps):
    """Integrate nsteps RK4 steps; returns only the final state."""
    cdef const double[:, ::1] am = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] um = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n = am.shape[0]
    x_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] tmp = np.empty(n)
    cdef double[::1] k1 = np.empty(n)
    cdef double[::1] k2 = np.empty(n)
    cdef double[::1] k3 = np.empty(n)
    cdef double[::1] k4 = np.empty(n)
    cdef Py_ssize_t s
    with nogil:
        for s in range(nsteps):
            _step(am, um, d, alpha, gamma, dt, x, tmp, k1, k2, k3, k4, n)
    return x_arr


def rk4_to_equilibrium(a, u, double d, double alpha, double gamma, x0,
                       double dt, Py_ssize_t max_steps, double tol,
                       Py_ssize_t sustain):
    """Step until ||rhs||_inf < tol for ``sustain`` consecutive steps.

    Returns (x, steps_taken, converged).
    """
    cdef const double[:, ::1] am = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] um = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n = am.shape[0]
    x_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] tmp = np.empty(n)
    cdef double[::1] k1 = np.empty(n)
    cdef double[::1] k2 = np.empty(n)
    cdef double[::1] k3 = np.empty(n)
    cdef double[::1] k4 = np.empty(n)
    cdef Py_ssize_t s = 0, i, run = 0
    cdef double mx
    cdef bint done = False
    with nogil:
        for s in range(max_steps):
            _step(am, um, d, alpha, gamma, dt, x, tmp, k1, k2, k3, k4, n)
            _rhs(am, um, d, alpha, gamma, x, k1, n)
            mx = 0.0
            for i in range(n):
                if fabs(k1[i]) > mx:
                    mx = fabs(k1[i])
            if mx < tol:
                run += 1
                if run >= sustain:
                    done = True
                    break
            else:
                run = 0
    if done:
        return x_arr, s + 1, True
    return x_arr, max_steps, False
