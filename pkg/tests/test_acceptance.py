"""Acceptance suite: one test and one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Criterion 11 audits the trajectories produced by criteria 4-9, so this
module must run as a whole (tests execute in definition order).
"""
import itertools
import math
import time

import numpy as np
import pytest

from opinionnet.dynamics import (
    ModelParams,
    find_equilibria,
    integrate,
    lyapunov_check,
    omega_radius,
)
from opinionnet.fixtures import (
    FIG4_U,
    FIG5_TAU_A,
    default_params,
    fixture_graph,
)
from opinionnet.graphs import (
    SignedGraph,
    SwitchingAssignment,
    balance_certificate,
    random_assignment,
    random_connected_positive_graph,
    switch,
)
from opinionnet.reproduce import run_reproduction
from opinionnet.spectral import leading_eigenpair, thresholds
from opinionnet.sweep import find_origin_crossing, run_sweep
from opinionnet.switching import (
    estimate_epsilon,
    predict_post_switch,
    run_smooth_switch,
)

# (criterion, max |x_i| along the trajectory, omega bound) audited by 11
_BOUNDEDNESS_SAMPLES = []

_CACHE = {}


def _record_bound(criterion, xs, p):
    _BOUNDEDNESS_SAMPLES.append(
        (criterion, float(np.max(np.abs(xs))), omega_radius(p, 2.0)))


def _report(num, name, ok, detail=""):
    line = f"[criterion {num:2d}] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def _fixture_setup():
    if "fixture" not in _CACHE:
        g = fixture_graph()
        p = default_params(10, FIG4_U)
        spec = leading_eigenpair(g)
        pair = find_equilibria(g, p, spec)
        _CACHE["fixture"] = (g, p, spec, pair)
    return _CACHE["fixture"]


def _random_balanced_cases(seed, count, horizon=10.0, u=0.4):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(3, 11))
        g = switch(random_connected_positive_graph(n, rng,
                                                   extra_edges=int(rng.integers(0, n))),
                   random_assignment(n, rng))
        w = random_assignment(n, rng)
        x0 = rng.uniform(-0.5, 0.5, n)
        p = ModelParams.homogeneous(n, u)
        yield g, w, x0, p, horizon


def test_criterion_1_threshold_exactness():
    g = SignedGraph.all_positive_complete(10)
    p = ModelParams.homogeneous(10, 0.0)
    start = time.perf_counter()
    crossing = find_origin_crossing(g, p, 0.05, 0.10)
    elapsed = time.perf_counter() - start
    err = abs(crossing - 1.0 / 12.9)
    _report(1, "threshold exactness on K10", err <= 1e-6 and elapsed < 1.0,
            f"|crossing - u*| = {err:.2e}, {elapsed:.2f} s")


def test_criterion_2_switching_trajectory_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for g, w, x0, p, horizon in _random_balanced_cases(2026, 50):
        t1 = integrate(x0, g, p, dt=0.01, horizon=horizon)
        t2 = integrate(w.theta * x0, switch(g, w), p, dt=0.01, horizon=horizon)
        worst = max(worst, float(np.max(np.abs(w.theta * t1.xs - t2.xs))))
    elapsed = time.perf_counter() - start
    _report(2, "conjugated trajectories coincide",
            worst <= 1e-10 and elapsed < 30.0,
            f"max deviation {worst:.2e}, {elapsed:.1f} s")


def test_criterion_3_complementary_switch_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for g, w, x0, p, horizon in _random_balanced_cases(2027, 50):
        wc = w.complement()
        assert switch(g, w) == switch(g, wc)
        t1 = integrate(w.theta * x0, switch(g, w), p, dt=0.01, horizon=horizon)
        t2 = integrate(wc.theta * x0, switch(g, wc), p, dt=0.01,
                       horizon=horizon)
        worst = max(worst, float(np.max(np.abs(t1.xs + t2.xs))))
    elapsed = time.perf_counter() - start
    _report(3, "complementary sets give the same flow",
            worst <= 1e-10 and elapsed < 30.0,
            f"max deviation {worst:.2e}, {elapsed:.1f} s")


def test_criterion_4_positive_consensus():
    rng = np.random.default_rng(41)
    min_entry = math.inf
    for _ in range(10):
        n = int(rng.integers(5, 12))
        g = random_connected_positive_graph(n, rng, extra_edges=n)
        th = thresholds(leading_eigenpair(g), ModelParams.homogeneous(n, 0.0))
        p = ModelParams.homogeneous(n, 1.2 * th.u_star)
        x0 = rng.uniform(0.01, 0.9 * omega_radius(p, 2.0), n)
        traj = integrate(x0, g, p, dt=0.01, horizon=200.0)
        _record_bound(4, traj.xs, p)
        min_entry = min(min_entry, float(traj.final().min()))
    _report(4, "all-positive graphs reach positive consensus",
            min_entry > 1e-4, f"min final entry {min_entry:.2e}")


def test_criterion_5_exact_bistability():
    g, p, spec, pair = _fixture_setup()
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    radius = omega_radius(p, 2.0)
    counts = [0, 0]
    worst = math.inf
    for _ in range(500):
        x0 = rng.uniform(-radius, radius, 10)
        traj = integrate(x0, g, p, dt=0.01, horizon=200.0)
        _record_bound(5, traj.xs, p)
        x = traj.final()
        d1 = float(np.max(np.abs(x - pair.x1)))
        d2 = float(np.max(np.abs(x - pair.x2)))
        if min(d1, d2) > 1e-4:
            worst = min(d1, d2)
            break
        counts[0 if d1 < d2 else 1] += 1
    elapsed = time.perf_counter() - start
    ok = sum(counts) == 500 and counts[0] > 0 and counts[1] > 0
    _report(5, "500 initial conditions split between exactly two equilibria",
            ok and elapsed < 120.0,
            f"basin counts {counts}, {elapsed:.1f} s" if ok
            else f"stray endpoint at distance {worst:.2e}")


def test_criterion_6_lyapunov_decrease():
    g, _, spec, _ = _fixture_setup()
    th = thresholds(spec, default_params(10, 0.0))
    p = default_params(10, 0.9 * th.u_star)
    rng = np.random.default_rng(6)
    radius = omega_radius(p, 2.0)
    worst_jump = 0.0
    for _ in range(20):
        traj = integrate(rng.uniform(-radius, radius, 10), g, p, dt=0.01,
                         horizon=30.0)
        _record_bound(6, traj.xs, p)
        report = lyapunov_check(traj, g, p)
        worst_jump = max(worst_jump, report.max_positive_jump)
    _report(6, "energy non-increasing below threshold",
            worst_jump <= 1e-6, f"max positive jump {worst_jump:.2e}")


def test_criterion_7_orthant_monotonicity():
    rng = np.random.default_rng(7)
    worst = -math.inf
    for _ in range(5):
        n = int(rng.integers(4, 9))
        g = switch(random_connected_positive_graph(n, rng, extra_edges=4),
                   random_assignment(n, rng))
        theta = balance_certificate(g).theta.theta
        p = ModelParams.homogeneous(n, 0.5)
        for _ in range(20):
            lo = rng.uniform(-0.4, 0.4, n)
            hi = lo + rng.uniform(0.0, 0.3, n)
            ta = integrate(theta * lo, g, p, dt=0.01, horizon=10.0)
            tb = integrate(theta * hi, g, p, dt=0.01, horizon=10.0)
            _record_bound(7, ta.xs, p)
            _record_bound(7, tb.xs, p)
            worst = max(worst, float(np.max(theta * ta.xs - theta * tb.xs)))
    _report(7, "ordered states stay ordered on balanced graphs",
            worst <= 1e-9, f"max order violation {worst:.2e}")


def test_criterion_8_prediction_soundness():
    g, p, spec, pair = _fixture_setup()
    start = time.perf_counter()
    est = estimate_epsilon(g, p, n_directions=100, seed=0)
    x_now = pair.x1
    confident_wrong = 0
    not_confident_small = 0
    checked = 0
    for size in (1, 2, 3, 4):
        for combo in itertools.combinations(range(1, 11), size):
            w = SwitchingAssignment.from_set(10, combo)
            gw = switch(g, w)
            spec_w = leading_eigenpair(gw)
            pair_w = find_equilibria(gw, p, spec_w)
            pred = predict_post_switch(x_now, spec_w, est.eps_hat, pair_w)
            traj = integrate(x_now, gw, p, dt=0.01, horizon=60.0)
            _record_bound(8, traj.xs, p)
            checked += 1
            if not pred.confident:
                not_confident_small += 1
                continue
            if not np.array_equal(np.sign(traj.final()),
                                  np.sign(pred.predicted_equilibrium)):
                confident_wrong += 1
    elapsed = time.perf_counter() - start
    ok = (checked == 385 and confident_wrong == 0
          and not_confident_small == 0 and elapsed < 600.0)
    _report(8, "projection test sound and confident for |W| <= 4",
            ok,
            f"385 switching sets, eps_hat={est.eps_hat:.4f}, "
            f"wrong={confident_wrong}, unconfident={not_confident_small}, "
            f"{elapsed:.0f} s")


def test_criterion_9_edge_relaxation():
    g = fixture_graph()
    p = default_params(10, 0.315)
    tau, t0 = FIG5_TAU_A, 0.1
    res = run_smooth_switch(np.full(10, 0.05), g, [(t0, 1)], p, tau_a=tau,
                            horizon=t0 + 6 * tau)
    dt = res.trajectory.dt
    i = int(round((t0 + 5 * tau) / dt))
    elapsed_t = res.trajectory.ts[i] - t0
    a0 = g.matrix()
    expected = a0 * (2.0 * math.exp(-elapsed_t / tau) - 1.0)
    expected[1:, 1:] = a0[1:, 1:]  # only agent 1's edges relax
    mask = a0 != 0
    rel = float(np.max(np.abs(res.trajectory.edge_states[i][mask]
                              - expected[mask]) / np.abs(expected[mask])))
    _record_bound(9, res.trajectory.xs, p)

    rep = run_reproduction("fig5")
    _record_bound(9, rep.scenario.trajectory.xs, p)
    _report(9, "edge weights relax exponentially and the smooth-switch "
            "scenario splits agents 1-3",
            rel <= 1e-6 and rep.verdict,
            f"relative error at 5 tau = {rel:.2e}, scenario verdict "
            f"{rep.verdict}")


def test_criterion_10_pitchfork_scaling():
    g, _, spec, _ = _fixture_setup()
    p0 = default_params(10, 0.0)
    sweep = run_sweep(g, p0, 0.24, 0.30, 25)
    gw = switch(g, SwitchingAssignment.from_set(10, {1, 2, 3}))
    sweep_w = run_sweep(gw, p0, 0.24, 0.30, 25)
    norm_gap = float(np.max(np.abs(sweep.branch_norm - sweep_w.branch_norm)))
    exponent = sweep.fit_exponent
    _report(10, "square-root branch growth, invariant under switching",
            0.4 <= exponent <= 0.6 and norm_gap <= 1e-6,
            f"fit exponent {exponent:.3f}, switched-sweep gap {norm_gap:.2e}")


def test_criterion_11_boundedness():
    by_criterion = {}
    violations = 0
    for criterion, max_abs, bound in _BOUNDEDNESS_SAMPLES:
        by_criterion.setdefault(criterion, 0)
        by_criterion[criterion] += 1
        if max_abs >= bound:
            violations += 1
    audited = sorted(by_criterion)
    ok = violations == 0 and audited == [4, 5, 6, 7, 8, 9]
    _report(11, "no audited trajectory leaves the invariant box", ok,
            f"{len(_BOUNDEDNESS_SAMPLES)} trajectories from criteria "
            f"{audited}, {violations} violations")
