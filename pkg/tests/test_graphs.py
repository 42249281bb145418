import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opinionnet.errors import (
    DimensionMismatchError,
    DuplicateEdgeError,
    IndexOutOfRangeError,
    SelfLoopError,
)
from opinionnet.graphs import (
    SignedGraph,
    SwitchingAssignment,
    balance_certificate,
    compose,
    graph_from_dict,
    graph_to_json,
    is_strongly_connected,
    random_assignment,
    random_connected_positive_graph,
    switch,
    validate_graph,
)


def directed_cycle(n, sign=1):
    return validate_graph(n, [(i, i % n + 1, sign) for i in range(1, n + 1)])


class TestValidateGraph:
    def test_valid_three_cycle(self):
        g = validate_graph(3, [(1, 2, 1), (2, 3, 1), (3, 1, 1)])
        assert g.n == 3
        assert g.adjacency[0, 1] == 1
        assert g.edges == {(1, 2, 1), (2, 3, 1), (3, 1, 1)}

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoopError) as exc:
            validate_graph(2, [(1, 1, 1)])
        assert exc.value.vertex == 1

    def test_duplicate_edge_rejected(self):
        with pytest.raises(DuplicateEdgeError):
            validate_graph(2, [(1, 2, 1), (1, 2, -1)])

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            validate_graph(2, [(1, 3, 1)])

    def test_zero_vertices_rejected(self):
        with pytest.raises(IndexOutOfRangeError):
            validate_graph(0, [])


class TestStrongConnectivity:
    def test_directed_cycle_connected(self):
        assert is_strongly_connected(directed_cycle(3))

    def test_out_star_not_connected(self):
        g = validate_graph(3, [(1, 2, 1), (1, 3, 1)])
        assert not is_strongly_connected(g)

    def test_complete_graph_connected(self):
        rng = np.random.default_rng(3)
        a = rng.choice([-1, 1], size=(10, 10))
        np.fill_diagonal(a, 0)
        assert is_strongly_connected(SignedGraph.from_adjacency(a))


class TestSwitch:
    def test_k3_switch_vertex_one(self):
        g = SignedGraph.all_positive_complete(3)
        gw = switch(g, SwitchingAssignment.from_set(3, {1}))
        assert gw.adjacency[0, 1] == -1 and gw.adjacency[1, 0] == -1
        assert gw.adjacency[0, 2] == -1 and gw.adjacency[2, 0] == -1
        assert gw.adjacency[1, 2] == 1 and gw.adjacency[2, 1] == 1

    def test_empty_set_is_identity(self):
        g = directed_cycle(5)
        assert switch(g, SwitchingAssignment.identity(5)) == g

    def test_full_set_is_identity(self):
        g = directed_cycle(5, sign=-1)
        assert switch(g, SwitchingAssignment.from_set(5, range(1, 6))) == g

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            switch(directed_cycle(3), SwitchingAssignment.identity(4))

    def test_preserves_magnitudes(self):
        rng = np.random.default_rng(5)
        g = random_connected_positive_graph(7, rng, extra_edges=4)
        w = random_assignment(7, rng)
        assert np.array_equal(np.abs(switch(g, w).adjacency), np.abs(g.adjacency))


class TestCompose:
    def test_self_composition_is_identity(self):
        w = SwitchingAssignment.from_set(4, {1})
        assert compose(w, w) == SwitchingAssignment.identity(4)

    def test_disjoint_sets_union(self):
        w = compose(SwitchingAssignment.from_set(4, {1}),
                    SwitchingAssignment.from_set(4, {2}))
        assert w.switching_set == {1, 2}

    def test_complement_composes_to_full_flip(self):
        w = SwitchingAssignment.from_set(6, {2, 4})
        full = compose(w, w.complement())
        assert (full.theta == -1).all()


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_switch_involution_and_composition(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 10))
    g = random_connected_positive_graph(n, rng, extra_edges=int(rng.integers(0, n)))
    w1 = random_assignment(n, rng)
    w2 = random_assignment(n, rng)
    assert switch(switch(g, w1), w1) == g
    assert switch(switch(g, w1), w2) == switch(g, compose(w1, w2))


class TestBalanceCertificate:
    def test_all_positive_is_balanced_with_trivial_theta(self):
        cert = balance_certificate(SignedGraph.all_positive_complete(4))
        assert cert.balanced
        assert (cert.theta.theta == 1).all()

    def test_one_negative_triangle_unbalanced(self):
        g = validate_graph(3, [(1, 2, 1), (2, 1, 1), (2, 3, 1), (3, 2, 1),
                               (1, 3, -1), (3, 1, -1)])
        cert = balance_certificate(g)
        assert not cert.balanced
        signs = [s for _, _, s in cert.witness_cycle]
        assert sum(1 for s in signs if s < 0) % 2 == 1

    def test_antiparallel_sign_conflict_unbalanced(self):
        g = validate_graph(2, [(1, 2, 1), (2, 1, -1)])
        cert = balance_certificate(g)
        assert not cert.balanced
        assert len(cert.witness_cycle) == 2

    def test_switched_positive_graph_recovers_assignment(self):
        g = SignedGraph.all_positive_complete(10)
        w = SwitchingAssignment.from_set(10, {1, 2, 3})
        cert = balance_certificate(switch(g, w))
        assert cert.balanced
        # up to global sign; normalization pins theta(1) = +1
        assert cert.theta.switching_set in ({1, 2, 3}, set(range(4, 11)))
        assert cert.theta.theta[0] == 1

    def test_certificate_theta_restores_nonnegative(self):
        rng = np.random.default_rng(77)
        for seed in range(10):
            g0 = random_connected_positive_graph(8, rng, extra_edges=5)
            gw = switch(g0, random_assignment(8, rng))
            cert = balance_certificate(gw)
            assert cert.balanced
            assert switch(gw, cert.theta).is_all_positive()


def test_graph_json_round_trip(tmp_path):
    g = switch(SignedGraph.all_positive_complete(5),
               SwitchingAssignment.from_set(5, {2, 5}))
    assert graph_from_dict(json.loads(graph_to_json(g))) == g
