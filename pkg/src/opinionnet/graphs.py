"""Signed directed graphs, switching assignments, and structural balance.

Vertices are 1-based in every external interface (file formats, error
messages, CLI) and 0-based in array indices internally.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    DuplicateEdgeError,
    IndexOutOfRangeError,
    SelfLoopError,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SignedGraph:
    """Simple directed graph with edge signs in {-1, +1}.

    ``adjacency[i, k]`` is the sign of the edge i -> k (0 if absent), with
    zero diagonal. Instances are immutable; build them with
    :func:`validate_graph` or :meth:`from_adjacency`.
    """

    n: int
    adjacency: np.ndarray  # (n, n) int8, entries in {-1, 0, 1}

    @property
    def edges(self) -> frozenset[tuple[int, int, int]]:
        """Edge set as 1-based (i, k, sign) triples."""
        ii, kk = np.nonzero(self.adjacency)
        return frozenset(
            (int(i) + 1, int(k) + 1, int(self.adjacency[i, k])) for i, k in zip(ii, kk)
        )

    @classmethod
    def from_adjacency(cls, adjacency) -> "SignedGraph":
        a = np.asarray(adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatchError("adjacency must be square")
        n = a.shape[0]
        if n < 1:
            raise IndexOutOfRangeError("need at least one vertex")
        if not np.isin(a, (-1, 0, 1)).all():
            raise ValueError("adjacency entries must be in {-1, 0, 1}")
        diag = np.flatnonzero(np.diagonal(a))
        if diag.size:
            raise SelfLoopError(int(diag[0]) + 1)
        return cls(n=n, adjacency=_frozen(a.astype(np.int8)))

    @classmethod
    def all_positive_complete(cls, n: int) -> "SignedGraph":
        a = np.ones((n, n), dtype=np.int8) - np.eye(n, dtype=np.int8)
        return cls.from_adjacency(a)

    def matrix(self) -> np.ndarray:
        """Adjacency as a fresh float64 matrix (for numerics)."""
        return self.adjacency.astype(np.float64)

    def is_all_positive(self) -> bool:
        return bool((self.adjacency >= 0).all())

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    def __eq__(self, other):
        return (
            isinstance(other, SignedGraph)
            and self.n == other.n
            and np.array_equal(self.adjacency, other.adjacency)
        )

    def __hash__(self):
        return hash((self.n, self.adjacency.tobytes()))


@dataclass(frozen=True)
class SwitchingAssignment:
    """Per-vertex sign flip: theta[i] in {-1, +1}, 0-based indexing."""

    theta: np.ndarray  # (n,) int8

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=np.int8)
        if t.ndim != 1 or not np.isin(t, (-1, 1)).all():
            raise ValueError("theta entries must be +1 or -1")
        object.__setattr__(self, "theta", _frozen(t))

    @classmethod
    def from_set(cls, n: int, switched: set[int] | list[int]) -> "SwitchingAssignment":
        """Build from a 1-based vertex set W (theta = -1 on W)."""
        t = np.ones(n, dtype=np.int8)
        for v in switched:
            if not 1 <= v <= n:
                raise IndexOutOfRangeError(f"vertex {v} not in 1..{n}")
            t[v - 1] = -1
        return cls(t)

    @classmethod
    def identity(cls, n: int) -> "SwitchingAssignment":
        return cls(np.ones(n, dtype=np.int8))

    @property
    def n(self) -> int:
        return self.theta.shape[0]

    @property
    def switching_set(self) -> frozenset[int]:
        """The 1-based set W of vertices with theta = -1."""
        return frozenset(int(i) + 1 for i in np.flatnonzero(self.theta < 0))

    def complement(self) -> "SwitchingAssignment":
        return SwitchingAssignment(-self.theta)

    def matrix(self) -> np.ndarray:
        return np.diag(self.theta.astype(np.float64))

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Entrywise theta * x."""
        return self.theta * np.asarray(x)

    def __eq__(self, other):
        return isinstance(other, SwitchingAssignment) and np.array_equal(
            self.theta, other.theta
        )

    def __hash__(self):
        return hash(self.theta.tobytes())


@dataclass(frozen=True)
class BalanceCertificate:
    """Outcome of structural-balance certification.

    Exactly one of ``theta`` (balanced) / ``witness_cycle`` (unbalanced)
    is set. The witness is a closed vertex walk given as (i, k, sign)
    constraint triples (1-based) whose sign product is -1.
    """

    balanced: bool
    theta: SwitchingAssignment | None = None
    witness_cycle: tuple[tuple[int, int, int], ...] | None = field(default=None)


def validate_graph(n: int, edges) -> SignedGraph:
    """Build a SignedGraph from a 1-based (i, k, sign) edge list."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise IndexOutOfRangeError("n must be an integer >= 1")
    a = np.zeros((n, n), dtype=np.int8)
    seen = set()
    for e in edges:
        i, k, s = int(e[0]), int(e[1]), int(e[2])
        if not (1 <= i <= n and 1 <= k <= n):
            raise IndexOutOfRangeError(f"edge ({i}, {k}) outside 1..{n}")
        if i == k:
            raise SelfLoopError(i)
        if (i, k) in seen:
            raise DuplicateEdgeError(i, k)
        if s not in (-1, 1):
            raise ValueError(f"edge ({i}, {k}) has sign {s}, expected +1 or -1")
        seen.add((i, k))
        a[i - 1, k - 1] = s
    return SignedGraph(n=n, adjacency=_frozen(a))


def is_strongly_connected(g: SignedGraph) -> bool:
    """True iff a directed path exists between every ordered vertex pair."""
    mask = g.adjacency != 0
    return _reaches_all(mask) and _reaches_all(mask.T)


def _reaches_all(mask: np.ndarray) -> bool:
    n = mask.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for w in np.flatnonzero(mask[v]):
            if not seen[w]:
                seen[w] = True
                stack.append(int(w))
    return bool(seen.all())


def switch(g: SignedGraph, w: SwitchingAssignment) -> SignedGraph:
    """Conjugate the adjacency by diag(theta): a'_ik = theta_i a_ik theta_k."""
    if w.n != g.n:
        raise DimensionMismatchError(f"assignment length {w.n} != n {g.n}")
    t = w.theta.astype(np.int8)
    a = (t[:, None] * g.adjacency) * t[None, :]
    return SignedGraph(n=g.n, adjacency=_frozen(a.astype(np.int8)))


def compose(w1: SwitchingAssignment, w2: SwitchingAssignment) -> SwitchingAssignment:
    """Entrywise product; switching by w1 then w2 equals switching once by this."""
    if w1.n != w2.n:
        raise DimensionMismatchError("assignment lengths differ")
    return SwitchingAssignment(w1.theta * w2.theta)


def balance_certificate(g: SignedGraph) -> BalanceCertificate:
    """Certify structural balance by 2-coloring the sign-constraint graph.

    Vertices i, k are constrained whenever an edge connects them in either
    direction. Opposite-sign antiparallel edges form an odd 2-cycle and make
    the graph unbalanced immediately. Otherwise a BFS spanning forest fixes
    theta and every non-tree constraint is checked; a violated one closes an
    odd-negative cycle with the tree paths, which is returned as witness.
    """
    n = g.n
    a = g.adjacency
    # Constraint sign between unordered pairs; antiparallel disagreement -> odd 2-cycle.
    for i in range(n):
        for k in range(i + 1, n):
            if a[i, k] != 0 and a[k, i] != 0 and a[i, k] != a[k, i]:
                witness = (
                    (i + 1, k + 1, int(a[i, k])),
                    (k + 1, i + 1, int(a[k, i])),
                )
                return BalanceCertificate(balanced=False, witness_cycle=witness)

    sign = np.zeros((n, n), dtype=np.int8)
    for i in range(n):
        for k in range(n):
            if a[i, k] != 0:
                sign[i, k] = a[i, k]
                sign[k, i] = a[i, k]

    theta = np.zeros(n, dtype=np.int8)
    parent = np.full(n, -1, dtype=np.int64)
    for root in range(n):
        if theta[root] != 0:
            continue
        theta[root] = 1
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u in np.flatnonzero(sign[v]):
                u = int(u)
                if theta[u] == 0:
                    theta[u] = theta[v] * sign[v, u]
                    parent[u] = v
                    queue.append(u)
                elif theta[u] != theta[v] * sign[v, u]:
                    return BalanceCertificate(
                        balanced=False,
                        witness_cycle=_witness(v, u, parent, sign),
                    )
    if theta[0] < 0:
        # Normalize theta(1) = +1; flips only vertex 1's component, which is
        # the component rooted at 0 and already internally consistent.
        comp = _component_of(0, sign)
        theta[comp] = -theta[comp]
    return BalanceCertificate(balanced=True, theta=SwitchingAssignment(theta))


def _component_of(root: int, sign: np.ndarray) -> np.ndarray:
    n = sign.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[root] = True
    stack = [root]
    while stack:
        v = stack.pop()
        for u in np.flatnonzero(sign[v]):
            if not seen[u]:
                seen[u] = True
                stack.append(int(u))
    return np.flatnonzero(seen)


def _witness(v: int, u: int, parent: np.ndarray, sign: np.ndarray):
    """Close the odd cycle formed by tree paths to v, u plus the edge (v, u)."""

    def path_to_root(x):
        p = [x]
        while parent[p[-1]] >= 0:
            p.append(int(parent[p[-1]]))
        return p

    pv, pu = path_to_root(v), path_to_root(u)
    common = set(pv) & set(pu)
    lca = next(x for x in pv if x in common)
    cyc_vertices = pv[: pv.index(lca) + 1] + list(reversed(pu[: pu.index(lca)]))
    cyc_vertices.append(v)  # close the walk v -> ... -> lca -> ... -> u -> v
    triples = []
    for x, y in zip(cyc_vertices[:-1], cyc_vertices[1:]):
        triples.append((x + 1, y + 1, int(sign[x, y])))
    return tuple(triples)


# ---------------------------------------------------------------------------
# File format and test generators


def graph_to_json(g: SignedGraph) -> str:
    return json.dumps(g.to_dict(), separators=(", ", ": "))


def graph_from_dict(d: dict) -> SignedGraph:
    return validate_graph(int(d["n"]), d["edges"])


def load_graph(path) -> SignedGraph:
    with open(path) as fh:
        return graph_from_dict(json.load(fh))


def save_graph(g: SignedGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(graph_to_json(g) + "\n")


def random_connected_positive_graph(
    n: int, rng: np.random.Generator, extra_edges: int = 0
) -> SignedGraph:
    """Directed ring through a random vertex order plus random symmetric
    chords; all-positive, strongly connected by construction."""
    order = rng.permutation(n)
    a = np.zeros((n, n), dtype=np.int8)
    for i in range(n):
        a[order[i], order[(i + 1) % n]] = 1
    added = 0
    attempts = 0
    while added < extra_edges and attempts < 100 * (extra_edges + 1):
        attempts += 1
        i, k = rng.integers(0, n, size=2)
        if i == k or a[i, k] != 0:
            continue
        a[i, k] = 1
        a[k, i] = 1
        added += 1
    return SignedGraph.from_adjacency(a)


def random_assignment(n: int, rng: np.random.Generator) -> SwitchingAssignment:
    return SwitchingAssignment(rng.choice(np.array([-1, 1], dtype=np.int8), size=n))
