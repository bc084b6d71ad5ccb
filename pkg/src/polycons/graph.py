"""Unweighted graph topologies: named families, random graphs, enumeration."""
from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _backend

Edge = tuple[int, int]

ER_MAX_ATTEMPTS = 10_000
ENUMERATION_MAX_N = 6


class GraphError(ValueError):
    """Invalid graph construction or an operation unsupported for the input."""


def _norm_edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True, init=False)
class Graph:
    """Undirected simple graph on nodes ``0..n-1``.

    ``edges`` is stored as a sorted tuple of ``(i, j)`` pairs with ``i < j``.
    """

    n: int
    edges: tuple[Edge, ...]

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        if n < 1:
            raise GraphError(f"node count must be >= 1, got {n}")
        seen = set()
        for e in edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise GraphError(f"self-loop at node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i}, {j}) out of range for n={n}")
            key = _norm_edge(i, j)
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return _norm_edge(i, j) in self._edge_set

    @property
    def _edge_set(self) -> frozenset[Edge]:
        cached = self.__dict__.get("_edge_set_cache")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edge_set_cache", cached)
        return cached

    def adjacency_list(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self.adjacency_list()]

    def is_connected(self) -> bool:
        return all(d >= 0 for d in _bfs(self.adjacency_list(), 0))

    def density(self) -> float:
        pairs = self.n * (self.n - 1) // 2
        return self.m / pairs if pairs else 1.0

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict | str) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["n"], [e[:2] for e in data["edges"]])


def _bfs(adj: list[list[int]], src: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def make_complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def make_star(m: int) -> Graph:
    """Star K(1, m): node 0 is the hub."""
    if m < 1:
        raise GraphError("star needs at least one leaf")
    return Graph(m + 1, ((0, i) for i in range(1, m + 1)))


def make_complete_bipartite(l: int, m: int) -> Graph:
    """K(l, m) with parts ``0..l-1`` and ``l..l+m-1``."""
    if l < 1 or m < 1:
        raise GraphError("both parts need at least one node")
    return Graph(l + m, ((i, l + j) for i in range(l) for j in range(m)))


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def make_path(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def gen_erdos_renyi(n: int, edge_count: int, seed: int) -> Graph:
    """Connected G(n, M) sample by rejection.

    Edge sets are drawn uniformly among all ``edge_count``-subsets of node
    pairs and redrawn until connected, so the result is uniform over
    connected graphs with that many edges. Raises ``GraphError`` when the
    edge count is infeasible or no connected draw occurs within
    ``ER_MAX_ATTEMPTS`` attempts.
    """
    pairs = list(itertools.combinations(range(n), 2))
    if not (n - 1 <= edge_count <= len(pairs)):
        raise GraphError(
            f"edge_count {edge_count} infeasible for a connected graph on {n} nodes"
        )
    rng = np.random.default_rng(seed)
    for _ in range(ER_MAX_ATTEMPTS):
        idx = rng.choice(len(pairs), size=edge_count, replace=False)
        g = Graph(n, (pairs[k] for k in idx))
        if g.is_connected():
            return g
    raise GraphError(
        f"no connected G({n}, {edge_count}) sample within {ER_MAX_ATTEMPTS} attempts"
    )


def edge_count_for_density(n: int, density: float) -> int:
    """Round ``density * n(n-1)/2`` to the nearest integer edge count."""
    return int(round(density * n * (n - 1) / 2))


def diameter(g: Graph) -> float:
    """Largest hop distance between two nodes; ``math.inf`` when disconnected."""
    adj = g.adjacency_list()
    worst = 0
    for src in range(g.n):
        dist = _bfs(adj, src)
        if min(dist) < 0:
            return math.inf
        worst = max(worst, max(dist))
    return worst


def distances(g: Graph) -> np.ndarray:
    adj = g.adjacency_list()
    out = np.empty((g.n, g.n))
    for src in range(g.n):
        d = np.array(_bfs(adj, src), dtype=float)
        d[d < 0] = np.inf
        out[src] = d
    return out


def square_graph(g: Graph) -> Graph:
    """Link every pair of nodes at hop distance 1 or 2."""
    d = distances(g)
    return Graph(
        g.n, ((i, j) for i in range(g.n) for j in range(i + 1, g.n) if d[i, j] <= 2)
    )


def canonical_code(g: Graph) -> int:
    """Isomorphism invariant: minimal adjacency bit-string over all relabelings.

    Brute force over ``n!`` permutations; only meant for tiny graphs.
    """
    if g.n > ENUMERATION_MAX_N:
        raise GraphError(f"canonical form limited to n <= {ENUMERATION_MAX_N}")
    pairs, perm_maps = _perm_tables(g.n)
    index = {p: k for k, p in enumerate(pairs)}
    bits = np.zeros((1, len(pairs)), dtype=np.int64)
    for e in g.edges:
        bits[0, index[e]] = 1
    return int(_backend.canonical_codes(bits, perm_maps)[0])


def _perm_tables(n: int) -> tuple[list[Edge], np.ndarray]:
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: k for k, p in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))
    maps = np.empty((len(perms), max(len(pairs), 1)), dtype=np.int64)
    if not pairs:
        maps[:] = 0
        return pairs, maps[:, :0]
    for r, perm in enumerate(perms):
        for k, (i, j) in enumerate(pairs):
            maps[r, k] = index[_norm_edge(perm[i], perm[j])]
    return pairs, maps


def enumerate_connected_graphs(n: int) -> list[Graph]:
    """One representative per isomorphism class of connected graphs on ``n`` nodes."""
    if n < 1:
        raise GraphError("n must be >= 1")
    if n > ENUMERATION_MAX_N:
        raise GraphError(
            f"brute-force enumeration limited to n <= {ENUMERATION_MAX_N}, got {n}"
        )
    pairs, perm_maps = _perm_tables(n)
    n_pairs = len(pairs)
    if n_pairs == 0:
        return [Graph(1)]
    masks = np.arange(1 << n_pairs, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n_pairs, dtype=np.int64)[None, :]) & 1
    # cheap filter before the n! canonicalization
    bits = bits[bits.sum(axis=1) >= n - 1]
    connected = np.array(
        [Graph(n, (pairs[k] for k in np.flatnonzero(row))).is_connected() for row in bits],
        dtype=bool,
    )
    bits = bits[connected]
    codes = _backend.canonical_codes(bits, perm_maps)
    _, first = np.unique(codes, return_index=True)
    reps = [Graph(n, (pairs[k] for k in np.flatnonzero(bits[i]))) for i in sorted(first)]
    reps.sort(key=lambda g: (g.m, g.edges))
    return reps
