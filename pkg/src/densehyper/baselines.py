"""Comparison methods and two instance families that separate them from the exact solvers.

* :func:`greedy_peeling` repeatedly drops the vertex of least marginal value
  and keeps the densest prefix.
* :func:`clique_expand` turns a hypergraph into a weighted graph (unit or
  ``1/|e|`` pair weights), on which :func:`solve_ads_graph` solves the
  seed-anchored graph objective.
* :func:`make_peeling_counterexample` defeats peeling with vertex penalties;
  :func:`make_locality_counterexample` shows that below ``eps = 1`` the
  anchored optimum can be arbitrarily far from the seeds.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .hypergraph import Hypergraph, as_vertex_array
from .objectives import ObjectiveSpec
from .solvers import SolveReport, solve


@dataclass
class PeelingResult:
    best_set: np.ndarray
    best_density: float
    order: np.ndarray
    densities: np.ndarray


def greedy_peeling(H: Hypergraph, penalty=None) -> PeelingResult:
    """Peel ``f(S) = e[S] - p(S)`` down to the empty set.

    The marginal value of ``v`` in the current set is the weight of surviving
    hyperedges through ``v`` minus ``p(v)``; the minimum is removed each step,
    ties going to the lowest id. ``densities[i]`` is the density after ``i``
    removals, so ``densities[0]`` is the full set.
    """
    n = H.n
    p = np.zeros(n) if penalty is None else np.asarray(penalty, dtype=np.float64)
    gain = H.deg - p
    alive_edge = np.ones(H.m, dtype=bool)
    alive = np.ones(n, dtype=bool)
    heap = [(float(g), v) for v, g in enumerate(gain)]
    heapq.heapify(heap)
    value = float(H.weights.sum() - p.sum())
    densities = np.empty(n + 1)
    densities[0] = value / n
    densities[n] = -math.inf
    order = np.empty(n, dtype=np.int64)
    ptr, idx, vptr, vedges = H.edge_ptr, H.edge_idx, H.vertex_ptr, H.vertex_edges
    w = H.weights
    for step in range(n):
        while True:
            g, v = heapq.heappop(heap)
            if alive[v] and g == gain[v]:
                break
        alive[v] = False
        order[step] = v
        value -= gain[v]
        for e in vedges[vptr[v]:vptr[v + 1]]:
            if not alive_edge[e]:
                continue
            alive_edge[e] = False
            for u in idx[ptr[e]:ptr[e + 1]]:
                if u != v:
                    gain[u] -= w[e]
                    heapq.heappush(heap, (float(gain[u]), int(u)))
        if step + 1 < n:
            densities[step + 1] = value / (n - step - 1)
    best = int(np.argmax(densities))
    return PeelingResult(np.sort(order[best:]), float(densities[best]), order, densities)


def peel_set_function(f: Callable, ground) -> PeelingResult:
    """Peeling for an arbitrary set function using direct marginal evaluations.

    Quadratic in ``len(ground)`` evaluations; meant as a cross-check.
    """
    S = list(as_vertex_array(ground).tolist())
    n = len(S)
    densities = np.empty(n + 1)
    densities[n] = -math.inf
    order = []
    for step in range(n):
        arr = np.asarray(S, dtype=np.int64)
        fS = f(arr)
        densities[step] = fS / len(S)
        gains = [fS - f(np.delete(arr, i)) for i in range(len(S))]
        i = min(range(len(S)), key=lambda j: (gains[j], S[j]))
        order.append(S.pop(i))
    order = np.asarray(order, dtype=np.int64)
    best = int(np.argmax(densities))
    return PeelingResult(np.sort(order[best:]), float(densities[best]), order, densities)


@dataclass
class WeightedGraph:
    """Undirected graph with nonnegative edge weights; ``u[i] < v[i]``, no parallel pairs."""

    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=np.int64)
        self.v = np.asarray(self.v, dtype=np.int64)
        self.w = np.asarray(self.w, dtype=np.float64)
        if (self.u == self.v).any():
            raise ValueError("self-loop in weighted graph")
        if (self.w < 0).any():
            raise ValueError("negative edge weight")

    @property
    def m(self) -> int:
        return int(self.u.size)

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n)
        np.add.at(d, self.u, self.w)
        np.add.at(d, self.v, self.w)
        return d

    def weight(self, a: int, b: int) -> float:
        a, b = min(a, b), max(a, b)
        hit = (self.u == a) & (self.v == b)
        return float(self.w[hit].sum())

    def to_hypergraph(self, labels=None) -> Hypergraph:
        """Rank-2 weighted hypergraph view, on which the reduction engine runs unchanged."""
        keep = self.w > 0
        edges = np.stack([self.u[keep], self.v[keep]], axis=1)
        return Hypergraph(edges, n=self.n, weights=self.w[keep], labels=labels)


def clique_expand(H: Hypergraph, mode: str = "wce", cap: int = 1000) -> WeightedGraph:
    """Replace each hyperedge by a clique of weight 1 (``uce``) or ``w_e/|e|`` (``wce``)."""
    mode = mode.lower()
    if mode not in ("uce", "wce"):
        raise ValueError(f"unknown expansion mode {mode!r}")
    if H.m and H.sizes.max() > cap:
        raise ValueError(f"hyperedge of size {int(H.sizes.max())} exceeds expansion cap {cap}")
    us, vs, ws = [], [], []
    for k in np.unique(H.sizes):
        ids = np.flatnonzero(H.sizes == k)
        rows = np.stack([H.edge(e) for e in ids])
        pairs = np.array(list(itertools.combinations(range(int(k)), 2)))
        us.append(rows[:, pairs[:, 0]].ravel())
        vs.append(rows[:, pairs[:, 1]].ravel())
        per = H.weights[ids] if mode == "uce" else H.weights[ids] / k
        ws.append(np.repeat(per, len(pairs)))
    if not us:
        return WeightedGraph(H.n, [], [], [])
    u, v, w = np.concatenate(us), np.concatenate(vs), np.concatenate(ws)
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    key, inv = np.unique(lo * H.n + hi, return_inverse=True)
    merged = np.bincount(inv, weights=w)
    return WeightedGraph(H.n, key // H.n, key % H.n, merged)


def solve_ads_graph(G: WeightedGraph, R, method: str = "local") -> SolveReport:
    """Exact anchored graph density ``(2 e[S] - vol(S \\ R)) / |S|`` on a weighted graph.

    Solved as the anchored hypergraph objective with ``eps = 1`` on the rank-2
    view; the reported density is doubled to the graph normalization.
    """
    H = G.to_hypergraph()
    R = as_vertex_array(R)
    spec = ObjectiveSpec.adsh(R, 1.0)
    options = {"clamp": False} if method == "local" else {}
    report = solve(H, spec, method=method, **options)
    report.best_density *= 2.0
    report.objective = {"objective": "ads-graph", "n_seeds": int(R.size)}
    return report


@dataclass
class Counterexample:
    """A constructed instance with its seed set and (where relevant) vertex penalty."""

    H: Hypergraph
    seeds: np.ndarray
    penalty: np.ndarray | None
    optimum: float | None
    groups: dict


def _clique(vertices):
    return [list(p) for p in itertools.combinations(vertices, 2)]


def make_peeling_counterexample(a: int) -> Counterexample:
    """Clique on ``a`` seeds joined by one edge to a clique on ``9a`` penalized vertices.

    Each non-seed vertex carries penalty ``2b/3`` with ``b = 9a``; the optimum
    is the seed clique at density ``(a - 1)/2`` while peeling removes the
    seeds first and never sees a positive density.
    """
    if a < 2:
        raise ValueError("a must be at least 2")
    b = 9 * a
    left = list(range(a))
    right = list(range(a, a + b))
    edges = _clique(left) + _clique(right) + [[a - 1, a]]
    H = Hypergraph(edges, n=a + b)
    p = np.zeros(a + b)
    p[a:] = 2.0 * b / 3.0
    return Counterexample(H, np.asarray(left), p, (a - 1) / 2.0,
                          {"R": np.asarray(left), "right": np.asarray(right)})


def make_locality_counterexample(a: int, b: int, c: int) -> Counterexample:
    """Seed clique ``A`` (size ``a``), complete bipartite ``A x B`` and ``B x C``.

    ``B`` and ``C`` are independent sets. For ``eps < 1`` and ``c`` large the
    anchored optimum must contain all of ``B`` and ``C``.
    """
    if min(a, b, c) < 1 or a < 2:
        raise ValueError("need a >= 2 and b, c >= 1")
    A = np.arange(a)
    B = np.arange(a, a + b)
    C = np.arange(a + b, a + b + c)
    edges = _clique(A.tolist())
    edges += [[x, y] for x in A.tolist() for y in B.tolist()]
    edges += [[x, y] for x in B.tolist() for y in C.tolist()]
    H = Hypergraph(edges, n=a + b + c)
    return Counterexample(H, A, None, None, {"A": A, "B": B, "C": C})
