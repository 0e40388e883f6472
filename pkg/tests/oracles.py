"""Brute-force references used across the test suite."""

from __future__ import annotations

import itertools
import math

import numpy as np

from densehyper.hypergraph import Hypergraph


def subsets(n: int):
    for k in range(n + 1):
        for c in itertools.combinations(range(n), k):
            yield np.asarray(c, dtype=np.int64)


def e_in(edges, weights, S) -> float:
    s = set(S.tolist())
    return float(sum(w for e, w in zip(edges, weights) if set(e) <= s))


def best_ratio(f, n, tol=1e-9):
    """Maximum of ``f(S)/|S|`` over nonempty subsets and the family of maximizers."""
    best, family = -math.inf, []
    for S in subsets(n):
        if S.size == 0:
            continue
        d = f(S) / S.size
        if d > best + tol:
            best, family = d, [tuple(S.tolist())]
        elif abs(d - best) <= tol:
            family.append(tuple(S.tolist()))
    return best, family


def min_over_subsets(g, n):
    """``min_S g(S)`` including the empty set."""
    return min(g(S) for S in subsets(n))


def random_hypergraph(rng, n, m, r=5, weighted=False) -> Hypergraph:
    seen, edges = set(), []
    for _ in range(m):
        size = int(rng.integers(2, min(r, n) + 1))
        e = frozenset(rng.choice(n, size=size, replace=False).tolist())
        if e not in seen:
            seen.add(e)
            edges.append(sorted(e))
    w = rng.uniform(0.5, 3.0, size=len(edges)) if weighted else None
    return Hypergraph(edges, n=n, weights=w)


def brute_min_cut(n_nodes, s, t, arcs):
    """Minimum s-t cut by enumerating every side containing ``s`` but not ``t``."""
    others = [v for v in range(n_nodes) if v not in (s, t)]
    best = math.inf
    for k in range(len(others) + 1):
        for c in itertools.combinations(others, k):
            side = set(c) | {s}
            val = sum(cap for a, b, cap in arcs if a in side and b not in side)
            best = min(best, val)
    return best
