"""Planted dense clusters, seed sampling by random walks, and the recovery benchmark."""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baselines import clique_expand, greedy_peeling, solve_ads_graph
from .hypergraph import Hypergraph, as_vertex_array, preprocess
from .objectives import ObjectiveSpec
from .solvers import CutOracle, binary_search, bisection_steps, density_improvement, solve

DESK = {"n": 500, "k": 15, "m2": 5000}
FULL = {"n": 1000, "k": 30, "m2": 50000}

METHODS = ("adsh", "adshf", "wce+ads", "uce+ads", "peeling")
CSV_FIELDS = ("method", "m1", "m2", "cluster", "seed_idx", "f1", "density",
              "solver_iters", "nodes_explored", "millis")


@dataclass
class PlantedInstance:
    """A preprocessed planted hypergraph.

    ``assignment[x]`` is the cluster (``1..k``) of raw vertex ``x``;
    ``clusters[v]`` is the cluster of dense vertex ``v`` of ``H``.
    """

    H: Hypergraph
    assignment: np.ndarray
    params: dict
    n_raw_edges: int
    raw_sizes: np.ndarray = field(repr=False)

    @property
    def clusters(self) -> np.ndarray:
        return self.assignment[self.H.labels]

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.clusters == cluster)


def hyperedge_sizes(rng: np.random.Generator, count: int, p_stop: float, max_size: int) -> np.ndarray:
    """Sizes of ``count`` hyperedges: two vertices, then one more until a stop (prob ``p_stop``) or the cap."""
    extra = rng.geometric(p_stop, size=count) - 1
    return 2 + np.minimum(extra, max_size - 2)


def _draw_distinct(rng, pool: np.ndarray, size: int) -> np.ndarray:
    size = min(size, pool.size)
    while True:
        draw = pool[rng.integers(0, pool.size, size=2 * size + 2)]
        _, first = np.unique(draw, return_index=True)
        if first.size >= size:
            return draw[np.sort(first)[:size]]


def generate_planted(n: int = DESK["n"], k: int = DESK["k"], m1: int = 0, m2: int = DESK["m2"],
                     p_stop: float = 0.2, max_size: int = 12, seed=0) -> PlantedInstance:
    """Random hypergraph with ``k`` planted clusters.

    Vertices get uniform cluster labels. ``m1`` background hyperedges draw from
    all vertices and ``m2`` cluster hyperedges draw from one uniformly chosen
    cluster each. Duplicates are removed afterwards by :func:`preprocess`.
    """
    if not n >= k >= 1:
        raise ValueError("need n >= k >= 1")
    if not 0 < p_stop <= 1:
        raise ValueError("p_stop must lie in (0, 1]")
    if max_size < 2:
        raise ValueError("max_size must be at least 2")
    rng = np.random.default_rng(seed)
    assignment = rng.integers(1, k + 1, size=n)
    pools = {c: np.flatnonzero(assignment == c) for c in range(1, k + 1)}
    everyone = np.arange(n)
    sizes = hyperedge_sizes(rng, m1 + m2, p_stop, max_size)
    edges = [_draw_distinct(rng, everyone, int(s)) for s in sizes[:m1]]
    for s in sizes[m1:]:
        for _ in range(1000):
            pool = pools[int(rng.integers(1, k + 1))]
            if pool.size >= 2:
                break
        else:
            raise ValueError("no cluster with at least two vertices")
        edges.append(_draw_distinct(rng, pool, int(s)))
    raw_sizes = np.array([e.size for e in edges], dtype=np.int64)
    H = preprocess(edges)
    params = {"n": n, "k": k, "m1": m1, "m2": m2, "p_stop": p_stop,
              "max_size": max_size, "seed": seed if isinstance(seed, int) else None}
    return PlantedInstance(H, assignment, params, len(edges), raw_sizes)


@dataclass
class SeedSample:
    seeds: np.ndarray
    reached_target: bool
    initial: np.ndarray


def sample_seed_set(inst: PlantedInstance, cluster: int, frac: float = 0.05,
                    target_multiple: float = 1.5, walk_len: int = 2, seed=0) -> SeedSample:
    """Grow a seed set from a random sample of ``cluster`` by random-walk endpoints.

    A walk step moves along a uniform incident hyperedge to a uniform other
    member. Walks start at uniform current seeds; endpoints join the set until
    it holds ``round(target_multiple * |cluster|)`` vertices. If that fails
    after many attempts the partial set is returned with ``reached_target``
    false.
    """
    members = inst.members(cluster)
    if members.size == 0:
        raise ValueError(f"cluster {cluster} is empty")
    if not 0 < frac <= 1:
        raise ValueError("frac must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    k0 = math.ceil(frac * members.size)
    target = round(target_multiple * members.size)
    if target < k0:
        raise ValueError("target size is below the initial sample size")
    initial = np.sort(rng.choice(members, size=k0, replace=False))
    if walk_len == 0:
        return SeedSample(initial, k0 >= target, initial)
    H = inst.H
    current = initial.tolist()
    have = set(current)
    failures, limit = 0, 100 * max(target, 1)
    while len(current) < target and failures < limit:
        v = current[int(rng.integers(len(current)))]
        for _ in range(walk_len):
            inc = H.incident(v)
            e = int(inc[rng.integers(inc.size)])
            others = H.edge(e)
            others = others[others != v]
            v = int(others[rng.integers(others.size)])
        if v in have:
            failures += 1
            continue
        have.add(v)
        current.append(v)
    return SeedSample(np.sort(np.asarray(current, dtype=np.int64)), len(current) >= target, initial)


def f1(detected, truth) -> float:
    """F1 score of ``detected`` against ``truth``."""
    D, T = set(as_vertex_array(detected).tolist()), set(as_vertex_array(truth).tolist())
    if not T:
        raise ValueError("truth set is empty")
    hit = len(D & T)
    if hit == 0:
        return 0.0
    precision, recall = hit / len(D), hit / len(T)
    return 2 * precision * recall / (precision + recall)


def run_method(inst: PlantedInstance, method: str, R: np.ndarray, eps: float = 1.0,
               expansions: dict | None = None) -> dict:
    """Run one detection method for seed set ``R``; returns the set and solver counters."""
    H = inst.H
    start = time.perf_counter()
    if method == "adsh":
        rep = solve(H, ObjectiveSpec.adsh(R, eps), method="local" if eps >= 1 else "di")
        S, density, iters = rep.best_set, rep.best_density, rep.iterations
        explored = rep.work.get("vertices_materialized", H.n)
    elif method == "adshf":
        rep = solve(H, ObjectiveSpec.adshf(R, eps))
        S, density, iters, explored = rep.best_set, rep.best_density, rep.iterations, H.n
    elif method in ("wce+ads", "uce+ads"):
        mode = method.split("+")[0]
        G = (expansions or {}).get(mode) or clique_expand(H, mode)
        rep = solve_ads_graph(G, R, method="local")
        S, density, iters = rep.best_set, rep.best_density, rep.iterations
        explored = rep.work.get("vertices_materialized", H.n)
    elif method == "peeling":
        res = greedy_peeling(H, ObjectiveSpec.adsh(R, eps).penalty(H))
        S, density, iters, explored = res.best_set, res.best_density, H.n, H.n
    else:
        raise ValueError(f"unknown method {method!r}")
    return {"set": S, "density": float(density), "solver_iters": int(iters),
            "nodes_explored": int(explored), "millis": 1000 * (time.perf_counter() - start)}


@dataclass
class EvalResult:
    """Per-seed-set rows plus grouped means and standard errors of F1."""

    rows: list

    def summary(self) -> dict:
        groups: dict = {}
        for r in self.rows:
            groups.setdefault((r["method"], r["m1"]), []).append(r["f1"])
        out = {}
        for key, vals in sorted(groups.items()):
            a = np.asarray(vals)
            se = float(a.std(ddof=1) / math.sqrt(a.size)) if a.size > 1 else 0.0
            out[key] = {"mean": float(a.mean()), "stderr": se, "count": int(a.size)}
        return out

    def mean_f1(self, method: str, m1: int) -> float:
        return self.summary()[(method, m1)]["mean"]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore")
            w.writeheader()
            for r in self.rows:
                w.writerow(r)


def run_planted_benchmark(difficulties=(0, 250, 500), n: int = DESK["n"], k: int = DESK["k"],
                          m2: int = DESK["m2"], methods=METHODS, seeds_per_cluster: int = 2,
                          eps: float = 1.0, frac: float = 0.05, target_multiple: float = 1.5,
                          walk_len: int = 2, p_stop: float = 0.2, max_size: int = 12,
                          seed: int = 0, threads: int = 1) -> EvalResult:
    """Recovery of planted clusters from random-walk seed sets, per background level ``m1``.

    One instance is generated per difficulty; every cluster contributes
    ``seeds_per_cluster`` seed sets and every method is scored by F1 against
    the cluster. Random streams derive from ``seed`` only, so the rows do not
    depend on ``threads``.
    """
    root = np.random.SeedSequence(seed)
    inst_seqs = root.spawn(len(difficulties))
    rows = []
    for m1, seq in zip(difficulties, inst_seqs):
        gen_seq, sample_seq = seq.spawn(2)
        inst = generate_planted(n, k, int(m1), m2, p_stop, max_size, seed=gen_seq)
        expansions = {mode: clique_expand(inst.H, mode) for mode in ("wce", "uce")
                      if f"{mode}+ads" in methods}
        tasks = []
        streams = iter(sample_seq.spawn(k * seeds_per_cluster))
        for c in range(1, k + 1):
            for j in range(seeds_per_cluster):
                tasks.append((c, j, next(streams)))

        def one(task, inst=inst, m1=m1, expansions=expansions):
            c, j, stream = task
            truth = inst.members(c)
            if truth.size == 0:
                return []
            R = sample_seed_set(inst, c, frac, target_multiple, walk_len, seed=stream).seeds
            out = []
            for method in methods:
                res = run_method(inst, method, R, eps, expansions)
                out.append({"method": method, "m1": int(m1), "m2": m2, "cluster": c,
                            "seed_idx": j, "f1": f1(res["set"], truth), **res})
            return out

        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                results = list(pool.map(one, tasks))
        else:
            results = [one(t) for t in tasks]
        for chunk in results:
            rows.extend(chunk)
    for r in rows:
        r.pop("set", None)
    return EvalResult(rows)


def run_di_vs_bs(instances, gap: float | None = None) -> list[dict]:
    """Compare subproblem counts of density improvement and bisection on plain density.

    Bisection runs on ``[m/n, max ndeg]`` with gap ``1/(n(n-1))``.
    """
    rows = []
    for i, H in enumerate(instances):
        oracle = CutOracle(H, np.zeros(H.n))
        di = density_improvement(oracle)
        lo, hi = H.weights.sum() / H.n, float(H.ndeg.max())
        g = gap or 1.0 / (H.n * (H.n - 1))
        bs = binary_search(oracle, lo, hi, g, initial=np.arange(H.n))
        rows.append({
            "instance": i, "n": H.n, "m": H.m, "di_iters": di.iterations,
            "bs_iters": bs.iterations, "bs_expected": bisection_steps(lo, hi, g),
            "di_density": di.best_density, "bs_density": bs.best_density,
            "di_millis": 1000 * di.wall_time, "bs_millis": 1000 * bs.wall_time,
        })
    return rows
