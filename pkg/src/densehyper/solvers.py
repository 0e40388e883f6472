"""Exact ratio maximization on top of the min-cut decision primitive.

``density_improvement`` is a Dinkelbach-style loop: with ``beta`` set to the
density of the current set it minimizes ``beta|S| - f(S)``; a strictly
negative minimum yields a denser set, a zero minimum certifies optimality.
``binary_search`` is the classical bisection baseline.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .hypergraph import Hypergraph, as_vertex_array
from .objectives import ObjectiveSpec
from .reduction import TAU, build_global_network, build_signed_network, decide


class SolverError(RuntimeError):
    pass


@dataclass
class SolveReport:
    """Result of one solve: the best set, its density and the iteration trace.

    Each trace entry holds ``beta``, the minimizer ``size`` and ``min_value``
    (``beta|S_t| - f(S_t)``) plus per-subproblem solver statistics.
    """

    best_set: np.ndarray
    best_density: float
    trace: list = field(default_factory=list)
    method: str = "di"
    objective: dict = field(default_factory=dict)
    work: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def iterations(self) -> int:
        return len(self.trace)

    def to_dict(self, H: Hypergraph | None = None) -> dict:
        labels = self.best_set if H is None else H.labels[self.best_set]
        return {
            "objective": self.objective.get("objective"),
            "params": {k: v for k, v in self.objective.items() if k != "objective"},
            "method": self.method,
            "density": _json_float(self.best_density),
            "size": int(self.best_set.size),
            "set": [x.item() if hasattr(x, "item") else x for x in labels],
            "iterations": self.iterations,
            "trace": [{k: _json_float(v) if isinstance(v, float) else v for k, v in row.items()}
                      for row in self.trace],
            "work": self.work,
            "flags": list(self.flags),
            "timings": {"wall_seconds": self.wall_time},
        }


def _json_float(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


class DecisionOracle:
    """Minimizes ``beta|S| - f(S)`` over subsets of ``ground``.

    Subclasses implement :meth:`minimize`; :meth:`f` evaluates the set
    function on arbitrary subsets.
    """

    ground: np.ndarray

    def f(self, S: np.ndarray) -> float:
        raise NotImplementedError

    def minimize(self, beta: float) -> tuple[float, np.ndarray, dict]:
        raise NotImplementedError

    def __call__(self, beta: float) -> tuple[float, np.ndarray]:
        value, S, _ = self.minimize(beta)
        return value, S

    def density(self, S) -> float:
        S = as_vertex_array(S)
        return -math.inf if S.size == 0 else self.f(S) / S.size


class CutOracle(DecisionOracle):
    """Decision oracle for ``f = e[S] - p(S)`` via the global reduced network."""

    def __init__(self, H: Hypergraph, penalty, evaluator: Callable | None = None):
        self.H = H
        self.penalty = np.asarray(penalty, dtype=np.float64)
        self.ground = np.arange(H.n, dtype=np.int64)
        self._f = evaluator

    def f(self, S):
        S = as_vertex_array(S)
        if self._f is not None:
            return self._f(S)
        return self.H.e_in(S) - float(self.penalty[S].sum())

    def network(self, beta: float):
        if beta >= 0 and (self.penalty >= 0).all():
            return build_global_network(self.H, self.penalty, beta)
        return build_signed_network(self.H, self.penalty, beta)

    def minimize(self, beta):
        red = self.network(beta)
        dec = decide(red)
        S = dec.witness
        stats = dict(dec.cut.work)
        stats["cut_min_value"] = -dec.margin
        return beta * S.size - self.f(S), S, stats


class ExhaustiveOracle(DecisionOracle):
    """Enumerates all subsets; for arbitrary set functions on small ground sets."""

    def __init__(self, f: Callable, ground):
        self.ground = as_vertex_array(ground)
        if self.ground.size > 20:
            raise ValueError("exhaustive oracle limited to 20 elements")
        self._f = f
        self._subsets = [np.asarray(c, dtype=np.int64)
                         for k in range(self.ground.size + 1)
                         for c in itertools.combinations(self.ground.tolist(), k)]
        self._values = np.array([f(S) if S.size else 0.0 for S in self._subsets])
        self._sizes = np.array([S.size for S in self._subsets])

    def f(self, S):
        return self._f(as_vertex_array(S))

    def minimize(self, beta):
        vals = beta * self._sizes - self._values
        i = int(np.argmin(vals))
        return float(vals[i]), self._subsets[i], {}


def density_improvement(oracle: DecisionOracle, S0=None, tol: float = TAU,
                        max_iter: int | None = None) -> SolveReport:
    """Maximize ``f(S)/|S|`` exactly for normalized supermodular ``f``.

    Starts from ``S0`` (default: the whole ground set), sets ``beta`` to the
    current density and replaces the set by a minimizer of ``beta|S| - f(S)``
    until the minimum is zero within ``tol``.

    Raises
    ------
    SolverError
        If the oracle returns a minimizer worse than the empty set, or the loop
        exceeds ``|ground| + 1`` subproblems.
    """
    start = time.perf_counter()
    S = oracle.ground if S0 is None else as_vertex_array(S0)
    if S.size == 0:
        raise SolverError("initial set must be nonempty")
    limit = (oracle.ground.size + 1) if max_iter is None else max_iter
    trace = []
    while True:
        if len(trace) >= limit:
            raise SolverError(f"density improvement exceeded {limit} iterations")
        beta = oracle.f(S) / S.size
        value, S_next, stats = oracle.minimize(beta)
        trace.append({"beta": float(beta), "size": int(S_next.size),
                      "min_value": float(value), **stats})
        if value > tol:
            raise SolverError(f"oracle minimum {value} is positive; empty set gives 0")
        if value >= -tol:
            break
        S = S_next
    return SolveReport(best_set=S, best_density=float(oracle.f(S) / S.size),
                       trace=trace, method="di", wall_time=time.perf_counter() - start)


def binary_search(oracle: DecisionOracle, lo: float, hi: float, gap: float,
                  initial=None, tol: float = TAU) -> SolveReport:
    """Bisect ``[lo, hi]`` on the decision problem until it is at most ``gap`` wide.

    ``initial`` should be a set of density at least ``lo``; it is returned if no
    decision ever finds a denser witness. Otherwise the densest witness wins.
    """
    if lo > hi:
        raise SolverError(f"empty search range [{lo}, {hi}]")
    if gap <= 0:
        raise SolverError("gap must be positive")
    start = time.perf_counter()
    best = oracle.ground if initial is None else as_vertex_array(initial)
    best_d = oracle.density(best)
    trace = []
    while hi - lo > gap:
        mid = (lo + hi) / 2.0
        value, S, stats = oracle.minimize(mid)
        trace.append({"beta": float(mid), "size": int(S.size), "min_value": float(value),
                      "lo": float(lo), "hi": float(hi), **stats})
        if value < -tol:
            lo = mid
            d = oracle.density(S)
            if d > best_d:
                best, best_d = S, d
        else:
            hi = mid
    return SolveReport(best_set=best, best_density=float(best_d), trace=trace,
                       method="bs", wall_time=time.perf_counter() - start)


def bisection_steps(lo: float, hi: float, gap: float) -> int:
    """Number of subproblems :func:`binary_search` solves on ``[lo, hi]``."""
    if hi - lo <= gap:
        return 0
    return math.ceil(math.log2((hi - lo) / gap))


def shift_to_nonnegative(f: Callable, ground) -> tuple[float, Callable]:
    """Shift a normalized supermodular ``f`` to a nonnegative monotone ``g``.

    ``C = max(0, max_v -f({v}))`` and ``g(S) = f(S) + C|S|``; the maximizers
    of ``f/|S|`` and ``g/|S|`` coincide and the optima differ by ``C``.
    """
    ground = as_vertex_array(ground)
    C = max([0.0] + [-f(np.array([v], dtype=np.int64)) for v in ground.tolist()])

    def g(S):
        S = as_vertex_array(S)
        return f(S) + C * S.size

    return float(C), g


def verify_trace(report: SolveReport, n: int, tol: float = TAU) -> None:
    """Assert the monotonicity guarantees of a density-improvement trace.

    ``beta`` strictly increases, minimizer sizes strictly decrease over all
    non-final subproblems, at most ``n + 1`` subproblems are solved and the
    last subproblem certifies optimality.
    """
    betas = [row["beta"] for row in report.trace]
    sizes = [row["size"] for row in report.trace]
    T = len(betas)
    if T > n + 1:
        raise AssertionError(f"{T} iterations exceed n + 1 = {n + 1}")
    for a, b in zip(betas, betas[1:]):
        if not b > a:
            raise AssertionError(f"beta not strictly increasing: {betas}")
    for a, b in zip(sizes[:-1], sizes[1:-1]):
        if not a > b:
            raise AssertionError(f"minimizer sizes not strictly decreasing: {sizes}")
    if abs(report.trace[-1]["min_value"]) > tol:
        raise AssertionError("termination certificate is not zero")
    if abs(report.best_density - betas[-1]) > tol:
        raise AssertionError("returned density differs from the final beta")


def objective_bounds(H: Hypergraph, spec: ObjectiveSpec) -> tuple[float, float, np.ndarray]:
    """A range ``[lo, hi]`` bracketing the optimum, and a set attaining ``lo``."""
    p = spec.penalty(H)
    if spec.kind == "dshg":
        return H.m / H.n if not H.weighted else H.weights.sum() / H.n, float(H.ndeg.max()), np.arange(H.n)
    V = np.arange(H.n, dtype=np.int64)
    lo, init = (H.e_in(V) - p.sum()) / H.n, V
    R = spec.seeds
    if R is not None:
        dR = spec.f(H, R) / R.size
        if dR > lo:
            lo, init = dR, R
    hi = float((H.ndeg - p).max())
    if spec.kind == "adsh" and 1 <= spec.eps < 2:
        hi = min(hi, float(H.ndeg[R].max()))
    return float(lo), max(hi, float(lo)), init


def solve(H: Hypergraph, spec: ObjectiveSpec, method: str = "di", **options) -> SolveReport:
    """Solve ``spec`` on ``H`` with density improvement, bisection, the local solver or peeling.

    ``method`` is one of ``"di"``, ``"bs"``, ``"local"`` (anchored volume
    objective only) or ``"peel"`` (greedy heuristic, not exact).
    """
    spec.validate(H)
    if method == "local":
        from .local import solve_adsh_local

        if spec.kind != "adsh":
            raise SolverError("the local solver handles the adsh objective only")
        report = solve_adsh_local(H, spec.seeds, spec.eps, **options)
    elif method == "peel":
        from .baselines import greedy_peeling

        start = time.perf_counter()
        res = greedy_peeling(H, spec.penalty(H))
        report = SolveReport(best_set=res.best_set, best_density=res.best_density,
                             method="peel", wall_time=time.perf_counter() - start)
        report.flags.append("heuristic")
    elif method in ("di", "bs"):
        oracle = CutOracle(H, spec.penalty(H), evaluator=lambda S: spec.f(H, S))
        if method == "di":
            report = density_improvement(oracle, options.get("S0"))
        else:
            lo, hi, init = objective_bounds(H, spec)
            gap = options.get("gap") or 1.0 / (H.n * max(H.n - 1, 1))
            report = binary_search(oracle, lo, hi, gap, initial=init)
        report.work["vertices_materialized"] = H.n
        report.work["hyperedges_materialized"] = H.m
    else:
        raise SolverError(f"unknown method {method!r}")
    report.objective = {**spec.describe(), **report.objective}
    return report
