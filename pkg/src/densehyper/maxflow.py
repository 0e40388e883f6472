"""Maximum flow / minimum s-t cut engine.

Highest-label push-relabel with gap relabeling and periodic global
relabeling.  The solver runs in two phases: the first computes a maximum
preflow (excess that cannot reach the sink is parked on "dead" nodes), the
second returns parked excess to the source so that the final state is a
genuine flow.  The returned source side is the set of nodes reachable from
the source in the final residual graph, which is the inclusion-minimal
source side among all minimum cuts.

The kernels are compiled with numba; everything around them is plain numpy.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from numba import njit

INF = math.inf

# Relative threshold below which residual capacities and excesses count as 0.
_REL_EPS = 1e-13


class FlowNetworkError(ValueError):
    """Raised for malformed networks or unbounded flow."""


class FlowNetwork:
    """Directed capacitated network with a distinguished source and sink.

    Arcs are appended with :meth:`add_arc` / :meth:`add_arcs`; the paired
    reverse arcs used for residual bookkeeping are created when the network is
    solved.  Capacities may be ``INF``; at solve time infinite arcs are
    replaced by a finite sentinel larger than any finite cut.
    """

    def __init__(self, n_nodes: int, source: int, sink: int):
        if source == sink:
            raise FlowNetworkError("source and sink must differ")
        for name, x in (("source", source), ("sink", sink)):
            if not 0 <= x < n_nodes:
                raise FlowNetworkError(f"{name} id {x} outside 0..{n_nodes - 1}")
        self.n_nodes = int(n_nodes)
        self.source = int(source)
        self.sink = int(sink)
        self._tails: list[np.ndarray] = []
        self._heads: list[np.ndarray] = []
        self._caps: list[np.ndarray] = []
        self._cache = None

    def add_arc(self, tail: int, head: int, capacity: float) -> None:
        self.add_arcs([tail], [head], [capacity])

    def add_arcs(self, tails, heads, capacities) -> None:
        tails = np.asarray(tails, dtype=np.int64).ravel()
        heads = np.asarray(heads, dtype=np.int64).ravel()
        caps = np.asarray(capacities, dtype=np.float64).ravel()
        if caps.size == 1 and tails.size > 1:
            caps = np.full(tails.size, caps[0])
        if not (tails.size == heads.size == caps.size):
            raise FlowNetworkError("tails, heads and capacities differ in length")
        if tails.size == 0:
            return
        if np.isnan(caps).any() or (caps < 0).any():
            raise FlowNetworkError("capacities must be nonnegative")
        self._tails.append(tails)
        self._heads.append(heads)
        self._caps.append(caps)
        self._cache = None

    @property
    def tails(self) -> np.ndarray:
        return _cat(self._tails, np.int64)

    @property
    def heads(self) -> np.ndarray:
        return _cat(self._heads, np.int64)

    @property
    def capacities(self) -> np.ndarray:
        return _cat(self._caps, np.float64)

    @property
    def n_arcs(self) -> int:
        return sum(t.size for t in self._tails)

    def finite_capacities(self) -> np.ndarray:
        """Capacities with ``INF`` replaced by the solver sentinel."""
        tails, caps = self.tails, self.capacities.copy()
        from_s = tails == self.source
        if np.isinf(caps[from_s]).any():
            raise FlowNetworkError("infinite arc out of the source: flow is unbounded")
        inf = np.isinf(caps)
        if inf.any():
            caps[inf] = caps[from_s].sum() + 1.0
        return caps

    def to_dimacs(self) -> str:
        """DIMACS max-flow text (1-based node ids), for differential testing."""
        caps = self.finite_capacities()
        lines = [
            f"p max {self.n_nodes} {self.n_arcs}",
            f"n {self.source + 1} s",
            f"n {self.sink + 1} t",
        ]
        for u, v, c in zip(self.tails, self.heads, caps):
            lines.append(f"a {u + 1} {v + 1} {float(c)!r}")
        return "\n".join(lines) + "\n"

    def _csr(self):
        if self._cache is not None:
            return self._cache
        tails, heads = self.tails, self.heads
        n, m = self.n_nodes, tails.size
        if m and (tails.min() < 0 or heads.min() < 0 or max(tails.max(), heads.max()) >= n):
            raise FlowNetworkError("arc endpoint outside the node range")
        caps = self.finite_capacities()
        all_t = np.concatenate([tails, heads])
        all_h = np.concatenate([heads, tails])
        all_c = np.concatenate([caps, np.zeros(m)])
        order = np.argsort(all_t, kind="stable")
        pos = np.empty(2 * m, dtype=np.int64)
        pos[order] = np.arange(2 * m, dtype=np.int64)
        partner = np.concatenate([np.arange(m, 2 * m), np.arange(m)])
        rev = pos[partner[order]]
        first = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(all_t, minlength=n), out=first[1:])
        self._cache = (first, all_h[order].astype(np.int64), rev, all_c[order], pos[:m], caps)
        return self._cache


@dataclass
class CutResult:
    """Minimum s-t cut together with the maximum flow that certifies it."""

    source_side: np.ndarray
    cut_value: float
    flow_value: float
    arc_flow: np.ndarray = field(repr=False)
    work: dict = field(default_factory=dict)


def _cat(chunks, dtype):
    if not chunks:
        return np.zeros(0, dtype=dtype)
    return np.concatenate(chunks).astype(dtype, copy=False)


@njit(cache=True)
def _global_relabel(n, first, head, rev, res, label, target, excluded, eps, queue):
    for i in range(n):
        label[i] = n
    label[target] = 0
    qh = 0
    qt = 1
    queue[0] = target
    while qh < qt:
        w = queue[qh]
        qh += 1
        d = label[w] + 1
        for a in range(first[w], first[w + 1]):
            v = head[a]
            if label[v] == n and v != excluded and res[rev[a]] > eps:
                label[v] = d
                queue[qt] = v
                qt += 1


@njit(cache=True)
def _phase(n, first, head, rev, res, excess, target, excluded, eps, stats):
    """Push-relabel towards ``target`` until no live node has excess."""
    m2 = first[n]
    label = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    current = np.empty(n, np.int64)
    act_head = np.empty(n + 1, np.int64)
    act_next = np.empty(n, np.int64)
    all_head = np.empty(n + 1, np.int64)
    all_next = np.empty(n, np.int64)
    all_prev = np.empty(n, np.int64)
    threshold = 6 * n + m2
    rebuild = True
    max_active = -1
    max_all = -1
    work = 0
    while True:
        if rebuild:
            _global_relabel(n, first, head, rev, res, label, target, excluded, eps, queue)
            stats[2] += 1
            for k in range(n + 1):
                act_head[k] = -1
                all_head[k] = -1
            max_active = -1
            max_all = -1
            for v in range(n):
                current[v] = first[v]
                lv = label[v]
                if v == target or v == excluded or lv >= n:
                    continue
                h = all_head[lv]
                all_next[v] = h
                all_prev[v] = -1
                if h != -1:
                    all_prev[h] = v
                all_head[lv] = v
                if lv > max_all:
                    max_all = lv
                if excess[v] > eps:
                    act_next[v] = act_head[lv]
                    act_head[lv] = v
                    if lv > max_active:
                        max_active = lv
            rebuild = False
            work = 0
        while max_active >= 0 and act_head[max_active] == -1:
            max_active -= 1
        if max_active < 0:
            break
        u = act_head[max_active]
        act_head[max_active] = act_next[u]
        while excess[u] > eps:
            lu = label[u]
            a = current[u]
            end = first[u + 1]
            while a < end:
                if res[a] > eps:
                    v = head[a]
                    lv = label[v]
                    if lv == lu - 1:
                        delta = excess[u]
                        if res[a] < delta:
                            delta = res[a]
                        if excess[v] <= eps and v != target and v != excluded:
                            act_next[v] = act_head[lv]
                            act_head[lv] = v
                            if lv > max_active:
                                max_active = lv
                        res[a] -= delta
                        res[rev[a]] += delta
                        excess[u] -= delta
                        excess[v] += delta
                        stats[0] += 1
                        if excess[u] <= eps:
                            break
                a += 1
            if a < end:
                current[u] = a
                break
            # relabel u
            stats[1] += 1
            newl = n
            for b in range(first[u], end):
                if res[b] > eps:
                    lv = label[head[b]] + 1
                    if lv < newl:
                        newl = lv
            work += end - first[u] + 12
            p = all_prev[u]
            q = all_next[u]
            if p != -1:
                all_next[p] = q
            else:
                all_head[lu] = q
            if q != -1:
                all_prev[q] = p
            if all_head[lu] == -1:
                # gap: nothing above lu can reach the target any more
                stats[3] += 1
                for k in range(lu + 1, max_all + 1):
                    x = all_head[k]
                    while x != -1:
                        label[x] = n
                        x = all_next[x]
                    all_head[k] = -1
                    act_head[k] = -1
                if lu - 1 < max_all:
                    max_all = lu - 1
                newl = n
            if newl >= n:
                label[u] = n
                break
            label[u] = newl
            h = all_head[newl]
            all_next[u] = h
            all_prev[u] = -1
            if h != -1:
                all_prev[h] = u
            all_head[newl] = u
            if newl > max_all:
                max_all = newl
            current[u] = first[u]
            if work > threshold:
                break
        if work > threshold:
            if excess[u] > eps and label[u] < n:
                act_next[u] = act_head[label[u]]
                act_head[label[u]] = u
            rebuild = True


@njit(cache=True)
def _reachable(n, first, head, res, s, eps):
    seen = np.zeros(n, np.bool_)
    stack = np.empty(n, np.int64)
    seen[s] = True
    stack[0] = s
    top = 1
    while top > 0:
        top -= 1
        u = stack[top]
        for a in range(first[u], first[u + 1]):
            v = head[a]
            if not seen[v] and res[a] > eps:
                seen[v] = True
                stack[top] = v
                top += 1
    return seen


@njit(cache=True)
def _solve(n, first, head, rev, cap, s, t, eps):
    res = cap.copy()
    excess = np.zeros(n)
    stats = np.zeros(4, np.int64)
    for a in range(first[s], first[s + 1]):
        c = res[a]
        if c > 0.0:
            v = head[a]
            res[a] = 0.0
            res[rev[a]] += c
            excess[v] += c
            excess[s] -= c
    _phase(n, first, head, rev, res, excess, t, s, eps, stats)
    flow_value = excess[t]
    _phase(n, first, head, rev, res, excess, s, t, eps, stats)
    seen = _reachable(n, first, head, res, s, eps)
    return res, seen, flow_value, stats


def max_flow_min_cut(net: FlowNetwork) -> CutResult:
    """Solve max-flow on ``net`` and return the residual-reachable minimum cut.

    Raises
    ------
    FlowNetworkError
        If an infinite arc leaves the source or an arc endpoint is out of range.
    """
    first, head, rev, cap, fwd_pos, caps = net._csr()
    s, t = net.source, net.sink
    total = caps[net.tails == s].sum() if caps.size else 0.0
    eps = _REL_EPS * max(1.0, total)
    res, seen, flow_value, stats = _solve(net.n_nodes, first, head, rev, cap, s, t, eps)
    arc_flow = cap[fwd_pos] - res[fwd_pos]
    tails, heads = net.tails, net.heads
    crossing = seen[tails] & ~seen[heads]
    cut_value = float(caps[crossing].sum())
    work = {
        "pushes": int(stats[0]),
        "relabels": int(stats[1]),
        "global_relabels": int(stats[2]),
        "gaps": int(stats[3]),
        "nodes": net.n_nodes,
        "arcs": net.n_arcs,
    }
    return CutResult(
        source_side=np.flatnonzero(seen),
        cut_value=cut_value,
        flow_value=float(flow_value),
        arc_flow=arc_flow,
        work=work,
    )


def residual_source_side(net: FlowNetwork, arc_flow) -> np.ndarray:
    """Nodes reachable from the source over arcs with positive residual capacity.

    ``arc_flow`` is aligned with the arcs of ``net`` in insertion order.
    """
    caps = net.finite_capacities()
    flow = np.asarray(arc_flow, dtype=np.float64)
    total = caps[net.tails == net.source].sum() if caps.size else 0.0
    eps = _REL_EPS * max(1.0, total)
    adj: list[list[int]] = [[] for _ in range(net.n_nodes)]
    for u, v, c, f in zip(net.tails, net.heads, caps, flow):
        if c - f > eps:
            adj[u].append(v)
        if f > eps:
            adj[v].append(u)
    seen = np.zeros(net.n_nodes, dtype=bool)
    seen[net.source] = True
    todo = deque([net.source])
    while todo:
        u = todo.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                todo.append(v)
    return np.flatnonzero(seen)


def cut_value(net: FlowNetwork, source_side) -> float:
    """Capacity of arcs leaving ``source_side`` (INF arcs count as ``inf``)."""
    mask = np.zeros(net.n_nodes, dtype=bool)
    mask[np.asarray(list(source_side), dtype=np.int64)] = True
    crossing = mask[net.tails] & ~mask[net.heads]
    return float(net.capacities[crossing].sum())
