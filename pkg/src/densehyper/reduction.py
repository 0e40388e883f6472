"""Reduce ``exists S: (e[S] - p(S)) / |S| > beta`` to a minimum s-t cut.

Node layout of every reduced network: vertex nodes first, then one auxiliary
node per included hyperedge, then the source and the sink.  Each hyperedge
``e`` becomes the gadget ``v -> v_e`` (capacity ``w_e / |e|``) and
``v_e -> v`` (capacity ``INF``) for ``v in e``, whose cheapest placement
costs exactly ``g_e(S) = min(|e ∩ S| / |e|, INF * |e \\ S|)``.

For every builder and every vertex set ``S``::

    cut(S ∪ {s} ∪ {v_e : e ⊆ S}) = offset + beta |S| + p(S) - e[S]

so a cut strictly below ``offset`` certifies a set denser than ``beta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import Hypergraph, as_vertex_array, gather
from .maxflow import INF, CutResult, FlowNetwork, cut_value, max_flow_min_cut

TAU = 1e-9


class ReductionError(ValueError):
    pass


@dataclass
class ReducedNetwork:
    """A flow network whose cuts encode ``offset + beta|S| + p(S) - e[S]``.

    ``vertices[i]`` is the hypergraph vertex of node ``i``; ``edges[j]`` is the
    hyperedge of auxiliary node ``len(vertices) + j``.
    """

    network: FlowNetwork
    offset: float
    beta: float
    vertices: np.ndarray
    edges: np.ndarray

    @property
    def n_vertex_nodes(self) -> int:
        return int(self.vertices.size)

    def witness(self, source_side: np.ndarray) -> np.ndarray:
        side = source_side[source_side < self.vertices.size]
        return self.vertices[side]


@dataclass
class Decision:
    denser_exists: bool
    witness: np.ndarray
    margin: float
    cut: CutResult


def splitting_penalty(H: Hypergraph, S) -> np.ndarray:
    """``g_e(S)`` for every hyperedge, evaluated straight from its definition."""
    mask = np.zeros(H.n, dtype=bool)
    mask[as_vertex_array(S)] = True
    inside = np.add.reduceat(mask[H.edge_idx].astype(np.int64), H.edge_ptr[:-1]) if H.m else np.zeros(0)
    g = np.where(inside == H.sizes, 0.0, inside / np.maximum(H.sizes, 1))
    return g * H.weights


def assemble(H: Hypergraph, vertices: np.ndarray, edges: np.ndarray,
             s_cap: np.ndarray, t_cap: np.ndarray, offset: float, beta: float,
             inf_sink: np.ndarray | None = None) -> ReducedNetwork:
    """Build the reduced network on a vertex subset and a hyperedge subset.

    ``vertices`` must be sorted and contain every member of ``edges``;
    ``s_cap``/``t_cap`` are the terminal capacities aligned with ``vertices``.
    Vertices flagged in ``inf_sink`` get an extra ``INF`` arc to the sink.
    """
    nv, ne = vertices.size, edges.size
    s, t = nv + ne, nv + ne + 1
    net = FlowNetwork(nv + ne + 2, s, t)
    local = np.arange(nv, dtype=np.int64)
    keep = s_cap > 0
    net.add_arcs(np.full(keep.sum(), s), local[keep], s_cap[keep])
    keep = t_cap > 0
    net.add_arcs(local[keep], np.full(keep.sum(), t), t_cap[keep])
    if inf_sink is not None and inf_sink.any():
        net.add_arcs(local[inf_sink], np.full(inf_sink.sum(), t), INF)
    if ne:
        members = gather(H.edge_ptr, H.edge_idx, edges)
        sizes = H.sizes[edges]
        pos = np.searchsorted(vertices, members)
        if (pos >= nv).any() or (vertices[np.minimum(pos, nv - 1)] != members).any():
            raise ReductionError("hyperedge member missing from the vertex node set")
        aux = nv + np.repeat(np.arange(ne, dtype=np.int64), sizes)
        cap = np.repeat(H.weights[edges] / sizes, sizes)
        net.add_arcs(pos, aux, cap)
        net.add_arcs(aux, pos, INF)
    return ReducedNetwork(net, float(offset), float(beta), vertices, edges)


def build_global_network(H: Hypergraph, penalty, beta: float) -> ReducedNetwork:
    """Network for nonnegative ``beta`` and nonnegative penalties; offset ``nvol(V)``."""
    p = np.asarray(penalty, dtype=np.float64)
    if beta < 0:
        raise ReductionError("beta < 0: use build_signed_network")
    if (p < 0).any():
        raise ReductionError("negative penalty: use build_signed_network")
    return assemble(H, np.arange(H.n, dtype=np.int64), np.arange(H.m, dtype=np.int64),
                    H.ndeg.copy(), beta + p, H.total_nvol(), beta)


def build_signed_network(H: Hypergraph, penalty, beta: float) -> ReducedNetwork:
    """Network for penalties and ``beta`` of any sign.

    A vertex reward ``q`` is passed as the penalty ``-q``. With
    ``c = beta + p(v)`` the sink arc carries ``max(0, c)`` and the source arc
    ``ndeg(v) + max(0, -c)``.
    """
    c = beta + np.asarray(penalty, dtype=np.float64)
    neg = np.maximum(0.0, -c)
    return assemble(H, np.arange(H.n, dtype=np.int64), np.arange(H.m, dtype=np.int64),
                    H.ndeg + neg, np.maximum(0.0, c), H.total_nvol() + neg.sum(), beta)


def anchored_capacities(H: Hypergraph, vertices: np.ndarray, seed_mask_local: np.ndarray,
                        eps: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Merged-terminal capacities for the volume-penalized anchored objective.

    Seed vertices keep ``s -> v`` at ``ndeg(v)`` and ``v -> t`` at ``beta``;
    every other vertex loses its source arc and gets
    ``beta + eps * deg(v) / 2 - ndeg(v)`` towards the sink.
    """
    ndeg = H.ndeg[vertices]
    s_cap = np.where(seed_mask_local, ndeg, 0.0)
    merged = beta + eps * H.deg[vertices] / 2.0 - ndeg
    if (merged[~seed_mask_local] < -1e-12).any():
        raise AssertionError("merged sink capacity went negative; eps must be >= 1")
    t_cap = np.where(seed_mask_local, beta, np.maximum(merged, 0.0))
    return s_cap, t_cap


def build_anchored_network(H: Hypergraph, seeds, eps: float, beta: float,
                           degree_clamp: float | None = None) -> ReducedNetwork:
    """Merged-terminal network for ``e[S] - eps vol(S \\ R) / 2``; offset ``nvol(R)``.

    Vertices with degree above ``degree_clamp`` are pinned to the sink.
    """
    if eps < 1:
        raise ReductionError("anchored construction needs eps >= 1; use the signed builder")
    if beta < 0:
        raise ReductionError("anchored construction needs beta >= 0")
    R = as_vertex_array(seeds)
    vertices = np.arange(H.n, dtype=np.int64)
    mask = np.zeros(H.n, dtype=bool)
    mask[R] = True
    s_cap, t_cap = anchored_capacities(H, vertices, mask, eps, beta)
    clamp = None if degree_clamp is None else (H.deg > degree_clamp) & ~mask
    return assemble(H, vertices, np.arange(H.m, dtype=np.int64), s_cap, t_cap,
                    float(s_cap.sum()), beta, inf_sink=clamp)


def cut_at(red: ReducedNetwork, H: Hypergraph, S) -> float:
    """Cut value when exactly ``S`` (plus optimally placed auxiliaries) joins the source."""
    S = as_vertex_array(S)
    pos = np.searchsorted(red.vertices, S)
    inside = np.zeros(red.vertices.size, dtype=bool)
    inside[pos] = True
    side = [red.network.source]
    side.extend(pos.tolist())
    nv = red.vertices.size
    for j, e in enumerate(red.edges):
        if inside[np.searchsorted(red.vertices, H.edge(e))].all():
            side.append(nv + j)
    return cut_value(red.network, side)


def decide(red: ReducedNetwork, tol: float = TAU) -> Decision:
    """Is there a set denser than ``red.beta``? Witness is the minimal min-cut side."""
    cut = max_flow_min_cut(red.network)
    margin = red.offset - cut.cut_value
    witness = red.witness(cut.source_side)
    return Decision(cut.cut_value <= red.offset - tol, witness, margin, cut)
