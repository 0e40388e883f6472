"""Hypergraph storage, degree arithmetic, neighbourhood oracles and file I/O."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np


class HypergraphFormatError(ValueError):
    """Malformed hyperedge-list or vertex-list file."""


def gather(ptr: np.ndarray, data: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Concatenate the CSR rows ``idx`` of ``(ptr, data)`` without a Python loop."""
    idx = np.asarray(idx, dtype=np.int64)
    if idx.size == 0:
        return np.zeros(0, dtype=data.dtype)
    starts = ptr[idx]
    lengths = ptr[idx + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return np.zeros(0, dtype=data.dtype)
    offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(lengths)[:-1])), lengths)
    return data[offsets + np.arange(total)]


def as_vertex_array(S) -> np.ndarray:
    """Sorted unique int64 array from any iterable of vertex ids."""
    if isinstance(S, np.ndarray):
        arr = S.astype(np.int64, copy=False).ravel()
    else:
        arr = np.fromiter((int(v) for v in S), dtype=np.int64)
    return np.unique(arr)


class Hypergraph:
    """Immutable hypergraph on vertices ``0..n-1``.

    Parameters
    ----------
    edges : iterable of iterables of int
        Hyperedges as vertex-id collections. Each must have at least two
        distinct vertices and no hyperedge may repeat; use :func:`preprocess`
        to clean raw input.
    n : int, optional
        Number of vertices. Defaults to ``1 + max vertex id``.
    weights : array-like, optional
        Nonnegative hyperedge weights (default all ones). Degrees, volumes and
        ``e[S]`` are weighted accordingly.
    labels : array-like, optional
        Original vertex labels, used for reporting (default ``0..n-1``).

    Attributes
    ----------
    deg : ndarray
        Per-vertex (weighted) degree.
    ndeg : ndarray
        Per-vertex fractional degree ``sum_{e ∋ v} w_e / |e|``.
    rank : int
        Maximum hyperedge size.
    """

    def __init__(self, edges: Iterable[Iterable[int]], n: int | None = None,
                 weights=None, labels=None):
        rows = [np.unique(np.asarray(list(e), dtype=np.int64)) for e in edges]
        for i, row in enumerate(rows):
            if row.size < 2:
                raise ValueError(f"hyperedge {i} has fewer than two distinct vertices")
        m = len(rows)
        sizes = np.array([r.size for r in rows], dtype=np.int64)
        edge_ptr = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(sizes, out=edge_ptr[1:])
        edge_idx = np.concatenate(rows) if m else np.zeros(0, dtype=np.int64)
        if edge_idx.size and edge_idx.min() < 0:
            raise ValueError("vertex ids must be nonnegative")
        n_min = int(edge_idx.max()) + 1 if edge_idx.size else 0
        if n is None:
            n = n_min if labels is None else len(labels)
        if n < n_min:
            raise ValueError(f"n={n} but a hyperedge mentions vertex {n_min - 1}")
        seen = set()
        for i, row in enumerate(rows):
            key = row.tobytes()
            if key in seen:
                raise ValueError(f"hyperedge {i} duplicates an earlier hyperedge")
            seen.add(key)

        if weights is None:
            w = np.ones(m)
            self.weighted = False
        else:
            w = np.asarray(weights, dtype=np.float64).ravel()
            if w.size != m:
                raise ValueError("one weight per hyperedge required")
            if (w < 0).any():
                raise ValueError("hyperedge weights must be nonnegative")
            self.weighted = True

        self.n = int(n)
        self.m = m
        self.sizes = sizes
        self.weights = w
        self.edge_ptr = edge_ptr
        self.edge_idx = edge_idx
        owner = np.repeat(np.arange(m, dtype=np.int64), sizes)
        order = np.argsort(edge_idx, kind="stable")
        self.vertex_edges = owner[order]
        self.vertex_ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(edge_idx, minlength=self.n), out=self.vertex_ptr[1:])
        w_rep = np.repeat(w, sizes)
        self.deg = np.bincount(edge_idx, weights=w_rep, minlength=self.n).astype(np.float64)
        self.ndeg = np.bincount(edge_idx, weights=w_rep / np.repeat(sizes, sizes),
                                minlength=self.n).astype(np.float64)
        self.rank = int(sizes.max()) if m else 0
        if labels is None:
            self.labels = np.arange(self.n, dtype=np.int64)
        else:
            self.labels = np.asarray(labels)
            if self.labels.size != self.n:
                raise ValueError("one label per vertex required")
        for arr in (self.sizes, self.weights, self.edge_ptr, self.edge_idx,
                    self.vertex_edges, self.vertex_ptr, self.deg, self.ndeg, self.labels):
            arr.setflags(write=False)

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, m={self.m}, rank={self.rank})"

    def edge(self, e: int) -> np.ndarray:
        return self.edge_idx[self.edge_ptr[e]:self.edge_ptr[e + 1]]

    def incident(self, v: int) -> np.ndarray:
        return self.vertex_edges[self.vertex_ptr[v]:self.vertex_ptr[v + 1]]

    def edges(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in self.edge(e)) for e in range(self.m)]

    def induced_edges(self, S) -> np.ndarray:
        """Ids of hyperedges fully inside ``S``, touching only edges incident to ``S``."""
        S = as_vertex_array(S)
        inc = gather(self.vertex_ptr, self.vertex_edges, S)
        if inc.size == 0:
            return inc
        ids, counts = np.unique(inc, return_counts=True)
        return ids[counts == self.sizes[ids]]

    def e_in(self, S) -> float:
        """Weighted number of hyperedges fully inside ``S``."""
        return float(self.weights[self.induced_edges(S)].sum())

    def vol(self, S) -> float:
        return float(self.deg[as_vertex_array(S)].sum())

    def nvol(self, S) -> float:
        return float(self.ndeg[as_vertex_array(S)].sum())

    def total_nvol(self) -> float:
        return float(self.ndeg.sum())

    def subhypergraph(self, S) -> tuple["Hypergraph", np.ndarray]:
        """Hypergraph induced on ``S`` (hyperedges fully inside), reindexed.

        Returns the sub-hypergraph and the array mapping its vertex ids back to
        ids of ``self``.
        """
        S = as_vertex_array(S)
        ids = self.induced_edges(S)
        edges = [np.searchsorted(S, self.edge(e)) for e in ids]
        sub = Hypergraph(edges, n=S.size,
                         weights=self.weights[ids] if self.weighted else None,
                         labels=self.labels[S])
        return sub, S

    def label_ids(self, labels) -> np.ndarray:
        """Dense ids for original labels; raises ``KeyError`` on unknown labels."""
        index = {lab.item() if hasattr(lab, "item") else lab: i
                 for i, lab in enumerate(self.labels)}
        out = []
        for lab in labels:
            try:
                out.append(index[lab])
            except KeyError:
                raise KeyError(f"vertex label {lab!r} not in hypergraph") from None
        return np.unique(np.asarray(out, dtype=np.int64))


@dataclass(frozen=True)
class DegreeStats:
    vol: float
    nvol: float
    max_deg: float
    max_ndeg: float
    e_in: float


def degree_stats(H: Hypergraph, S) -> DegreeStats:
    """Volume, fractional volume, maximum degrees and induced edge count of ``S``."""
    S = as_vertex_array(S)
    if S.size == 0:
        return DegreeStats(0.0, 0.0, 0.0, 0.0, 0.0)
    return DegreeStats(
        vol=float(H.deg[S].sum()),
        nvol=float(H.ndeg[S].sum()),
        max_deg=float(H.deg[S].max()),
        max_ndeg=float(H.ndeg[S].max()),
        e_in=H.e_in(S),
    )


def neighborhoods(H: Hypergraph, S) -> tuple[np.ndarray, np.ndarray]:
    """Hyperedges touching ``S`` and the vertices they contain.

    Only the incidence lists of ``S`` and of the returned hyperedges are read.
    """
    S = as_vertex_array(S)
    edges = np.unique(gather(H.vertex_ptr, H.vertex_edges, S))
    verts = np.unique(gather(H.edge_ptr, H.edge_idx, edges))
    return edges, verts


def preprocess(raw, weights=None) -> Hypergraph:
    """Drop self-loops and size-1 hyperedges, merge duplicates, drop dangling vertices.

    ``raw`` is either a :class:`Hypergraph` (its labels are kept) or an
    iterable of hyperedges given by vertex labels. Surviving labels are
    compacted to ``0..n-1`` in sorted label order; ``result.labels`` holds the
    relabeling map. Weights of merged duplicates are summed.
    """
    if isinstance(raw, Hypergraph):
        lab = raw.labels
        edges = [[lab[v] for v in raw.edge(e)] for e in range(raw.m)]
        if weights is None and raw.weighted:
            weights = raw.weights
    else:
        edges = raw
    merged: dict[frozenset, int] = {}
    kept: list[frozenset] = []
    kept_w: list[float] = []
    w_iter = iter(weights) if weights is not None else None
    for e in edges:
        w = float(next(w_iter)) if w_iter is not None else 1.0
        key = frozenset(x.item() if hasattr(x, "item") else x for x in e)
        if len(key) < 2:
            continue
        if key in merged:
            kept_w[merged[key]] += w
            continue
        merged[key] = len(kept)
        kept.append(key)
        kept_w.append(w)
    labels = sorted(set().union(*kept)) if kept else []
    index = {lab: i for i, lab in enumerate(labels)}
    dense = [[index[x] for x in e] for e in kept]
    return Hypergraph(dense, n=len(labels),
                      weights=kept_w if weights is not None else None,
                      labels=np.asarray(labels) if labels else np.zeros(0, dtype=np.int64))


def _parse_int(tok: str, path, lineno: int) -> int:
    try:
        val = int(tok)
    except ValueError:
        raise HypergraphFormatError(f"{path}:{lineno}: not an integer vertex id: {tok!r}") from None
    if val <= 0:
        raise HypergraphFormatError(f"{path}:{lineno}: vertex ids must be positive, got {val}")
    return val


def read_hyperedges(path: str | os.PathLike) -> list[list[int]]:
    """Raw hyperedges from a text file: one per line, '#' starts a comment line."""
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            edges.append([_parse_int(tok, path, lineno) for tok in line.split()])
    return edges


def load_hypergraph(path: str | os.PathLike) -> Hypergraph:
    """Read and preprocess a hyperedge-list file.

    Raises
    ------
    HypergraphFormatError
        On a malformed line (message carries the line number) or when nothing
        survives preprocessing.
    """
    H = preprocess(read_hyperedges(path))
    if H.m == 0:
        raise HypergraphFormatError(f"{path}: hypergraph is empty after preprocessing")
    return H


def write_hypergraph(H: Hypergraph, path: str | os.PathLike, labels=None) -> None:
    """Write one hyperedge per line using ``labels`` (default ``H.labels``)."""
    lab = H.labels if labels is None else np.asarray(labels)
    with open(path, "w") as fh:
        for e in range(H.m):
            fh.write(" ".join(str(lab[v]) for v in H.edge(e)) + "\n")


def read_labels(path: str | os.PathLike) -> list[int]:
    """First integer on each non-comment line (seed-set / vertex-set files)."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tok = line.split()[0]
            try:
                out.append(int(tok))
            except ValueError:
                raise HypergraphFormatError(f"{path}:{lineno}: bad vertex label {tok!r}") from None
    return out


def load_seed_set(path: str | os.PathLike, H: Hypergraph) -> np.ndarray:
    """Seed labels from ``path`` mapped to dense ids of ``H``."""
    return H.label_ids(read_labels(path))


def write_vertex_set(labels, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        for lab in labels:
            fh.write(f"{lab}\n")


def read_vertex_values(path: str | os.PathLike) -> dict[int, float]:
    """``label value`` pairs, one per line (penalty / weight sidecars)."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise HypergraphFormatError(f"{path}:{lineno}: expected 'label value'")
            try:
                out[int(parts[0])] = float(parts[1])
            except ValueError:
                raise HypergraphFormatError(f"{path}:{lineno}: expected 'label value'") from None
    return out


def write_vertex_values(labels, values, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        for lab, val in zip(labels, values):
            val = val.item() if hasattr(val, "item") else val
            fh.write(f"{lab} {val!r}\n")
