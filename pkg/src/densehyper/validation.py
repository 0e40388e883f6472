"""Input coercion shared by the estimators and the command line."""

from __future__ import annotations

import numpy as np

from .hypergraph import Hypergraph, preprocess


def check_hypergraph(X) -> Hypergraph:
    """Accept a :class:`Hypergraph` as is, or preprocess an iterable of hyperedges."""
    if isinstance(X, Hypergraph):
        return X
    if isinstance(X, (str, bytes)):
        raise TypeError("expected hyperedges, got a string; load files with load_hypergraph")
    try:
        H = preprocess(list(X))
    except TypeError as exc:
        raise TypeError("X must be a Hypergraph or an iterable of hyperedges") from exc
    if H.m == 0:
        raise ValueError("hypergraph has no hyperedge of size >= 2")
    return H


def check_seeds(H: Hypergraph, seeds) -> np.ndarray:
    """Translate seed labels to sorted dense vertex ids, rejecting unknown labels."""
    if seeds is None:
        raise ValueError("a seed set is required")
    labels = np.unique(np.asarray(list(seeds)))
    if labels.size == 0:
        raise ValueError("seed set is empty")
    try:
        return np.sort(H.label_ids(labels))
    except KeyError as exc:
        raise ValueError(f"seed set: {exc.args[0]}") from None


def check_vertex_values(H: Hypergraph, values, name: str = "values") -> np.ndarray:
    """A per-vertex array from an array of length ``n`` or a ``{label: value}`` mapping."""
    if isinstance(values, dict):
        out = np.zeros(H.n)
        for lab, val in values.items():
            try:
                (v,) = H.label_ids([lab])
            except KeyError as exc:
                raise ValueError(f"{name}: {exc.args[0]}") from None
            out[v] = float(val)
        return out
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size != H.n:
        raise ValueError(f"{name}: expected {H.n} entries, got {arr.size}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name}: entries must be finite")
    return arr
