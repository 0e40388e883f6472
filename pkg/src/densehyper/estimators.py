"""scikit-learn style wrappers around the exact solvers.

``X`` is a :class:`~densehyper.hypergraph.Hypergraph` or an iterable of
hyperedges (vertex labels). Seeds are given as labels. After ``fit`` the
estimators expose ``support_`` (dense vertex ids), ``labels_`` (original
labels), ``density_`` and the full ``report_``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .objectives import ObjectiveSpec
from .solvers import solve
from .validation import check_hypergraph, check_seeds, check_vertex_values


class _DenseSetMixin:
    def _store(self, H, report):
        self.hypergraph_ = H
        self.report_ = report
        self.support_ = report.best_set
        self.labels_ = H.labels[report.best_set]
        self.density_ = report.best_density
        self.n_iter_ = report.iterations
        return self

    def predict(self, X=None):
        """Boolean membership of every vertex of ``X`` (default: the fitted hypergraph)."""
        check_is_fitted(self, "support_")
        H = self.hypergraph_ if X is None else check_hypergraph(X)
        return np.isin(H.labels, self.labels_)

    def fit_predict(self, X, *args, **kwargs):
        return self.fit(X, *args, **kwargs).predict()


class DensestSubhypergraph(_DenseSetMixin, BaseEstimator):
    """Exact densest subhypergraph, optionally with per-vertex rewards.

    Parameters
    ----------
    method : {"di", "bs", "peel"}
        Density improvement (exact), bisection (exact up to the default gap)
        or greedy peeling (heuristic).
    """

    def __init__(self, method: str = "di"):
        self.method = method

    def fit(self, X, y=None, vertex_weights=None):
        H = check_hypergraph(X)
        if vertex_weights is None:
            spec = ObjectiveSpec.dshg()
        else:
            spec = ObjectiveSpec.hdsp(check_vertex_values(H, vertex_weights, "vertex_weights"))
        return self._store(H, solve(H, spec, method=self.method))


class AnchoredDensestSubhypergraph(_DenseSetMixin, BaseEstimator):
    """Densest subhypergraph near a seed set, penalizing volume outside it.

    Parameters
    ----------
    eps : float
        Locality parameter; larger values keep the answer closer to the seeds.
    penalty : {"vol", "fracvol"}
        Charge ``eps * deg(v) / 2`` or ``eps * ndeg(v)`` per vertex outside the seeds.
    method : {"auto", "local", "di", "bs", "peel"}
        ``"auto"`` picks the strongly-local solver for ``vol`` with
        ``eps >= 1`` and global density improvement otherwise.
    """

    def __init__(self, eps: float = 1.0, penalty: str = "vol", method: str = "auto"):
        self.eps = eps
        self.penalty = penalty
        self.method = method

    def fit(self, X, seeds=None):
        if self.penalty not in ("vol", "fracvol"):
            raise ValueError(f"penalty must be 'vol' or 'fracvol', got {self.penalty!r}")
        H = check_hypergraph(X)
        R = check_seeds(H, seeds)
        if self.penalty == "vol":
            spec = ObjectiveSpec.adsh(R, self.eps)
        else:
            spec = ObjectiveSpec.adshf(R, self.eps)
        method = self.method
        if method == "auto":
            method = "local" if self.penalty == "vol" and self.eps >= 1 else "di"
        self.seeds_ = R
        return self._store(H, solve(H, spec, method=method))
