"""Ratio objectives of the form ``(e[S] - p(S)) / |S|``.

Every supported objective is induced-edge count minus a modular vertex
penalty ``p``:

========  ===============================================
dshg      ``p = 0``
adsh      ``p(v) = eps * deg(v) / 2`` outside the seed set
adshf     ``p(v) = eps * ndeg(v)`` outside the seed set
hdsp      ``p(v) = -w(v)`` (vertex rewards of any sign)
penalty   ``p`` given explicitly (any sign)
========  ===============================================
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hypergraph import Hypergraph, as_vertex_array

KINDS = ("dshg", "adsh", "adshf", "hdsp", "penalty")
ANCHORED = ("adsh", "adshf")


class ObjectiveError(ValueError):
    """Objective parameters inconsistent with the hypergraph."""


@dataclass
class ObjectiveSpec:
    """Which ratio objective is maximized, with its parameters.

    ``seeds`` holds dense vertex ids; ``values`` holds vertex rewards for
    ``hdsp`` and vertex penalties for ``penalty``.
    """

    kind: str = "dshg"
    eps: float = 0.0
    seeds: np.ndarray | None = field(default=None, repr=False)
    values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ObjectiveError(f"unknown objective {self.kind!r}; expected one of {KINDS}")
        if self.kind in ANCHORED:
            if self.seeds is None:
                raise ObjectiveError(f"{self.kind} needs a seed set")
            if self.eps < 0:
                raise ObjectiveError("eps must be nonnegative")
            self.seeds = as_vertex_array(self.seeds)
        if self.kind in ("hdsp", "penalty"):
            if self.values is None:
                raise ObjectiveError(f"{self.kind} needs per-vertex values")
            self.values = np.asarray(self.values, dtype=np.float64).ravel()

    @classmethod
    def dshg(cls) -> "ObjectiveSpec":
        return cls("dshg")

    @classmethod
    def adsh(cls, seeds, eps: float) -> "ObjectiveSpec":
        return cls("adsh", eps=float(eps), seeds=seeds)

    @classmethod
    def adshf(cls, seeds, eps: float) -> "ObjectiveSpec":
        return cls("adshf", eps=float(eps), seeds=seeds)

    @classmethod
    def hdsp(cls, rewards) -> "ObjectiveSpec":
        return cls("hdsp", values=rewards)

    @classmethod
    def with_penalty(cls, penalty) -> "ObjectiveSpec":
        return cls("penalty", values=penalty)

    def validate(self, H: Hypergraph) -> None:
        if self.seeds is not None:
            if self.seeds.size == 0:
                raise ObjectiveError("seed set is empty")
            if self.seeds[0] < 0 or self.seeds[-1] >= H.n:
                raise ObjectiveError("seed set is not a subset of the vertex set")
        if self.values is not None and self.values.size != H.n:
            raise ObjectiveError(f"expected {H.n} vertex values, got {self.values.size}")

    def seed_mask(self, H: Hypergraph) -> np.ndarray:
        mask = np.zeros(H.n, dtype=bool)
        if self.seeds is not None:
            mask[self.seeds] = True
        return mask

    def penalty(self, H: Hypergraph) -> np.ndarray:
        """The modular penalty ``p`` as a length-``n`` array."""
        self.validate(H)
        if self.kind == "dshg":
            return np.zeros(H.n)
        if self.kind == "adsh":
            p = self.eps * H.deg / 2.0
        elif self.kind == "adshf":
            p = self.eps * H.ndeg
        elif self.kind == "hdsp":
            return -self.values
        else:
            return self.values.copy()
        p = p.copy()
        p[self.seeds] = 0.0
        return p

    def penalty_at(self, H: Hypergraph, S: np.ndarray) -> np.ndarray:
        """Penalty restricted to ``S`` without materializing the full vector."""
        if self.kind == "dshg":
            return np.zeros(S.size)
        if self.kind in ANCHORED:
            base = H.deg[S] / 2.0 if self.kind == "adsh" else H.ndeg[S]
            out = self.eps * base
            out[np.isin(S, self.seeds)] = 0.0
            return out
        return -self.values[S] if self.kind == "hdsp" else self.values[S]

    def f(self, H: Hypergraph, S) -> float:
        """Numerator ``e[S] - p(S)``; touches only hyperedges incident to ``S``."""
        S = as_vertex_array(S)
        return H.e_in(S) - float(self.penalty_at(H, S).sum())

    def describe(self) -> dict:
        out = {"objective": self.kind}
        if self.kind in ANCHORED:
            out["eps"] = self.eps
            out["n_seeds"] = int(self.seeds.size)
        return out


def evaluate_objective(H: Hypergraph, spec: ObjectiveSpec, S) -> float:
    """``(e[S] - p(S)) / |S|``, with the empty set scoring ``-inf``."""
    S = as_vertex_array(S)
    spec.validate(H)
    if S.size == 0:
        return -np.inf
    if S[0] < 0 or S[-1] >= H.n:
        raise ObjectiveError("set is not a subset of the vertex set")
    return spec.f(H, S) / S.size
