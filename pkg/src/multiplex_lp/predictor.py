"""Weighted cross-layer link prediction.

A candidate pair ``(x, y)`` in the target layer first gets a structural weight
built from the strongest-scoring neighbor of each endpoint::

    W_T1 = 1 + rho * S_xy / S_ax
    W_T2 = 1 + rho * S_xy / S_by
    W_xy = (W_T1 * W_ax + W_T2 * W_by) / 2

where ``a`` (``b``) is the neighbor of ``x`` (``y``) with the highest base
similarity. The weight is then multiplied, for every other layer, by that
layer's likelihood when the pair is present there and by its complement when
it is absent.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .graph import GraphError, LayerGraph, MultiplexNetwork, PairSet, _encode, _readonly
from .interlayer import layer_likelihood
from .similarity import Method, ScoreTable, _lookup, pair_scores

__all__ = [
    "PredictionConfig",
    "RankedPrediction",
    "rho",
    "top_neighbors",
    "pair_weight",
    "allocate_scores",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PredictionConfig:
    target_layer: int = 0
    base_method: Method = Method.CN
    rho_damping: bool = True
    behavior_weights: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "base_method", Method.parse(self.base_method))
        if self.target_layer < 0:
            raise ValueError("target_layer must be non-negative")
        for layer, w in self.behavior_weights.items():
            if not w > 0:
                raise ValueError(f"behavior weight for layer {layer} must be positive, got {w}")

    def behavior_weight(self, layer: int) -> float:
        return float(self.behavior_weights.get(layer, 1.0))

    def validate(self, net: MultiplexNetwork) -> None:
        if self.target_layer >= net.layer_count:
            raise ValueError(
                f"target layer {self.target_layer} out of range (network has {net.layer_count} layers)"
            )

    def to_dict(self) -> dict:
        return {
            "target_layer": self.target_layer,
            "base_method": self.base_method.value,
            "rho_damping": self.rho_damping,
            "behavior_weights": {str(k): v for k, v in sorted(self.behavior_weights.items())},
        }


@dataclass(frozen=True, eq=False)
class RankedPrediction:
    """Candidate pairs sorted by score (descending), ties by ``(u, v)`` ascending."""

    u: np.ndarray
    v: np.ndarray
    scores: np.ndarray
    warnings: tuple[str, ...] = ()

    @classmethod
    def from_scores(cls, pairs: PairSet, scores: np.ndarray, warnings=()) -> "RankedPrediction":
        u, v = pairs.u, pairs.v
        order = np.lexsort((v, u, -scores))
        return cls(
            _readonly(u[order]), _readonly(v[order]), _readonly(np.asarray(scores, dtype=float)[order]),
            tuple(warnings),
        )

    def __len__(self) -> int:
        return len(self.scores)

    def __iter__(self):
        return zip(self.u.tolist(), self.v.tolist(), self.scores.tolist())

    def head(self, k: int) -> "RankedPrediction":
        """The ``k`` best-ranked pairs as a new ranking."""
        return RankedPrediction(self.u[:k], self.v[:k], self.scores[:k], self.warnings)

    def top(self, k: int) -> list[tuple[int, int, float]]:
        return list(zip(self.u[:k].tolist(), self.v[:k].tolist(), self.scores[:k].tolist()))

    @property
    def pairs(self) -> PairSet:
        return PairSet(np.sort(_encode(self.u, self.v)), _trusted=True)

    def _index(self) -> tuple[np.ndarray, np.ndarray]:
        cached = self.__dict__.get("_sorted")
        if cached is None:
            keys = _encode(self.u, self.v)
            order = np.argsort(keys)
            cached = (keys[order], self.scores[order])
            object.__setattr__(self, "_sorted", cached)
        return cached

    def scores_for(self, u, v) -> np.ndarray:
        """Scores of arbitrary pairs; unranked pairs score 0."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        return _lookup(*self._index(), _encode(np.minimum(u, v), np.maximum(u, v)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RankedPrediction):
            return NotImplemented
        return (
            np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.scores, other.scores)
        )

    __hash__ = None


def rho(
    net: MultiplexNetwork,
    target: int,
    predictor: int,
    damping: bool = True,
    *,
    target_edge_count: int | None = None,
) -> float:
    """Edge-count ratio ``|E_target| / |E_predictor|``.

    With damping, a ratio above 1 is halved. ``target_edge_count`` overrides
    the target layer's size (e.g. with the training portion only).
    """
    e_pred = net.layer(predictor).edge_count
    if e_pred == 0:
        raise GraphError(f"predictor layer {predictor} has no edges")
    e_target = net.layer(target).edge_count if target_edge_count is None else target_edge_count
    ratio = e_target / e_pred
    if damping and ratio > 1:
        return ratio / 2
    return ratio


def top_neighbors(
    graph: LayerGraph, scores: ScoreTable, x: int, y: int
) -> tuple[int | None, int | None]:
    """Highest-scoring neighbor of ``x`` (excluding ``y``) and of ``y`` (excluding ``x``).

    Ties go to the smaller node id; ``None`` when no candidate exists.
    """

    def best(node: int, other: int) -> int | None:
        cands = [int(z) for z in graph.neighbors(node) if z != other]
        if not cands:
            return None
        vals = scores.scores_for(cands, [node] * len(cands))
        return cands[int(np.argmax(vals))]  # argmax keeps the first (smallest id) maximum

    return best(x, y), best(y, x)


def pair_weight(
    graph: LayerGraph,
    scores: ScoreTable,
    x: int,
    y: int,
    rho_value: float,
    behavior_weight: float = 1.0,
) -> float:
    """Structural weight of candidate ``(x, y)`` from its top neighbors.

    A zero neighbor score turns its ``1 + rho * S_xy / S`` factor into 1. A
    missing neighbor drops its term and the average is taken over the
    remaining one; with neither, the weight is 0.
    """
    if x == y:
        raise GraphError("pair_weight needs two distinct nodes")
    a, b = top_neighbors(graph, scores, x, y)
    s_xy = scores[(x, y)]
    terms = []
    for nb, end in ((a, x), (b, y)):
        if nb is None:
            continue
        s_nb = scores[(nb, end)]
        factor = 1.0 + rho_value * s_xy / s_nb if s_nb != 0 else 1.0
        terms.append(factor * (graph.edge_weight(nb, end) * behavior_weight))
    if not terms:
        return 0.0
    return (terms[0] + terms[1]) / 2 if len(terms) == 2 else terms[0]


def _best_two(graph: LayerGraph, edge_score: np.ndarray):
    """Per node, the top-two neighbors by score (ties to smaller id).

    ``edge_score`` is aligned with the CSR slots of ``graph``. Returns arrays
    of neighbor ids (-1 if missing), their scores and edge weights.
    """
    n = graph.node_count
    owner = np.repeat(np.arange(n, dtype=np.int64), graph.degrees)
    order = np.lexsort((graph.indices, -edge_score, owner))
    start = graph.indptr[:-1]
    deg = graph.degrees
    out = []
    for rank in (0, 1):
        ok = deg > rank
        slot = np.full(n, -1, dtype=np.int64)
        slot[ok] = order[start[ok] + rank]
        nb = np.where(ok, graph.indices[np.maximum(slot, 0)], -1)
        sc = np.where(ok, edge_score[np.maximum(slot, 0)], 0.0)
        wt = np.where(ok, graph.data[np.maximum(slot, 0)], 0.0)
        out.append((nb, sc, wt))
    return out


def _pair_weights(
    graph: LayerGraph,
    method: Method,
    u: np.ndarray,
    v: np.ndarray,
    rho_value: float,
    behavior_weight: float,
) -> np.ndarray:
    """Vectorized :func:`pair_weight` over candidate arrays."""
    if len(u) == 0:
        return np.zeros(0)
    owner = np.repeat(np.arange(graph.node_count, dtype=np.int64), graph.degrees)
    edge_score = pair_scores(graph, method, owner, graph.indices) if len(owner) else np.zeros(0)
    (nb1, sc1, wt1), (nb2, sc2, wt2) = _best_two(graph, edge_score)
    s_xy = pair_scores(graph, method, u, v)

    def side(end: np.ndarray, other: np.ndarray):
        # skip the other endpoint if it happens to be the best neighbor
        use_second = nb1[end] == other
        nb = np.where(use_second, nb2[end], nb1[end])
        s = np.where(use_second, sc2[end], sc1[end])
        w = np.where(use_second, wt2[end], wt1[end]) * behavior_weight
        present = nb >= 0
        factor = np.ones(len(end))
        nz = s != 0
        factor[nz] = 1.0 + rho_value * s_xy[nz] / s[nz]
        return np.where(present, factor * w, 0.0), present

    t1, p1 = side(u, v)
    t2, p2 = side(v, u)
    both = p1 & p2
    return np.where(both, (t1 + t2) / 2, t1 + t2)


def allocate_scores(
    net: MultiplexNetwork,
    config: PredictionConfig,
    training_edges: PairSet,
    candidates: PairSet,
) -> RankedPrediction:
    """Rank ``candidates`` in the target layer using every layer of ``net``.

    The base score is the structural weight on the target layer's training
    graph. Each predictor layer then multiplies it by its likelihood ``p`` if
    it carries the pair, else by ``1 - p``. ``rho`` is taken against the
    predictor with the highest likelihood (lowest id on ties).
    """
    config.validate(net)
    target = config.target_layer
    train_graph = net.layer(target).restrict(training_edges)
    predictors = [l for l in range(net.layer_count) if l != target]
    warnings = []
    likelihoods = {p: layer_likelihood(net, target, p, training_edges) for p in predictors}
    if not predictors:
        warnings.append("single-layer network: no predictor layers, base weights only")
        log.warning(warnings[-1])
        rho_value = 1.0
    else:
        usable = [p for p in predictors if net.layer(p).edge_count > 0]
        if usable:
            best = max(usable, key=lambda p: (likelihoods[p], -p))
            rho_value = rho(net, target, best, config.rho_damping, target_edge_count=len(training_edges))
        else:
            rho_value = 1.0
    u, v = candidates.u, candidates.v
    score = _pair_weights(
        train_graph, config.base_method, u, v, rho_value, config.behavior_weight(target)
    )
    for p in predictors:
        like = likelihoods[p]
        present = net.layer(p).has_edges(u, v)
        score = score * np.where(present, like, 1.0 - like)
    return RankedPrediction.from_scores(candidates, score, warnings)
