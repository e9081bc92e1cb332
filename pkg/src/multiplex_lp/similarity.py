"""Local similarity indices on a single layer.

Scalar functions (``cn_score`` and friends) work on explicit neighbor sets and
are meant for inspection. :func:`pair_scores` and :func:`score_all_pairs`
compute the same quantities for many pairs at once from sparse two-hop
products of the adjacency matrix.

All indices are unweighted; edge weights only enter the cross-layer predictor.
Ratio indices return 0 when their denominator vanishes.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
import weakref

import numpy as np
from scipy import sparse

from .graph import GraphError, LayerGraph, PairSet, _encode, _readonly

__all__ = [
    "Method",
    "ScoreTable",
    "cn_score",
    "jaccard_score",
    "lhn_score",
    "adamic_adar_score",
    "hdi_score",
    "pair_scores",
    "score_all_pairs",
]


class Method(str, enum.Enum):
    CN = "cn"
    JC = "jc"
    AA = "aa"
    LHN = "lhn"
    HDI = "hdi"

    @classmethod
    def parse(cls, value) -> "Method":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown similarity method {value!r}") from None


def _common(graph: LayerGraph, u: int, v: int) -> tuple[set, set]:
    if u == v:
        raise GraphError("similarity of a node with itself is undefined")
    return set(graph.neighbors(u).tolist()), set(graph.neighbors(v).tolist())


def cn_score(graph: LayerGraph, u: int, v: int) -> int:
    """Number of common neighbors."""
    nu, nv = _common(graph, u, v)
    return len(nu & nv)


def jaccard_score(graph: LayerGraph, u: int, v: int) -> float:
    nu, nv = _common(graph, u, v)
    union = len(nu | nv)
    return len(nu & nv) / union if union else 0.0


def lhn_score(graph: LayerGraph, u: int, v: int) -> float:
    """Common neighbors over the product of degrees (Leicht-Holme-Newman)."""
    nu, nv = _common(graph, u, v)
    denom = len(nu) * len(nv)
    return len(nu & nv) / denom if denom else 0.0


def adamic_adar_score(graph: LayerGraph, u: int, v: int) -> float:
    nu, nv = _common(graph, u, v)
    total = 0.0
    for z in sorted(nu & nv):
        k = graph.degree(z)
        # a common neighbor is adjacent to both endpoints
        assert k >= 2
        total += 1.0 / math.log(k)
    return total


def hdi_score(graph: LayerGraph, u: int, v: int) -> float:
    """Hub-depressed index: common neighbors over the larger degree."""
    nu, nv = _common(graph, u, v)
    denom = max(len(nu), len(nv))
    return len(nu & nv) / denom if denom else 0.0


_SCALAR = {
    Method.CN: cn_score,
    Method.JC: jaccard_score,
    Method.AA: adamic_adar_score,
    Method.LHN: lhn_score,
    Method.HDI: hdi_score,
}


@dataclass(frozen=True, eq=False)
class ScoreTable:
    """Scores for a set of unordered pairs; ``values`` is aligned with ``pairs``."""

    method: Method
    layer: int
    pairs: PairSet
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != len(self.pairs):
            raise ValueError("values must align with pairs")

    def __len__(self) -> int:
        return len(self.pairs)

    def __getitem__(self, pair) -> float:
        u, v = pair
        return float(self.scores_for([u], [v])[0])

    def scores_for(self, u, v) -> np.ndarray:
        """Scores of pairs ``(u[k], v[k])``; pairs not in the table score 0."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        q = _encode(np.minimum(u, v), np.maximum(u, v))
        return _lookup(self.pairs.keys, self.values, q)

    def as_dict(self) -> dict[tuple[int, int], float]:
        return dict(zip(self.pairs, self.values.tolist()))


def _lookup(keys: np.ndarray, vals: np.ndarray, query: np.ndarray) -> np.ndarray:
    out = np.zeros(len(query), dtype=float)
    if len(keys) == 0:
        return out
    pos = np.searchsorted(keys, query)
    pos[pos == len(keys)] = 0
    hit = keys[pos] == query
    out[hit] = vals[pos[hit]]
    return out


_TWO_HOP_CACHE: "weakref.WeakKeyDictionary[LayerGraph, dict]" = weakref.WeakKeyDictionary()


def _two_hop(graph: LayerGraph, weighted_by_log: bool) -> tuple[np.ndarray, np.ndarray]:
    """Upper-triangle entries of ``A D A`` as sorted (keys, values).

    ``D`` is the identity for common-neighbor counts or ``diag(1/ln k)`` for
    Adamic-Adar. Cached per layer object.
    """
    slot = _TWO_HOP_CACHE.setdefault(graph, {})
    if weighted_by_log not in slot:
        slot[weighted_by_log] = _compute_two_hop(graph, weighted_by_log)
    return slot[weighted_by_log]


def _compute_two_hop(graph: LayerGraph, weighted_by_log: bool) -> tuple[np.ndarray, np.ndarray]:
    a = graph.adjacency
    if weighted_by_log:
        k = graph.degrees.astype(float)
        inv = np.zeros_like(k)
        ok = k >= 2
        inv[ok] = 1.0 / np.log(k[ok])
        prod = a @ sparse.diags(inv) @ a
    else:
        prod = a @ a
    prod = sparse.triu(prod, k=1).tocoo()
    keys = _encode(prod.row.astype(np.int64), prod.col.astype(np.int64))
    order = np.argsort(keys)
    return _readonly(keys[order]), _readonly(np.asarray(prod.data, dtype=float)[order])


def pair_scores(graph: LayerGraph, method, u, v) -> np.ndarray:
    """Vectorized index values for pairs ``(u[k], v[k])``."""
    method = Method.parse(method)
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if np.any(u == v):
        raise GraphError("similarity of a node with itself is undefined")
    q = _encode(np.minimum(u, v), np.maximum(u, v))
    if method is Method.AA:
        return _lookup(*_two_hop(graph, True), q)
    cn = _lookup(*_two_hop(graph, False), q)
    if method is Method.CN:
        return cn
    ku = graph.degrees[u].astype(float)
    kv = graph.degrees[v].astype(float)
    if method is Method.JC:
        denom = ku + kv - cn
    elif method is Method.LHN:
        denom = ku * kv
    else:
        denom = np.maximum(ku, kv)
    out = np.zeros_like(cn)
    nz = denom > 0
    out[nz] = cn[nz] / denom[nz]
    return out


def score_all_pairs(graph: LayerGraph, method, candidates: PairSet) -> ScoreTable:
    """Score every candidate pair on ``graph``."""
    method = Method.parse(method)
    if len(candidates) and candidates.v.max() >= graph.node_count:
        raise GraphError("candidate pair outside the node universe")
    values = pair_scores(graph, method, candidates.u, candidates.v)
    return ScoreTable(method, graph.layer_id, candidates, _readonly(values))


def scalar_score(graph: LayerGraph, method, u: int, v: int) -> float:
    return _SCALAR[Method.parse(method)](graph, u, v)

