"""How much one layer says about another.

Two structural measures are provided: a centrality-based similarity (mean of
``1 - |b_i(L1) - b_i(L2)|`` over nodes, with ``b`` the normalized betweenness)
and the average similarity of neighbors (AASN), an edge-overlap ratio. The
layer likelihood used by the cross-layer predictor also lives here.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import GraphError, MultiplexNetwork, PairSet, intersection_layer

__all__ = [
    "CentralityVector",
    "LayerSimilarityReport",
    "betweenness_centrality",
    "centrality_distance",
    "node_layer_similarity",
    "layer_similarity_centrality",
    "aasn_global",
    "aasn_local",
    "layer_likelihood",
    "layer_similarity_report",
]


@dataclass(frozen=True, eq=False)
class CentralityVector:
    layer: int
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        return float(self.values[i])


def betweenness_centrality(net: MultiplexNetwork, layer: int, *, exact: bool = False) -> CentralityVector:
    """Normalized shortest-path betweenness of every node in ``layer``.

    Brandes' accumulation over unweighted BFS trees. Each unordered source and
    target pair is counted once and the total is divided by ``(N-1)(N-2)/2``,
    so values lie in [0, 1]. With ``exact=True`` the accumulation uses
    rational arithmetic and the float result is correctly rounded.
    Networks with fewer than three nodes score zero everywhere.
    """
    g = net.layer(layer)
    n = net.node_count
    if n < 3:
        return CentralityVector(layer, np.zeros(n))
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    indptr, indices = g.indptr.tolist(), g.indices.tolist()
    adj = [indices[indptr[i]:indptr[i + 1]] for i in range(n)]
    total = [zero] * n
    for s in range(n):
        if not adj[s]:
            continue
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            dv = dist[v] + 1
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [zero] * n
        while stack:
            w = stack.pop()
            coeff = (one + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                total[w] += delta[w]
    # ordered (s, t) pairs double-count every unordered pair
    norm = (n - 1) * (n - 2)
    if exact:
        values = np.array([float(t / norm) for t in total])
    else:
        values = np.array(total, dtype=float) / norm
    return CentralityVector(layer, values)


def _check_lengths(cv1: CentralityVector, cv2: CentralityVector) -> None:
    if len(cv1) != len(cv2):
        raise ValueError(f"centrality vectors differ in length ({len(cv1)} vs {len(cv2)})")


def centrality_distance(cv1: CentralityVector, cv2: CentralityVector, i: int) -> float:
    _check_lengths(cv1, cv2)
    return abs(cv1[i] - cv2[i])


def node_layer_similarity(cv1: CentralityVector, cv2: CentralityVector, i: int) -> float:
    return 1.0 - centrality_distance(cv1, cv2, i)


def _s_cw(cv1: CentralityVector, cv2: CentralityVector) -> float:
    _check_lengths(cv1, cv2)
    return float(np.mean(1.0 - np.abs(cv1.values - cv2.values)))


def layer_similarity_centrality(net: MultiplexNetwork, l1: int, l2: int) -> float:
    """Mean per-node centrality similarity between two layers, over all N nodes."""
    cv1 = betweenness_centrality(net, l1)
    if l1 == l2:
        net.layer(l2)
        return 1.0
    return _s_cw(cv1, betweenness_centrality(net, l2))


def _overlap_degrees(net: MultiplexNetwork, l1: int, l2: int):
    return intersection_layer(net, l1, l2).degrees, net.layer(l1).degrees


def aasn_global(net: MultiplexNetwork, l1: int, l2: int) -> float:
    """Sum of overlap-layer degrees over sum of ``l1`` degrees.

    The overlap layer holds the edges present in both layers, so the value is
    the fraction of ``l1``'s edges that ``l2`` also carries.
    """
    k_common, k_1 = _overlap_degrees(net, l1, l2)
    denom = int(k_1.sum())
    if denom == 0:
        raise GraphError(f"layer {l1} has no edges")
    return int(k_common.sum()) / denom


def aasn_local(net: MultiplexNetwork, l1: int, l2: int, i: int, j: int) -> float:
    """Pair-level AASN; 0 when both nodes are isolated in ``l1``."""
    k_common, k_1 = _overlap_degrees(net, l1, l2)
    for node in (i, j):
        if not 0 <= node < net.node_count:
            raise GraphError(f"node {node} out of range")
    denom = int(k_1[i] + k_1[j])
    if denom == 0:
        return 0.0
    return int(k_common[i] + k_common[j]) / denom


def layer_likelihood(
    net: MultiplexNetwork, target: int, predictor: int, training_edges: PairSet
) -> float:
    """Laplace-smoothed probability that an observed target edge also exists in ``predictor``.

    ``(|E_pred & train| + 1) / (|train| + 2)``. An empty predictor layer carries
    no information and yields 0.5.
    """
    if predictor == target:
        raise ValueError("predictor layer must differ from the target layer")
    net.layer(target)
    pred = net.layer(predictor)
    if pred.edge_count == 0:
        return 0.5
    hits = int(np.count_nonzero(pred.has_edges(training_edges.u, training_edges.v)))
    return (hits + 1) / (len(training_edges) + 2)


@dataclass(frozen=True)
class LayerSimilarityReport:
    """Pairwise interlayer measures; matrices are indexed ``[l1][l2]``.

    ``aasn[l1][l2]`` is ``None`` when ``l1`` has no edges. ``likelihood`` is
    indexed ``[target][predictor]`` with ``None`` on the diagonal.
    """

    layer_names: list[str]
    node_count: int
    edge_counts: list[int]
    densities: list[float]
    s_cw: list[list[float]]
    aasn: list[list[float | None]]
    likelihood: list[list[float | None]]
    undefined_aasn_rows: list[int] = field(default_factory=list)


def layer_similarity_report(net: MultiplexNetwork) -> LayerSimilarityReport:
    """All pairwise measures; likelihoods treat each full layer as observed."""
    m = net.layer_count
    n = net.node_count
    cvs = [betweenness_centrality(net, l) for l in range(m)]
    s_cw = [[1.0 if a == b else _s_cw(cvs[a], cvs[b]) for b in range(m)] for a in range(m)]
    aasn: list[list[float | None]] = []
    undefined = []
    for a in range(m):
        if net.layer(a).edge_count == 0:
            aasn.append([None] * m)
            undefined.append(a)
        else:
            aasn.append([aasn_global(net, a, b) for b in range(m)])
    like = [
        [None if t == p else layer_likelihood(net, t, p, net.layer(t).edges()) for p in range(m)]
        for t in range(m)
    ]
    pairs = n * (n - 1) / 2
    return LayerSimilarityReport(
        layer_names=list(net.layer_names),
        node_count=n,
        edge_counts=[g.edge_count for g in net.layers],
        densities=[g.edge_count / pairs if pairs else 0.0 for g in net.layers],
        s_cw=s_cw,
        aasn=aasn,
        likelihood=like,
        undefined_aasn_rows=undefined,
    )
