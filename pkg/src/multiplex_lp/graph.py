"""Immutable multiplex network representation.

Every layer is an undirected, weighted simple graph over the same dense node
universe ``0..N-1``. Adjacency is stored CSR-style (sorted neighbor arrays per
node) so neighbor, degree and weight queries are cheap and all-pairs scoring
can be done with sparse matrix products.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy import sparse

__all__ = [
    "GraphError",
    "PairSet",
    "LayerGraph",
    "MultiplexNetwork",
    "build_network",
    "intersection_layer",
    "universal_pairs",
]

_SHIFT = np.int64(32)
_MASK = np.int64((1 << 32) - 1)


class GraphError(ValueError):
    """Invalid graph input or out-of-range query."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _encode(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return (u.astype(np.int64) << _SHIFT) | v.astype(np.int64)


class PairSet:
    """Set of unordered node pairs, stored canonically as ``(min, max)``.

    Pairs are kept as a sorted array of 64-bit keys, so set algebra and
    membership tests are vectorized. Iteration yields ``(u, v)`` tuples in
    lexicographic order.
    """

    __slots__ = ("_keys",)

    def __init__(self, keys: np.ndarray | None = None, *, _trusted: bool = False):
        if keys is None:
            keys = np.empty(0, dtype=np.int64)
        elif not _trusted:
            keys = np.unique(np.asarray(keys, dtype=np.int64))
        self._keys = _readonly(keys)

    @classmethod
    def from_arrays(cls, u, v) -> "PairSet":
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise GraphError("pair arrays differ in length")
        if np.any(u < 0) or np.any(v < 0):
            raise GraphError("node ids must be non-negative")
        if np.any(u == v):
            i = int(np.flatnonzero(u == v)[0])
            raise GraphError(f"self-loop pair ({u[i]}, {v[i]})")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        return cls(_encode(lo, hi))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "PairSet":
        arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        return cls.from_arrays(arr[:, 0], arr[:, 1])

    @property
    def keys(self) -> np.ndarray:
        return self._keys

    @property
    def u(self) -> np.ndarray:
        return self._keys >> _SHIFT

    @property
    def v(self) -> np.ndarray:
        return self._keys & _MASK

    def contains(self, u, v) -> np.ndarray:
        """Vectorized membership test for pairs ``(u[k], v[k])``."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        q = _encode(np.minimum(u, v), np.maximum(u, v))
        return _member(self._keys, q)

    def sample(self, rng: np.random.Generator, size: int) -> "PairSet":
        """Uniform sample of ``size`` pairs without replacement."""
        idx = rng.choice(len(self._keys), size=size, replace=False)
        return PairSet(np.sort(self._keys[idx]), _trusted=True)

    def __len__(self) -> int:
        return len(self._keys)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return zip(self.u.tolist(), self.v.tolist())

    def __contains__(self, pair) -> bool:
        a, b = pair
        if a == b:
            return False
        return bool(self.contains([a], [b])[0])

    def __or__(self, other: "PairSet") -> "PairSet":
        return PairSet(np.union1d(self._keys, other._keys), _trusted=True)

    def __and__(self, other: "PairSet") -> "PairSet":
        return PairSet(np.intersect1d(self._keys, other._keys, assume_unique=True), _trusted=True)

    def __sub__(self, other: "PairSet") -> "PairSet":
        return PairSet(np.setdiff1d(self._keys, other._keys, assume_unique=True), _trusted=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairSet):
            return NotImplemented
        return np.array_equal(self._keys, other._keys)

    def __hash__(self):
        return hash(self._keys.tobytes())

    def __repr__(self) -> str:
        head = ", ".join(map(str, list(self)[:4]))
        more = ", ..." if len(self) > 4 else ""
        return f"PairSet([{head}{more}], n={len(self)})"


def _member(sorted_keys: np.ndarray, query: np.ndarray) -> np.ndarray:
    if len(sorted_keys) == 0:
        return np.zeros(len(query), dtype=bool)
    pos = np.searchsorted(sorted_keys, query)
    pos[pos == len(sorted_keys)] = 0
    return sorted_keys[pos] == query


@dataclass(frozen=True, eq=False)
class LayerGraph:
    """One undirected weighted layer in CSR form.

    Use :meth:`from_edges` rather than the raw constructor; it validates and
    canonicalizes the input.
    """

    layer_id: int
    node_count: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    @classmethod
    def from_edges(cls, layer_id: int, node_count: int, u, v, w=None) -> "LayerGraph":
        """Build a layer from an edge list; duplicate pairs sum their weights."""
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        w = np.ones(len(u)) if w is None else np.asarray(w, dtype=float).ravel()
        if not (len(u) == len(v) == len(w)):
            raise GraphError("edge arrays differ in length")
        if len(u):
            if u.min() < 0 or v.min() < 0 or max(u.max(), v.max()) >= node_count:
                raise GraphError(f"layer {layer_id}: node id out of range 0..{node_count - 1}")
            loops = np.flatnonzero(u == v)
            if len(loops):
                k = int(loops[0])
                raise GraphError(f"layer {layer_id}: self-loop on node {u[k]}")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                k = int(np.flatnonzero(~(w > 0) | ~np.isfinite(w))[0])
                raise GraphError(f"layer {layer_id}: non-positive weight {w[k]} on ({u[k]}, {v[k]})")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        keys, inv = np.unique(_encode(lo, hi), return_inverse=True)
        weights = np.bincount(inv.ravel(), weights=w, minlength=len(keys)) if len(keys) else np.empty(0)
        a = keys >> _SHIFT
        b = keys & _MASK
        rows = np.concatenate([a, b])
        cols = np.concatenate([b, a])
        vals = np.concatenate([weights, weights])
        m = sparse.csr_matrix((vals, (rows, cols)), shape=(node_count, node_count))
        m.sort_indices()
        return cls(
            layer_id=int(layer_id),
            node_count=int(node_count),
            indptr=_readonly(m.indptr.astype(np.int64)),
            indices=_readonly(m.indices.astype(np.int64)),
            data=_readonly(m.data.astype(float)),
        )

    # -- structural queries ------------------------------------------------

    def _check(self, u: int) -> None:
        if not 0 <= u < self.node_count:
            raise GraphError(f"node {u} out of range 0..{self.node_count - 1}")

    def neighbors(self, u: int) -> np.ndarray:
        self._check(u)
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def degree(self, u: int) -> int:
        self._check(u)
        return int(self.indptr[u + 1] - self.indptr[u])

    def edge_weight(self, u: int, v: int) -> float | None:
        """Weight of edge ``(u, v)`` or ``None`` when absent."""
        self._check(u)
        self._check(v)
        lo, hi = self.indptr[u], self.indptr[u + 1]
        pos = lo + np.searchsorted(self.indices[lo:hi], v)
        if pos < hi and self.indices[pos] == v:
            return float(self.data[pos])
        return None

    @cached_property
    def degrees(self) -> np.ndarray:
        return _readonly(np.diff(self.indptr))

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def _upper(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        rows = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees)
        keep = rows < self.indices
        return rows[keep], self.indices[keep], self.data[keep]

    def edges(self) -> PairSet:
        a, b, _ = self._upper
        return PairSet(_encode(a, b), _trusted=True)

    def edge_list(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Arrays ``(u, v, weight)`` with ``u < v``, lexicographically sorted."""
        return self._upper

    def has_edges(self, u, v) -> np.ndarray:
        return self.edges().contains(u, v)

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        """Binary symmetric adjacency matrix."""
        return sparse.csr_matrix(
            (np.ones(len(self.indices)), self.indices, self.indptr),
            shape=(self.node_count, self.node_count),
        )

    def weight_matrix(self) -> sparse.csr_matrix:
        return sparse.csr_matrix(
            (self.data.copy(), self.indices, self.indptr), shape=(self.node_count, self.node_count)
        )

    # -- derived layers ----------------------------------------------------

    def restrict(self, pairs: PairSet) -> "LayerGraph":
        """Sub-layer keeping only the edges listed in ``pairs``."""
        a, b, w = self._upper
        keep = pairs.contains(a, b)
        return LayerGraph.from_edges(self.layer_id, self.node_count, a[keep], b[keep], w[keep])

    def scaled(self, factor: float) -> "LayerGraph":
        a, b, w = self._upper
        return LayerGraph.from_edges(self.layer_id, self.node_count, a, b, w * factor)

    def __repr__(self) -> str:
        return f"LayerGraph(layer_id={self.layer_id}, nodes={self.node_count}, edges={self.edge_count})"


@dataclass(frozen=True, eq=False)
class MultiplexNetwork:
    """Aligned layers over a shared node universe.

    ``labels[i]`` is the external label of internal node ``i``; ``layer_names``
    holds the external layer ids (or user-supplied names).
    """

    node_count: int
    layers: tuple[LayerGraph, ...]
    labels: tuple = ()
    layer_names: tuple[str, ...] = ()
    _label_index: Mapping = field(default=None, repr=False)

    def __post_init__(self):
        if not self.layers:
            raise GraphError("a multiplex network needs at least one layer")
        for i, layer in enumerate(self.layers):
            if layer.layer_id != i:
                raise GraphError(f"layer at position {i} has id {layer.layer_id}")
            if layer.node_count != self.node_count:
                raise GraphError(f"layer {i} has node universe {layer.node_count}, expected {self.node_count}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(self.node_count)))
        if len(self.labels) != self.node_count:
            raise GraphError("label map size does not match node count")
        if not self.layer_names:
            object.__setattr__(self, "layer_names", tuple(str(i) for i in range(len(self.layers))))
        object.__setattr__(self, "_label_index", {lab: i for i, lab in enumerate(self.labels)})

    @property
    def layer_count(self) -> int:
        return len(self.layers)

    def layer(self, layer: int) -> LayerGraph:
        if not 0 <= layer < len(self.layers):
            raise GraphError(f"layer {layer} out of range 0..{len(self.layers) - 1}")
        return self.layers[layer]

    def neighbors(self, layer: int, u: int) -> np.ndarray:
        return self.layer(layer).neighbors(u)

    def degree(self, layer: int, u: int) -> int:
        return self.layer(layer).degree(u)

    def edge_weight(self, layer: int, u: int, v: int) -> float | None:
        return self.layer(layer).edge_weight(u, v)

    def node_id(self, label) -> int:
        return self._label_index[label]

    def with_layer(self, layer: LayerGraph) -> "MultiplexNetwork":
        """Copy with one layer replaced (same id)."""
        layers = list(self.layers)
        layers[layer.layer_id] = layer
        return MultiplexNetwork(self.node_count, tuple(layers), self.labels, self.layer_names)

    def __repr__(self) -> str:
        counts = ", ".join(str(g.edge_count) for g in self.layers)
        return f"MultiplexNetwork(nodes={self.node_count}, layer_edges=[{counts}])"


def build_network(
    node_count: int,
    edges: Iterable[Sequence],
    *,
    layer_count: int | None = None,
    labels: Sequence | None = None,
    layer_names: Sequence[str] | None = None,
) -> MultiplexNetwork:
    """Build a network from ``(layer, u, v[, weight])`` records.

    Layer ids must be contiguous from 0 (pass ``layer_count`` to allow
    trailing empty layers). Duplicate pairs within a layer collapse by
    summing their weights; the weight defaults to 1.0.
    """
    per_layer: dict[int, list] = {}
    for rec in edges:
        if len(rec) == 3:
            layer, u, v = rec
            w = 1.0
        elif len(rec) == 4:
            layer, u, v, w = rec
            w = 1.0 if w is None else float(w)
        else:
            raise GraphError(f"edge record must have 3 or 4 fields: {rec!r}")
        if u == v:
            raise GraphError(f"self-loop in record {tuple(rec)!r}")
        if not w > 0:
            raise GraphError(f"non-positive weight in record {tuple(rec)!r}")
        per_layer.setdefault(int(layer), []).append((int(u), int(v), w))
    n_layers = layer_count if layer_count is not None else (max(per_layer) + 1 if per_layer else 1)
    if per_layer and (min(per_layer) < 0 or max(per_layer) >= n_layers):
        raise GraphError("layer ids must lie in 0..layer_count-1")
    if layer_count is None and sorted(per_layer) != list(range(n_layers)):
        raise GraphError(f"layer ids must be contiguous from 0, got {sorted(per_layer)}")
    layers = []
    for i in range(n_layers):
        recs = per_layer.get(i, [])
        arr = np.array(recs, dtype=float).reshape(-1, 3)
        layers.append(LayerGraph.from_edges(i, node_count, arr[:, 0], arr[:, 1], arr[:, 2]))
    return MultiplexNetwork(
        node_count=int(node_count),
        layers=tuple(layers),
        labels=tuple(labels) if labels is not None else (),
        layer_names=tuple(layer_names) if layer_names is not None else (),
    )


def intersection_layer(net: MultiplexNetwork, l1: int, l2: int) -> LayerGraph:
    """Edges present in both layers, weighted by the smaller of the two weights.

    The result carries layer id ``l1``.
    """
    g1, g2 = net.layer(l1), net.layer(l2)
    a1, b1, w1 = g1.edge_list()
    a2, b2, w2 = g2.edge_list()
    k1, k2 = _encode(a1, b1), _encode(a2, b2)
    common, i1, i2 = np.intersect1d(k1, k2, assume_unique=True, return_indices=True)
    return LayerGraph.from_edges(
        l1, net.node_count, common >> _SHIFT, common & _MASK, np.minimum(w1[i1], w2[i2])
    )


def universal_pairs(net_or_n: MultiplexNetwork | int) -> PairSet:
    """All ``N(N-1)/2`` unordered node pairs."""
    n = net_or_n.node_count if isinstance(net_or_n, MultiplexNetwork) else int(net_or_n)
    if n < 2:
        raise GraphError("universal pair set needs at least 2 nodes")
    a, b = np.triu_indices(n, k=1)
    return PairSet(_encode(a, b), _trusted=True)
