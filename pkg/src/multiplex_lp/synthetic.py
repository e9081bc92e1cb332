"""Correlated multiplex networks for desk-scale experiments.

Layer 0 is an Erdos-Renyi graph. Every further layer copies each layer-0 edge
independently with probability ``correlation`` and is then padded with
uniformly random noise edges up to its size. When ``target_layer_density`` is
set, layer 0 is thinned to that density *before* the other layers are
derived from it, which models a sparse target layer whose links still show up
in richer layers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import LayerGraph, MultiplexNetwork

__all__ = ["SyntheticSpec", "generate_synthetic"]


@dataclass(frozen=True)
class SyntheticSpec:
    nodes: int
    layers: int = 3
    base_density: float = 0.02
    correlation: float = 0.8
    target_layer_density: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.nodes < 2:
            raise ValueError("need at least 2 nodes")
        if self.layers < 1:
            raise ValueError("need at least 1 layer")
        if not 0 < self.base_density < 1:
            raise ValueError(f"base_density must lie in (0, 1), got {self.base_density}")
        if not 0 <= self.correlation <= 1:
            raise ValueError(f"correlation must lie in [0, 1], got {self.correlation}")
        if self.target_layer_density is not None and not 0 < self.target_layer_density < 1:
            raise ValueError(f"target_layer_density must lie in (0, 1), got {self.target_layer_density}")


def generate_synthetic(spec: SyntheticSpec) -> MultiplexNetwork:
    """Draw a network from ``spec``; identical specs give identical networks.

    Weights are uniform on [1, 5]. Raises ``ValueError`` if a derived layer
    would need more copied edges than its size allows.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.nodes
    rows, cols = np.triu_indices(n, k=1)
    n_pairs = len(rows)

    base = np.flatnonzero(rng.random(n_pairs) < spec.base_density)
    if spec.target_layer_density is not None:
        keep = spec.target_layer_density / spec.base_density
        if keep > 1:
            raise ValueError("target_layer_density exceeds base_density; cannot thin upward")
        base = base[rng.random(len(base)) < keep]
    p0 = spec.target_layer_density or spec.base_density
    # derived layers match the realized layer-0 size scaled to base density
    derived_size = int(round(len(base) * spec.base_density / p0))

    chosen = [base]
    for _ in range(1, spec.layers):
        copied = base[rng.random(len(base)) < spec.correlation]
        need = derived_size - len(copied)
        if need < 0:
            raise ValueError(
                f"correlation {spec.correlation} copies {len(copied)} edges, more than the "
                f"{derived_size} a derived layer may hold"
            )
        free = np.ones(n_pairs, dtype=bool)
        free[copied] = False
        pool = np.flatnonzero(free)
        if need > len(pool):
            raise ValueError("requested density is infeasible")
        noise = rng.choice(pool, size=need, replace=False)
        chosen.append(np.sort(np.concatenate([copied, noise])))

    layers = []
    for i, idx in enumerate(chosen):
        w = rng.uniform(1.0, 5.0, size=len(idx))
        layers.append(LayerGraph.from_edges(i, n, rows[idx], cols[idx], w))
    return MultiplexNetwork(n, tuple(layers))
