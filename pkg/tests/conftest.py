import numpy as np
import pytest

from multiplex_lp import build_network
from multiplex_lp.graph import LayerGraph, MultiplexNetwork

# Toy graph used throughout: nodes 1..5 (node 0 isolated).
G0_EDGES = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (4, 5)]


def single_layer(n, edges, weights=None):
    w = weights or [1.0] * len(edges)
    return build_network(n, [(0, a, b, wt) for (a, b), wt in zip(edges, w)], layer_count=1)


def random_multiplex(rng, n, layers, density, weighted=True):
    """Independent G(n, p) layers with uniform weights."""
    rows, cols = np.triu_indices(n, k=1)
    out = []
    for i in range(layers):
        keep = rng.random(len(rows)) < density
        w = rng.uniform(0.5, 4.0, keep.sum()) if weighted else None
        out.append(LayerGraph.from_edges(i, n, rows[keep], cols[keep], w))
    return MultiplexNetwork(n, tuple(out))


@pytest.fixture
def g0():
    return single_layer(6, G0_EDGES)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "OUTCOMES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
