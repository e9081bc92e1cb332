import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiplex_lp import (
    GraphError,
    Method,
    PairSet,
    PredictionConfig,
    ScoreTable,
    allocate_scores,
    build_network,
    layer_likelihood,
    pair_weight,
    rho,
    score_all_pairs,
    top_neighbors,
    universal_pairs,
)
from multiplex_lp.graph import LayerGraph, MultiplexNetwork
from multiplex_lp.predictor import _pair_weights

from conftest import random_multiplex, single_layer


def table(entries: dict) -> ScoreTable:
    pairs = PairSet.from_pairs(entries)
    vals = np.array([entries.get((a, b), entries.get((b, a))) for a, b in pairs], dtype=float)
    return ScoreTable(Method.CN, 0, pairs, vals)


def layered(sizes, n=40, seed=0):
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    layers = []
    for i, m in enumerate(sizes):
        idx = rng.choice(len(rows), size=m, replace=False)
        layers.append(LayerGraph.from_edges(i, n, rows[idx], cols[idx]))
    return MultiplexNetwork(n, tuple(layers))


# -- rho ---------------------------------------------------------------------

def test_rho_cases():
    net = layered([100, 200])
    assert rho(net, 0, 1, True) == 0.5
    net = layered([200, 100])
    assert rho(net, 0, 1, True) == 1.0
    assert rho(net, 0, 1, False) == 2.0
    net = layered([150, 150])
    assert rho(net, 0, 1, True) == rho(net, 0, 1, False) == 1.0


def test_rho_empty_predictor():
    net = build_network(3, [(0, 0, 1)], layer_count=2)
    with pytest.raises(GraphError):
        rho(net, 0, 1)


# -- top neighbors / pair weight ----------------------------------------------

def test_top_neighbors_singleton_tie_isolated():
    g = single_layer(9, [(0, 5), (1, 3), (1, 7), (0, 1)]).layer(0)
    s = table({(0, 5): 1.0, (1, 3): 2.0, (1, 7): 2.0, (0, 1): 9.0})
    a, b = top_neighbors(g, s, 0, 1)
    assert a == 5  # y=1 excluded from x's candidates
    assert b == 3  # tie between 3 and 7 -> smaller id
    a, b = top_neighbors(g, s, 8, 0)
    assert a is None and b == 1


def test_pair_weight_worked_example():
    # x=0, y=1; A=2 (S=4, W=1.0), decoy 3 (S=1); B=4 (S=2, W=2.0); S_xy=2
    g = build_network(5, [(0, 0, 2, 1.0), (0, 0, 3, 7.0), (0, 1, 4, 2.0)]).layer(0)
    s = table({(0, 1): 2.0, (0, 2): 4.0, (0, 3): 1.0, (1, 4): 2.0})
    assert top_neighbors(g, s, 0, 1) == (2, 4)
    assert pair_weight(g, s, 0, 1, 1.0) == 2.75


def test_pair_weight_degenerate():
    g = build_network(6, [(0, 0, 2, 1.5), (0, 1, 4, 2.5)]).layer(0)
    # S_xy = 0: both factors reduce to 1
    s = table({(0, 1): 0.0, (0, 2): 3.0, (1, 4): 5.0})
    assert pair_weight(g, s, 0, 1, 1.0) == (1.5 + 2.5) / 2
    # S_AX = 0 -> that factor is 1 even with S_xy > 0
    s = table({(0, 1): 2.0, (0, 2): 0.0, (1, 4): 2.0})
    assert pair_weight(g, s, 0, 1, 1.0) == (1.5 + 2.0 * 2.5) / 2
    # B absent (node 5 isolated): the divisor drops to 1
    s = table({(0, 5): 1.0, (0, 2): 2.0})
    assert pair_weight(g, s, 0, 5, 1.0) == (1 + 1.0 / 2.0) * 1.5
    # neither endpoint has neighbors
    assert pair_weight(g, s, 3, 5, 1.0) == 0.0
    with pytest.raises(GraphError):
        pair_weight(g, s, 3, 3, 1.0)


def test_vectorized_weights_match_scalar(rng):
    for trial in range(15):
        n = int(rng.integers(4, 25))
        g = random_multiplex(rng, n, 1, float(rng.uniform(0.1, 0.5))).layer(0)
        method = list(Method)[trial % 5]
        pairs = universal_pairs(n)
        scores = score_all_pairs(g, method, pairs)
        r = float(rng.uniform(0.2, 2.0))
        bw = float(rng.uniform(0.5, 3.0))
        fast = _pair_weights(g, method, pairs.u, pairs.v, r, bw)
        slow = [pair_weight(g, scores, a, b, r, bw) for a, b in pairs]
        assert fast.tolist() == slow


# -- allocation ----------------------------------------------------------------

def _support_net():
    path = [(i, i + 1) for i in range(8)]
    recs = [(0, a, b, 1.0) for a, b in path]
    for layer in (1, 2):
        recs += [(layer, a, b, 1.0) for a, b in path] + [(layer, 0, 2, 1.0)]
    return build_network(10, recs)


def test_allocate_support_products():
    net = _support_net()
    train = net.layer(0).edges()
    assert layer_likelihood(net, 0, 1, train) == pytest.approx(0.9)
    cands = universal_pairs(net) - train
    cfg = PredictionConfig(0)
    ranked = allocate_scores(net, cfg, train, cands)
    r = rho(net, 0, 1, True, target_edge_count=len(train))
    g = net.layer(0)
    s = score_all_pairs(g, cfg.base_method, universal_pairs(net))
    base_present = pair_weight(g, s, 0, 2, r)
    base_absent = pair_weight(g, s, 0, 7, r)
    assert base_present > 0 and base_absent > 0
    assert ranked.scores_for([0], [2])[0] == pytest.approx(base_present * 0.81, rel=1e-12)
    assert ranked.scores_for([0], [7])[0] == pytest.approx(base_absent * 0.01, rel=1e-12)


def test_single_layer_uses_base_weights_only():
    rng = np.random.default_rng(4)
    net = random_multiplex(rng, 20, 1, 0.2)
    train = net.layer(0).edges()
    cands = universal_pairs(net) - train
    ranked = allocate_scores(net, PredictionConfig(0), train, cands)
    assert ranked.warnings
    scores = score_all_pairs(net.layer(0), "cn", universal_pairs(net))
    expect = {p: pair_weight(net.layer(0), scores, *p, 1.0) for p in cands}
    got = {(a, b): s for a, b, s in ranked}
    assert got == expect
    order = sorted(expect, key=lambda p: (-expect[p], p))
    assert [(a, b) for a, b, _ in ranked] == order


def _random_instance(seed, n=40):
    rng = np.random.default_rng(seed)
    net = random_multiplex(rng, n, 3, 0.12)
    train = net.layer(0).edges().sample(rng, int(0.9 * net.layer(0).edge_count))
    cands = universal_pairs(net) - train
    return net, train, cands


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ranking_invariants(seed):
    net, train, cands = _random_instance(seed)
    ranked = allocate_scores(net, PredictionConfig(0), train, cands)
    assert len(ranked) == len(cands)
    assert np.all(ranked.scores >= 0)
    assert not np.any(train.contains(ranked.u, ranked.v))
    keys = list(zip((-ranked.scores).tolist(), ranked.u.tolist(), ranked.v.tolist()))
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_scale_invariance_and_determinism():
    net, train, cands = _random_instance(11)
    cfg = PredictionConfig(0)
    ref = allocate_scores(net, cfg, train, cands)
    again = allocate_scores(net, cfg, PairSet(train.keys[::-1].copy()), cands)
    assert again == ref
    for c in (0.5, 3.0, 10.0):
        scaled = allocate_scores(net.with_layer(net.layer(0).scaled(c)), cfg, train, cands)
        assert np.array_equal(scaled.u, ref.u) and np.array_equal(scaled.v, ref.v)
        np.testing.assert_allclose(scaled.scores, ref.scores * c, rtol=1e-12)


def test_behavior_weight_scales_scores():
    net, train, cands = _random_instance(5)
    ref = allocate_scores(net, PredictionConfig(0), train, cands)
    heavy = allocate_scores(net, PredictionConfig(0, behavior_weights={0: 4.0}), train, cands)
    assert np.array_equal(heavy.u, ref.u)
    np.testing.assert_allclose(heavy.scores, 4 * ref.scores, rtol=1e-12)


def test_support_boost():
    # two candidates with identical local structure; only one is backed by layer 1
    recs = [(0, 0, 1), (0, 2, 3), (0, 4, 5), (0, 6, 7)]
    recs += [(1, 0, 1), (1, 2, 3), (1, 4, 5), (1, 6, 7), (1, 1, 2)]
    net = build_network(8, recs)
    train = net.layer(0).edges()
    assert layer_likelihood(net, 0, 1, train) > 0.5
    cands = PairSet.from_pairs([(1, 2), (5, 6)])
    ranked = allocate_scores(net, PredictionConfig(0), train, cands)
    assert ranked.top(1)[0][:2] == (1, 2)


def test_config_validation():
    with pytest.raises(ValueError):
        PredictionConfig(0, behavior_weights={1: 0.0})
    with pytest.raises(ValueError):
        PredictionConfig(0, base_method="katz")
    net = single_layer(3, [(0, 1)])
    with pytest.raises(ValueError):
        allocate_scores(net, PredictionConfig(2), net.layer(0).edges(), universal_pairs(3))


def test_consistent_with_cn_when_neighbor_scores_equal():
    # circulant C_n(1, 2): every edge's best neighbor score is CN = 2, so the
    # weighted score is 1 + rho * CN / 2 for every candidate
    n = 16
    ring = [(i, (i + d) % n) for i in range(n) for d in (1, 2)]
    recs = [(layer, a, b) for layer in range(3) for a, b in ring]
    net = build_network(n, recs)
    train = net.layer(0).edges()
    cands = universal_pairs(net) - train
    ranked = allocate_scores(net, PredictionConfig(0), train, cands)
    cn = score_all_pairs(net.layer(0), "cn", cands)
    final = ranked.scores_for(cands.u, cands.v)
    for i in range(len(cands)):
        for j in range(len(cands)):
            if cn.values[i] > cn.values[j]:
                assert final[i] > final[j]
