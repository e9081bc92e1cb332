import numpy as np
import pytest
from scipy.stats import rankdata

from multiplex_lp import (
    PairSet,
    PredictionConfig,
    RankedPrediction,
    SplitSpec,
    auc,
    precision_at,
    run_benchmark,
    split_edges,
    universal_pairs,
)
from multiplex_lp.graph import LayerGraph, MultiplexNetwork

from conftest import random_multiplex


def mann_whitney_auc(pos, neg):
    """Rank-sum statistic with mid-ranks for ties."""
    ranks = rankdata(np.concatenate([pos, neg]))
    n1, n2 = len(pos), len(neg)
    u = ranks[:n1].sum() - n1 * (n1 + 1) / 2
    return u / (n1 * n2)


def net_with_edges(m, n=60, seed=0):
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    idx = rng.choice(len(rows), size=m, replace=False)
    return MultiplexNetwork(n, (LayerGraph.from_edges(0, n, rows[idx], cols[idx]),))


def ranking(pairs: PairSet, scores) -> RankedPrediction:
    return RankedPrediction.from_scores(pairs, np.asarray(scores, dtype=float))


# -- splits ---------------------------------------------------------------------

def test_fraction_split_sizes():
    net = net_with_edges(100)
    train, test = split_edges(net, 0, SplitSpec(0.1, trials=20, seed=3), 0)
    assert len(test) == 10 and len(train) == 90


def test_split_deterministic_and_partitions():
    net = net_with_edges(300)
    spec = SplitSpec(0.1, trials=5, seed=99)
    edges = net.layer(0).edges()
    for t in range(5):
        a = split_edges(net, 0, spec, t)
        b = split_edges(net, 0, spec, t)
        assert a[0] == b[0] and a[1] == b[1]
        train, test = a
        assert (train | test) == edges and len(train & test) == 0
    assert split_edges(net, 0, spec, 0)[1] != split_edges(net, 0, spec, 1)[1]


def test_count_split_on_large_layer():
    n = 1000
    rng = np.random.default_rng(1)
    rows, cols = np.triu_indices(n, k=1)
    idx = rng.choice(len(rows), size=398_230, replace=False)
    net = MultiplexNetwork(n, (LayerGraph.from_edges(0, n, rows[idx], cols[idx]),))
    assert net.layer(0).edge_count == 398_230
    train, test = split_edges(net, 0, SplitSpec(holdout_count=600, trials=1, seed=0), 0)
    assert len(test) == 600 and len(train) == 398_230 - 600


def test_split_errors():
    net = net_with_edges(50)
    with pytest.raises(ValueError):
        split_edges(net, 0, SplitSpec(holdout_count=50, trials=1), 0)
    with pytest.raises(ValueError):
        split_edges(net, 0, SplitSpec(trials=2), 2)
    for bad in (dict(holdout_fraction=0.0), dict(holdout_fraction=1.0), dict(trials=0), dict(holdout_count=0)):
        with pytest.raises(ValueError):
            SplitSpec(**bad)


# -- AUC ----------------------------------------------------------------------------

def test_auc_by_hand():
    test = PairSet.from_pairs([(0, i) for i in range(1, 11)])
    non = PairSet.from_pairs([(20, 21)])
    pairs = test | non
    # seven above, two tied, one below the non-edge score 5
    scores = {(0, i): s for i, s in zip(range(1, 11), [9, 9, 9, 9, 9, 9, 9, 5, 5, 1])}
    scores[(20, 21)] = 5
    r = ranking(pairs, [scores[p] for p in pairs])
    res = auc(r, test, non, exhaustive=True)
    assert (res.alpha, res.beta, res.gamma) == (10, 7, 2)
    assert res.auc == 0.8


def test_auc_perfect_and_flat():
    test = PairSet.from_pairs([(0, 1), (0, 2), (1, 2)])
    non = PairSet.from_pairs([(3, 4), (3, 5), (4, 5), (0, 3)])
    pairs = test | non
    perfect = ranking(pairs, test.contains(pairs.u, pairs.v).astype(float))
    assert auc(perfect, test, non, exhaustive=True).auc == 1.0
    assert auc(perfect, test, non, 500, seed=1).auc == 1.0
    flat = ranking(pairs, np.ones(len(pairs)))
    assert auc(flat, test, non, exhaustive=True).auc == 0.5


def test_auc_missing_scores_are_zero():
    test = PairSet.from_pairs([(0, 1)])
    non = PairSet.from_pairs([(2, 3)])
    r = ranking(test, [0.5])
    assert auc(r, test, non, exhaustive=True).auc == 1.0


def test_auc_empty_sets_rejected():
    t = PairSet.from_pairs([(0, 1)])
    with pytest.raises(ValueError):
        auc(ranking(t, [1.0]), PairSet(), t)
    with pytest.raises(ValueError):
        auc(ranking(t, [1.0]), t, PairSet())


def test_exhaustive_auc_matches_rank_statistic(rng):
    for _ in range(100):
        n = int(rng.integers(5, 21))
        pairs = universal_pairs(n)
        keep = rng.choice(len(pairs), size=min(len(pairs), int(rng.integers(4, 200))), replace=False)
        sub = PairSet(np.sort(pairs.keys[keep]))
        is_test = rng.random(len(sub)) < 0.3
        is_test[0], is_test[-1] = True, False
        test = PairSet(sub.keys[is_test])
        non = PairSet(sub.keys[~is_test])
        # coarse integer scores force plenty of ties
        scores = rng.integers(0, 6, size=len(sub)).astype(float)
        r = ranking(sub, scores)
        got = auc(r, test, non, exhaustive=True).auc
        ref = mann_whitney_auc(r.scores_for(test.u, test.v), r.scores_for(non.u, non.v))
        assert abs(got - ref) <= 1e-12


def test_sampled_auc_random_scores():
    pairs = universal_pairs(200)
    rng = np.random.default_rng(0)
    is_test = rng.random(len(pairs)) < 0.1
    test, non = PairSet(pairs.keys[is_test]), PairSet(pairs.keys[~is_test])
    for seed in range(5):
        scores = np.random.default_rng(1000 + seed).random(len(pairs))
        res = auc(ranking(pairs, scores), test, non, 100_000, seed=seed)
        assert abs(res.auc - 0.5) <= 0.02


# -- precision ---------------------------------------------------------------------

def test_precision_examples():
    pairs = universal_pairs(6)
    scores = np.arange(len(pairs), 0, -1, dtype=float)
    r = ranking(pairs, scores)
    top10 = [(a, b) for a, b, _ in r.top(10)]
    test = PairSet.from_pairs(top10[:7] + [(a, b) for a, b, _ in r][12:14])
    assert precision_at(r, test, 10) == 0.7
    perfect = PairSet.from_pairs(top10[:4])
    assert precision_at(r, perfect) == 1.0
    far = PairSet.from_pairs([(a, b) for a, b, _ in r][-3:])
    assert precision_at(r, far) == 0.0
    with pytest.raises(ValueError):
        precision_at(r, test, len(pairs) + 1)
    with pytest.raises(ValueError):
        precision_at(r, test, 0)


# -- benchmark ----------------------------------------------------------------------

def test_benchmark_rows_and_determinism(rng):
    net = random_multiplex(rng, 60, 3, 0.1)
    spec = SplitSpec(0.1, trials=20, seed=7)
    res = run_benchmark(net, PredictionConfig(0), spec, ["nlflp", "cn"], comparisons=2000)
    assert set(res) == {"nlflp", "cn"}
    assert all(len(r.per_trial) == 20 for r in res.values())
    again = run_benchmark(net, PredictionConfig(0), spec, ["nlflp", "cn"], comparisons=2000)
    assert {k: v.aggregate for k, v in res.items()} == {k: v.aggregate for k, v in again.items()}
    for r in res.values():
        for t in r.per_trial:
            assert 0 <= t.auc <= 1 and 0 <= t.precision <= 1
            hits = t.precision * t.n_test
            assert abs(hits - round(hits)) < 1e-9


def test_benchmark_single_layer_baseline(rng):
    net = random_multiplex(rng, 40, 1, 0.15)
    res = run_benchmark(net, PredictionConfig(0), SplitSpec(trials=3, seed=1), ["cn"])
    assert list(res) == ["cn"]
    assert len(res["cn"].per_trial) == 3


def test_benchmark_rejects_unknown_method(rng):
    net = random_multiplex(rng, 20, 1, 0.3)
    with pytest.raises(ValueError):
        run_benchmark(net, PredictionConfig(0), SplitSpec(trials=1), ["katz"])


def test_aggregate_uses_sample_std(rng):
    net = random_multiplex(rng, 40, 2, 0.15)
    res = run_benchmark(net, PredictionConfig(0), SplitSpec(trials=4, seed=2), ["cn"])["cn"]
    aucs = [t.auc for t in res.per_trial]
    assert res.aggregate["auc_std"] == pytest.approx(np.std(aucs, ddof=1))
    assert res.aggregate["auc_mean"] == pytest.approx(np.mean(aucs))
