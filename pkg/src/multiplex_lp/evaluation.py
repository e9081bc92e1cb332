"""Hold-out evaluation: edge splits, AUC, precision and repeated trials."""
from __future__ import annotations

import statistics
from dataclasses import asdict, dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .graph import MultiplexNetwork, PairSet, universal_pairs
from .predictor import PredictionConfig, RankedPrediction, allocate_scores
from .similarity import Method, ScoreTable, score_all_pairs

__all__ = [
    "ALL_METHODS",
    "SplitSpec",
    "AucResult",
    "TrialResult",
    "EvaluationResult",
    "split_edges",
    "auc",
    "precision_at",
    "run_benchmark",
]

NLFLP = "nlflp"
ALL_METHODS = (NLFLP, "cn", "jc", "aa", "lhn", "hdi")
DEFAULT_COMPARISONS = 10_000

# sub-stream tags mixed into (seed, trial) for independent random streams
_SPLIT_STREAM = 0
_AUC_STREAM = 1


@dataclass(frozen=True)
class SplitSpec:
    """How to hold out target-layer edges.

    Give either ``holdout_fraction`` (default 0.1) or ``holdout_count``; the
    count, when set, selects count mode.
    """

    holdout_fraction: float = 0.1
    holdout_count: int | None = None
    trials: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.holdout_count is None and not 0 < self.holdout_fraction < 1:
            raise ValueError(f"holdout fraction must lie in (0, 1), got {self.holdout_fraction}")
        if self.holdout_count is not None and self.holdout_count < 1:
            raise ValueError(f"holdout count must be positive, got {self.holdout_count}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    @property
    def mode(self) -> str:
        return "count" if self.holdout_count is not None else "fraction"

    def test_size(self, edge_count: int) -> int:
        if self.holdout_count is not None:
            size = self.holdout_count
        else:
            size = max(1, int(round(self.holdout_fraction * edge_count)))
        if size >= edge_count:
            raise ValueError(
                f"cannot hold out {size} edges from a layer with {edge_count} edges"
            )
        return size

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "holdout_fraction": self.holdout_fraction if self.mode == "fraction" else None,
            "holdout_count": self.holdout_count,
            "trials": self.trials,
            "seed": self.seed,
        }


def _rng(seed: int, trial: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial, stream])


def split_edges(
    net: MultiplexNetwork, target: int, spec: SplitSpec, trial_index: int
) -> tuple[PairSet, PairSet]:
    """Return ``(training, test)`` for one trial.

    The test set is a uniform sample without replacement from the target
    layer's edges, fully determined by ``(spec.seed, trial_index)``.
    """
    if not 0 <= trial_index < spec.trials:
        raise ValueError(f"trial index {trial_index} out of range 0..{spec.trials - 1}")
    edges = net.layer(target).edges()
    size = spec.test_size(len(edges))
    test = edges.sample(_rng(spec.seed, trial_index, _SPLIT_STREAM), size)
    return edges - test, test


class AucResult(NamedTuple):
    auc: float
    alpha: int
    beta: int
    gamma: int


def auc(
    scores: RankedPrediction | ScoreTable,
    test: PairSet,
    non_edges: PairSet,
    comparisons: int = DEFAULT_COMPARISONS,
    seed=None,
    *,
    exhaustive: bool = False,
) -> AucResult:
    """AUC as ``(beta + 0.5 * gamma) / alpha``.

    ``alpha`` comparisons each draw one test pair and one non-edge uniformly
    (with replacement); ``beta`` counts strict wins of the test pair and
    ``gamma`` ties. With ``exhaustive=True`` every test/non-edge combination
    is compared once. Pairs missing from ``scores`` score 0.
    """
    if len(test) == 0 or len(non_edges) == 0:
        raise ValueError("AUC needs non-empty test and non-edge sets")
    if exhaustive:
        pos = scores.scores_for(test.u, test.v)
        neg = np.sort(scores.scores_for(non_edges.u, non_edges.v))
        lo = np.searchsorted(neg, pos, side="left")
        hi = np.searchsorted(neg, pos, side="right")
        alpha = len(pos) * len(neg)
        beta = int(lo.sum())
        gamma = int((hi - lo).sum())
    else:
        if comparisons < 1:
            raise ValueError("comparisons must be >= 1")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        i = rng.integers(0, len(test), size=comparisons)
        j = rng.integers(0, len(non_edges), size=comparisons)
        pos = scores.scores_for(test.u[i], test.v[i])
        neg = scores.scores_for(non_edges.u[j], non_edges.v[j])
        alpha = comparisons
        beta = int(np.count_nonzero(pos > neg))
        gamma = int(np.count_nonzero(pos == neg))
    return AucResult((beta + 0.5 * gamma) / alpha, alpha, beta, gamma)


def precision_at(ranking: RankedPrediction, test: PairSet, top_n: int | None = None) -> float:
    """Fraction of the ``top_n`` best-ranked pairs that are test edges.

    ``top_n`` defaults to ``len(test)``.
    """
    if top_n is None:
        top_n = len(test)
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    if top_n > len(ranking):
        raise ValueError(f"top_n={top_n} exceeds the {len(ranking)} ranked candidates")
    hits = np.count_nonzero(test.contains(ranking.u[:top_n], ranking.v[:top_n]))
    return hits / top_n


@dataclass(frozen=True)
class TrialResult:
    trial: int
    seed: int
    auc: float
    precision: float
    alpha: int
    beta: int
    gamma: int
    n_train: int
    n_test: int


def _mean_std(xs: Sequence[float]) -> tuple[float, float]:
    if not xs:
        return float("nan"), float("nan")
    mean = statistics.fmean(xs)
    std = statistics.stdev(xs) if len(xs) > 1 else 0.0
    return mean, std


@dataclass(frozen=True)
class EvaluationResult:
    """Per-trial metrics for one method plus the split and config that produced them."""

    method: str
    per_trial: tuple[TrialResult, ...]
    split: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def aggregate(self) -> dict[str, float]:
        auc_m, auc_s = _mean_std([t.auc for t in self.per_trial])
        pre_m, pre_s = _mean_std([t.precision for t in self.per_trial])
        return {"auc_mean": auc_m, "auc_std": auc_s, "precision_mean": pre_m, "precision_std": pre_s}

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "split": dict(self.split),
            "config": dict(self.config),
            "per_trial": [asdict(t) for t in self.per_trial],
            "aggregate": self.aggregate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationResult":
        return cls(
            method=d["method"],
            per_trial=tuple(TrialResult(**t) for t in d["per_trial"]),
            split=dict(d.get("split", {})),
            config=dict(d.get("config", {})),
        )


def _normalize_methods(methods: Iterable[str] | None) -> list[str]:
    if methods is None:
        return list(ALL_METHODS)
    out = []
    for m in methods:
        name = m.value if isinstance(m, Method) else str(m).lower()
        if name not in ALL_METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {', '.join(ALL_METHODS)}")
        if name not in out:
            out.append(name)
    if not out:
        raise ValueError("no methods selected")
    return out


def run_benchmark(
    net: MultiplexNetwork,
    config: PredictionConfig,
    spec: SplitSpec,
    methods: Iterable[str] | None = None,
    *,
    comparisons: int = DEFAULT_COMPARISONS,
) -> dict[str, EvaluationResult]:
    """Repeat split / score / measure for each trial and method.

    Baselines score the target layer's training graph alone; ``nlflp`` also
    uses every other layer. All methods in a trial share the same split and
    the same AUC comparison draws.
    """
    names = _normalize_methods(methods)
    config.validate(net)
    target = config.target_layer
    all_pairs = universal_pairs(net)
    non_edges = all_pairs - net.layer(target).edges()
    if len(non_edges) == 0:
        raise ValueError("target layer is complete; there are no non-edges to compare against")
    spec.test_size(net.layer(target).edge_count)
    rows: dict[str, list[TrialResult]] = {m: [] for m in names}
    for trial in range(spec.trials):
        training, test = split_edges(net, target, spec, trial)
        candidates = all_pairs - training
        train_graph = net.layer(target).restrict(training)
        for name in names:
            if name == NLFLP:
                ranking = allocate_scores(net, config, training, candidates)
            else:
                table = score_all_pairs(train_graph, name, candidates)
                ranking = RankedPrediction.from_scores(candidates, table.values)
            a = auc(ranking, test, non_edges, comparisons, _rng(spec.seed, trial, _AUC_STREAM))
            p = precision_at(ranking, test)
            rows[name].append(
                TrialResult(trial, spec.seed, a.auc, p, a.alpha, a.beta, a.gamma, len(training), len(test))
            )
    return {
        name: EvaluationResult(name, tuple(rows[name]), spec.to_dict(), config.to_dict())
        for name in names
    }
