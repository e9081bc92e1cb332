"""Link prediction in weighted multiplex networks."""
from .graph import GraphError, LayerGraph, MultiplexNetwork, PairSet, build_network, intersection_layer, universal_pairs
from .similarity import (
    Method,
    ScoreTable,
    adamic_adar_score,
    cn_score,
    hdi_score,
    jaccard_score,
    lhn_score,
    score_all_pairs,
)
from .interlayer import (
    LayerSimilarityReport,
    aasn_global,
    aasn_local,
    betweenness_centrality,
    layer_likelihood,
    layer_similarity_centrality,
    layer_similarity_report,
)
from .predictor import PredictionConfig, RankedPrediction, allocate_scores, pair_weight, rho, top_neighbors
from .evaluation import EvaluationResult, SplitSpec, auc, precision_at, run_benchmark, split_edges
from .dataio import load_multiplex_edgelist, read_evaluation, read_ranking, write_multiplex_edgelist, write_results
from .synthetic import SyntheticSpec, generate_synthetic

__version__ = "0.1.0"
