"""Transfer-language ranking with pragmatic features."""

from ._pragrank import (
    FormatError,
    ValidationError,
    corpus_stats,
    evaluate,
    extract_mwes,
    featurize,
    knn_edges,
    lcr,
    ltq_normalize,
    map_at_k,
    ndcg_at_p,
    pearson,
    pmi3_scores,
    procrustes,
    rank,
    relevance_grades,
    train,
    within_area_fraction,
)

__all__ = [
    "FormatError",
    "ValidationError",
    "corpus_stats",
    "evaluate",
    "extract_mwes",
    "featurize",
    "knn_edges",
    "lcr",
    "ltq_normalize",
    "map_at_k",
    "ndcg_at_p",
    "pearson",
    "pmi3_scores",
    "procrustes",
    "rank",
    "relevance_grades",
    "train",
    "within_area_fraction",
]

__version__ = "0.1.0"
