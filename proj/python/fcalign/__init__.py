"""Clustering of Gaussian fold changes with time warping."""

from ._core import (
    FcalignError,
    FoldChangeSet,
    ari,
    build_owd_ow,
    cluster,
    cluster_classic,
    d2_squared,
    diss,
    optimal_warp,
    pairwise_matrix,
    preprocess,
    read_fold_changes,
    read_replicates,
    silhouette,
    simulate,
    v_measure,
    write_fold_changes,
)

__all__ = [
    "FcalignError",
    "FoldChangeSet",
    "ari",
    "build_owd_ow",
    "cluster",
    "cluster_classic",
    "d2_squared",
    "diss",
    "optimal_warp",
    "pairwise_matrix",
    "preprocess",
    "read_fold_changes",
    "read_replicates",
    "silhouette",
    "simulate",
    "v_measure",
    "write_fold_changes",
]
