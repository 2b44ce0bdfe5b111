"""Hierarchical partitioning of clusterings by repeated pair features."""

from ._hpref import (
    ClusteringSet,
    Dendrogram,
    IoError,
    Node,
    ParseError,
    SplitEvent,
    adjusted_rand,
    cut,
    dbscan,
    induced_metric,
    iris_species,
    leaf_partition,
    pca2,
    preset_clusterings,
    read_clusterings,
    run_hpref,
    write_clusterings,
)

__all__ = [
    "ClusteringSet",
    "Dendrogram",
    "IoError",
    "Node",
    "ParseError",
    "SplitEvent",
    "adjusted_rand",
    "cut",
    "dbscan",
    "induced_metric",
    "iris_species",
    "leaf_partition",
    "pca2",
    "preset_clusterings",
    "read_clusterings",
    "run_hpref",
    "write_clusterings",
]
