"""Link classification in signed networks.

The most used entry points are re-exported here; the submodules hold the
rest.
"""

from ._accel import backend
from .cover import CircuitCover, cccc, cover_stats, predict_with_cover, scccc, tree_partition, edge_partition, verify_cover
from .errors import SignlinkError
from .generators import (
    LabeledInstance,
    gen_active_lowerbound_labeling,
    gen_clique_delta,
    gen_p_random,
    gen_two_cluster_labeling,
    random_connected_graph,
)
from .graph import (
    Partition,
    RootedSpanningForest,
    SignedGraph,
    TwoClustering,
    bfs_spanning_forest,
    build_graph,
    connected_components,
    path_sign_product,
    tree_path,
    wilson_random_spanning_tree,
)
from .io import load_edge_list, save_edge_list
from .online import build_version_space_table, halving_predict, weighted_majority_run
from .oracles import delta2_exact, delta_exact, erm_partition, is_two_balanced, is_weakly_balanced, partition_cost
from .spectral import boolean_min_quadratic, least_eigen_classifier, min_eigenpair, signed_laplacian
from .treepredict import average_stretch, flip_bound_rhs, spanning_tree, tree_learner_run

__version__ = "0.1.0"

__all__ = [
    "average_stretch",
    "backend",
    "bfs_spanning_forest",
    "boolean_min_quadratic",
    "build_graph",
    "build_version_space_table",
    "cccc",
    "CircuitCover",
    "connected_components",
    "cover_stats",
    "delta2_exact",
    "delta_exact",
    "edge_partition",
    "erm_partition",
    "flip_bound_rhs",
    "gen_active_lowerbound_labeling",
    "gen_clique_delta",
    "gen_p_random",
    "gen_two_cluster_labeling",
    "halving_predict",
    "is_two_balanced",
    "is_weakly_balanced",
    "LabeledInstance",
    "least_eigen_classifier",
    "load_edge_list",
    "min_eigenpair",
    "Partition",
    "partition_cost",
    "path_sign_product",
    "predict_with_cover",
    "random_connected_graph",
    "RootedSpanningForest",
    "save_edge_list",
    "scccc",
    "signed_laplacian",
    "SignedGraph",
    "SignlinkError",
    "spanning_tree",
    "tree_learner_run",
    "tree_partition",
    "tree_path",
    "TwoClustering",
    "verify_cover",
    "weighted_majority_run",
    "wilson_random_spanning_tree",
]
