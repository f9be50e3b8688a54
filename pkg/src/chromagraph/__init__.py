"""chromagraph: random graphs with exact chromatic/clique labels, and
neural regressors that predict those labels from raw adjacency matrices."""

__version__ = "0.1.0"

from .architectures import (
    ARCHITECTURES,
    build_dense,
    build_model_spec,
    build_seq_cnn,
    build_wide_cnn,
    scaled,
)
from .data import (
    Dataset,
    DistributionStats,
    LabeledGraph,
    compute_stats,
    read_dataset,
    split_dataset,
    write_csv,
    write_dataset,
)
from .estimators import EdgeCountRegressor, NeuralGraphRegressor, as_adjacency_batch
from .exact import (
    CliqueResult,
    ColoringResult,
    SolverBudgetError,
    brute_force_chromatic,
    brute_force_clique,
    chromatic_number,
    label_graph,
    max_clique,
)
from .generate import GenConfig, generate_batch, generate_embedded, random_subgraph_of_complete, stream_for
from .graphs import Graph, apply_permutation, complete_graph, edge_count, from_edges, pad_to_order
from .metrics import EvalReport, GroupStats, ape, evaluate, grouped_boxplot_stats, mae, mape, p_l
from .pipeline import build_labeled_dataset, relabel_dataset
from .regression import RegressionModel, fit_edge_regression, fit_regression

__all__ = [
    "ARCHITECTURES",
    "CliqueResult",
    "ColoringResult",
    "Dataset",
    "DistributionStats",
    "EdgeCountRegressor",
    "EvalReport",
    "GenConfig",
    "Graph",
    "GroupStats",
    "LabeledGraph",
    "NeuralGraphRegressor",
    "RegressionModel",
    "SolverBudgetError",
    "__version__",
    "ape",
    "apply_permutation",
    "as_adjacency_batch",
    "brute_force_chromatic",
    "brute_force_clique",
    "build_dense",
    "build_labeled_dataset",
    "build_model_spec",
    "build_seq_cnn",
    "build_wide_cnn",
    "chromatic_number",
    "complete_graph",
    "compute_stats",
    "edge_count",
    "evaluate",
    "fit_edge_regression",
    "fit_regression",
    "from_edges",
    "generate_batch",
    "generate_embedded",
    "grouped_boxplot_stats",
    "label_graph",
    "mae",
    "mape",
    "max_clique",
    "p_l",
    "pad_to_order",
    "random_subgraph_of_complete",
    "read_dataset",
    "relabel_dataset",
    "scaled",
    "split_dataset",
    "stream_for",
    "write_csv",
    "write_dataset",
]
