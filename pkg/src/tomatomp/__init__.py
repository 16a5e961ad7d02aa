"""Multi-parameter topological clustering.

Mode-seeking persistence clustering on graphs, extended to several scalar
fields at once: per-line diagrams along a family of diagonal lines are
matched into decomposition summands, per-line clusterings are indexed by
those summands, and each vertex takes its most frequent summand across
lines. Includes diagram distances, separation tests, the graph-tuning-free
and outlier-robust pipelines, and evaluation / ranking utilities.
"""

from .analytics import (
    Ranking,
    ami,
    ari,
    coss_multiparameter,
    coss_pair,
    coss_single,
    mean_pairwise_jaccard,
    pearson,
    rank_tuples,
    tophits,
)
from .diagrams import (
    DiagramPoint,
    PartialCorrespondence,
    PersistenceDiagram,
    diagram_distance,
    is_separated,
    prominence,
    separation_gap,
)
from .fields import (
    check_field,
    dtm_density,
    outlier_score,
    restrict_field,
    subdivision_scale_field,
)
from .graphs import (
    Graph,
    as_point_cloud,
    augment_for_robustness,
    barycentric_subdivision,
    grid_graph,
    is_topologically_robust,
    neighborhood_graph,
)
from .mma import (
    MatchingFunction,
    MmaDecomposition,
    Summand,
    build_decomposition,
    check_compatibility,
    induced_diagram,
    interval_realization,
    match_consecutive,
)
from .multiparameter import (
    GraphFreeResult,
    MultiParameterResult,
    OutlierRobustResult,
    majority_vote,
    pipeline_graph_free,
    pipeline_outlier_robust,
    tomatomp,
    vote_table,
)
from .slicing import (
    DiagonalLine,
    LineFamily,
    bar,
    make_line_family,
    rescale_unit,
    sliced_field,
)
from .tomato import (
    Clustering,
    RelatednessResult,
    check_related,
    cluster,
    compute_persistence,
    core,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # graphs
    "Graph",
    "as_point_cloud",
    "neighborhood_graph",
    "grid_graph",
    "barycentric_subdivision",
    "is_topologically_robust",
    "augment_for_robustness",
    # fields
    "check_field",
    "dtm_density",
    "outlier_score",
    "subdivision_scale_field",
    "restrict_field",
    # single-field clustering
    "Clustering",
    "compute_persistence",
    "cluster",
    "core",
    "check_related",
    "RelatednessResult",
    # diagrams
    "DiagramPoint",
    "PersistenceDiagram",
    "PartialCorrespondence",
    "prominence",
    "diagram_distance",
    "is_separated",
    "separation_gap",
    # slicing
    "DiagonalLine",
    "LineFamily",
    "sliced_field",
    "make_line_family",
    "bar",
    "rescale_unit",
    # decomposition
    "MatchingFunction",
    "Summand",
    "MmaDecomposition",
    "match_consecutive",
    "check_compatibility",
    "build_decomposition",
    "induced_diagram",
    "interval_realization",
    # multi-parameter clustering
    "MultiParameterResult",
    "GraphFreeResult",
    "OutlierRobustResult",
    "vote_table",
    "majority_vote",
    "tomatomp",
    "pipeline_graph_free",
    "pipeline_outlier_robust",
    # analytics
    "Ranking",
    "ari",
    "ami",
    "pearson",
    "tophits",
    "coss_single",
    "coss_pair",
    "mean_pairwise_jaccard",
    "coss_multiparameter",
    "rank_tuples",
]
