"""Majority-vote clustering over several scalar fields, and the two
robustness pipelines built on top of it.

Every line of a diagonal family yields a single-field clustering; its
clusters are relabeled by the decomposition's summand indexing, and every
vertex takes the summand it is assigned to most often across lines (ties
to the lowest summand id). The graph-tuning-free pipeline runs this on a
barycentric subdivision with a neighborhood-radius scale field; the
outlier-robust pipeline pairs a corrupted field with its negated outlier
score on a robustness-augmented graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import (
    check_field,
    outlier_score,
    restrict_field,
    subdivision_scale_field,
)
from .graphs import (
    Graph,
    as_point_cloud,
    augment_for_robustness,
    barycentric_subdivision,
    neighborhood_graph,
)
from .mma import MmaDecomposition, build_decomposition, parallel_map
from .slicing import LineFamily, make_line_family, sliced_field
from .tomato import Clustering, cluster

__all__ = [
    "MultiParameterResult",
    "GraphFreeResult",
    "OutlierRobustResult",
    "vote_table",
    "majority_vote",
    "tomatomp",
    "pipeline_graph_free",
    "pipeline_outlier_robust",
]


def vote_table(assignments: np.ndarray, n_summands: int) -> np.ndarray:
    """Count, per vertex, how many lines assign it to each summand.

    ``assignments`` is an (n_lines, n_vertices) array of 1-based summand
    ids; the result is (n_vertices, n_summands) with rows summing to the
    number of lines.
    """
    a = np.asarray(assignments, dtype=int)
    if a.ndim != 2:
        raise ValueError("assignments must be (n_lines, n_vertices)")
    votes = np.zeros((a.shape[1], n_summands), dtype=int)
    for row in a:
        votes[np.arange(a.shape[1]), row - 1] += 1
    return votes


def majority_vote(assignments: np.ndarray, n_summands: int) -> np.ndarray:
    """Per-vertex argmax of the vote table; ties go to the lowest summand id."""
    votes = vote_table(assignments, n_summands)
    return np.argmax(votes, axis=1) + 1


@dataclass
class MultiParameterResult:
    """Output of a multi-field clustering run."""

    clustering: Clustering
    decomposition: MmaDecomposition
    line_clusterings: list[Clustering]
    assignments: np.ndarray  # (n_lines, n_vertices), 1-based summand ids
    votes: np.ndarray  # (n_vertices, n_summands)
    family: LineFamily
    cluster_summands: tuple[int, ...] = ()  # summand id per output cluster


def _compact_from_votes(
    winners: np.ndarray, dec: MmaDecomposition
) -> tuple[Clustering, tuple[int, ...]]:
    """Drop summands with no winning vertex and relabel 1..M by summand id."""
    present = sorted(set(int(w) for w in winners))
    relabel = {sid: i + 1 for i, sid in enumerate(present)}
    labels = np.array([relabel[int(w)] for w in winners])
    roots = []
    points = []
    for sid in present:
        _, point = dec.most_prominent_bar(sid)
        roots.append(-1 if point.root is None else point.root)
        points.append(point)
    return Clustering(labels, roots, points), tuple(present)


def tomatomp(
    fields,
    graph: Graph,
    tau: float,
    family: LineFamily,
    q: float = 2.0,
) -> MultiParameterResult:
    """Cluster a graph by majority vote over the lines of a diagonal family.

    Parameters
    ----------
    fields : sequence of p scalar fields (one value per vertex each)
    graph : Graph
    tau : float
        Prominence threshold applied to every per-line clustering.
    family : LineFamily
        Ordered diagonal lines in R^p.
    q : float
        Order of the diagram distance used to match consecutive diagrams.

    Returns
    -------
    MultiParameterResult with the voted clustering (labels compacted over
    summands that win at least one vertex; each output cluster carries its
    summand's most prominent bar as diagram point), the decomposition, and
    the per-line clusterings.
    """
    flds = [check_field(f, graph.n_vertices) for f in fields]
    if len(flds) != family.dim:
        raise ValueError("number of fields must match the family dimension")
    dec, diagrams = build_decomposition(flds, graph, family, q)
    line_clusterings = parallel_map(
        lambda line: cluster(graph, sliced_field(flds, line), tau), list(family)
    )
    n = graph.n_vertices
    assignments = np.zeros((len(family), n), dtype=int)
    for ell, clu in enumerate(line_clusterings):
        point_index_by_root = {p.root: i for i, p in enumerate(diagrams[ell])}
        to_summand = np.array(
            [
                dec.summand_of_point(ell, point_index_by_root[r])
                for r in clu.roots
            ]
        )
        assignments[ell] = to_summand[clu.labels - 1]
    votes = vote_table(assignments, dec.n_summands)
    winners = np.argmax(votes, axis=1) + 1
    clustering, present = _compact_from_votes(winners, dec)
    return MultiParameterResult(
        clustering, dec, line_clusterings, assignments, votes, family, present
    )


@dataclass
class GraphFreeResult:
    """Graph-tuning-free pipeline output; labels cover the original vertices."""

    clustering: Clustering
    graph: Graph
    subdivided: Graph
    midpoint_of: dict
    scale_field: np.ndarray
    restricted_field: np.ndarray
    multi: MultiParameterResult


def pipeline_graph_free(
    cloud,
    values,
    delta_max: float,
    tau: float,
    n_lines: int,
    q: float = 2.0,
) -> GraphFreeResult:
    """Cluster a point cloud without tuning the neighborhood radius.

    Builds the delta_max-neighborhood graph, subdivides it barycentrically,
    and runs the multi-field clustering with the radius-sweep scale field
    paired with the restriction of ``values``; the diagonal family then
    couples "radius grows" with "field threshold decreases", so no single
    radius has to be chosen. A disconnected graph is handled per component.
    Output labels are restricted to the original vertices (clusters left
    with only midpoints are dropped).
    """
    pts = as_point_cloud(cloud)
    f = check_field(values, len(pts))
    g = neighborhood_graph(pts, delta_max)
    subdivided, midpoint_of = barycentric_subdivision(g)
    scale = subdivision_scale_field(subdivided, midpoint_of, len(pts), delta_max)
    restricted = restrict_field(f, subdivided, midpoint_of)
    family = make_line_family([scale, restricted], n_lines)
    multi = tomatomp([scale, restricted], subdivided, tau, family, q)
    sub_labels = multi.clustering.labels[: len(pts)]
    present = sorted(set(int(v) for v in np.unique(sub_labels)))
    relabel = {old: i + 1 for i, old in enumerate(present)}
    labels = np.array([relabel[int(v)] for v in sub_labels])
    roots = [multi.clustering.roots[old - 1] for old in present]
    points = [multi.clustering.points[old - 1] for old in present]
    clustering = Clustering(labels, roots, points)
    return GraphFreeResult(
        clustering, g, subdivided, midpoint_of, scale, restricted, multi
    )


@dataclass
class OutlierRobustResult:
    """Outlier-robust pipeline output."""

    clustering: Clustering
    score: np.ndarray
    targets: np.ndarray
    augmented: Graph
    multi: MultiParameterResult


def pipeline_outlier_robust(
    graph: Graph,
    values,
    tau: float,
    n_lines: int,
    q: float = 2.0,
    outlier_quantile: float = 0.1,
) -> OutlierRobustResult:
    """Cluster a field plagued by outlier values.

    Vertices whose outlier score (mean absolute difference to neighbors)
    exceeds the ``1 - outlier_quantile`` score quantile are made
    topologically robust by edge augmentation, and the multi-field
    clustering runs on (negated score, corrupted field): high-score points
    then enter the superlevel scan last on most lines, so their corrupted
    values cannot seed spurious modes.
    """
    if not (0.0 < outlier_quantile < 1.0):
        raise ValueError("outlier_quantile must lie in (0, 1)")
    f = check_field(values, graph.n_vertices)
    score = outlier_score(graph, f)
    threshold = float(np.quantile(score, 1.0 - outlier_quantile))
    targets = np.flatnonzero(score > threshold)
    augmented = augment_for_robustness(graph, targets.tolist())
    flds = [-score, f]
    family = make_line_family(flds, n_lines)
    multi = tomatomp(flds, augmented, tau, family, q)
    return OutlierRobustResult(multi.clustering, score, targets, augmented, multi)
