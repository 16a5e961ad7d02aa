"""Per-vertex scalar fields and the estimators derived from them.

A scalar field is a plain float array with one finite value per vertex of
an associated graph or point cloud. High values enter the superlevel scan
first, so density-like fields are oriented with dense regions high.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .graphs import Graph, as_point_cloud

__all__ = [
    "check_field",
    "dtm_density",
    "outlier_score",
    "subdivision_scale_field",
    "restrict_field",
]


def check_field(values, n_vertices: int) -> np.ndarray:
    """Validate a scalar field: finite, one value per vertex."""
    f = np.asarray(values, dtype=float).ravel()
    if f.shape[0] != n_vertices:
        raise ValueError(
            f"field has {f.shape[0]} values for {n_vertices} vertices"
        )
    if not np.all(np.isfinite(f)):
        raise ValueError("field contains non-finite values")
    return f


def dtm_density(cloud, k: int) -> np.ndarray:
    """Distance-to-measure density surrogate, negated so dense regions are high.

    ``values[x] = -sqrt(mean of squared distances to the k nearest
    neighbors of x)``, the point itself excluded.

    Parameters
    ----------
    cloud : array-like of shape (n, d)
    k : int
        Number of neighbors, ``1 <= k <= n - 1``.
    """
    pts = as_point_cloud(cloud)
    n = len(pts)
    if not (1 <= k < n):
        raise ValueError(f"k must satisfy 1 <= k < n; got k={k}, n={n}")
    tree = cKDTree(pts)
    # k+1 nearest include the query point itself (distance 0)
    dists, _ = tree.query(pts, k=k + 1)
    return -np.sqrt(np.mean(dists[:, 1:] ** 2, axis=1))


def outlier_score(g: Graph, values) -> np.ndarray:
    """Mean absolute difference to neighbor values; isolated vertices score 0."""
    f = check_field(values, g.n_vertices)
    score = np.zeros(g.n_vertices)
    for x in range(g.n_vertices):
        nbrs = g.neighbors(x)
        if nbrs:
            score[x] = float(np.mean([abs(f[x] - f[y]) for y in nbrs]))
    return score


def subdivision_scale_field(
    subdivided: Graph,
    midpoint_of: dict[tuple[int, int], int],
    original_n: int,
    delta_max: float,
) -> np.ndarray:
    """Scale field on a subdivided graph encoding the neighborhood radius sweep.

    Original vertices get ``delta_max``; the midpoint of an edge of length L
    gets ``delta_max - L``, so short edges enter a superlevel scan first and
    scanning downward corresponds to growing the neighborhood radius.
    """
    if not (np.isfinite(delta_max) and delta_max > 0):
        raise ValueError("delta_max must be positive")
    values = np.full(subdivided.n_vertices, float(delta_max))
    for (u, v), m in midpoint_of.items():
        length = subdivided.edge_length(u, m) + subdivided.edge_length(m, v)
        if length > delta_max:
            raise ValueError(
                f"edge ({u}, {v}) has length {length} > delta_max {delta_max}"
            )
        values[m] = delta_max - length
    return values


def restrict_field(
    values, subdivided: Graph, midpoint_of: dict[tuple[int, int], int]
) -> np.ndarray:
    """Extend a field on original vertices to a subdivided graph.

    Midpoints take the min of their endpoints, so in a superlevel scan an
    edge appears only once both endpoints have appeared.
    """
    f = np.asarray(values, dtype=float).ravel()
    out = np.empty(subdivided.n_vertices)
    out[: f.shape[0]] = f
    for (u, v), m in midpoint_of.items():
        out[m] = min(f[u], f[v])
    if f.shape[0] + len(midpoint_of) != subdivided.n_vertices:
        raise ValueError("field/midpoint sizes do not cover the subdivided graph")
    return out
