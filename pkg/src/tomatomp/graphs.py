"""Weighted undirected graphs over data-point indices.

Provides the graph constructions the clustering pipelines rely on:
delta-neighborhood graphs, pixel-grid graphs, barycentric subdivision,
and the topological-robustness test / edge augmentation used by the
outlier-robust pipeline.
"""

from __future__ import annotations

import warnings
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "Graph",
    "as_point_cloud",
    "neighborhood_graph",
    "grid_graph",
    "barycentric_subdivision",
    "is_topologically_robust",
    "augment_for_robustness",
]


def as_point_cloud(points) -> np.ndarray:
    """Coerce input to an (n, d) float array of finite coordinates."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] < 1:
        raise ValueError("a point cloud must be an (n, d) array with d >= 1")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point cloud contains non-finite coordinates")
    return pts


class Graph:
    """Immutable undirected graph with nonnegative edge lengths.

    Vertices are the integers ``0 .. n_vertices - 1``. Edges are unordered
    index pairs without self-loops or duplicates; each edge carries a
    nonnegative length (1.0 when no metric is given).
    """

    __slots__ = ("n_vertices", "_adj", "_edges", "_nbrs")

    def __init__(
        self,
        n_vertices: int,
        edges: Iterable[tuple[int, int]] = (),
        lengths: Sequence[float] | None = None,
    ):
        n = int(n_vertices)
        if n < 0:
            raise ValueError("n_vertices must be nonnegative")
        self.n_vertices = n
        adj: list[dict[int, float]] = [dict() for _ in range(n)]
        edge_list = [(int(u), int(v)) for u, v in edges]
        if lengths is None:
            lens = [1.0] * len(edge_list)
        else:
            lens = [float(w) for w in lengths]
            if len(lens) != len(edge_list):
                raise ValueError("lengths must parallel the edge list")
        canon = []
        for (u, v), w in zip(edge_list, lens):
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) endpoint out of range")
            if not (np.isfinite(w) and w >= 0.0):
                raise ValueError(f"edge ({u}, {v}) has invalid length {w}")
            a, b = (u, v) if u < v else (v, u)
            if b in adj[a]:
                raise ValueError(f"duplicate edge ({a}, {b})")
            adj[a][b] = w
            adj[b][a] = w
            canon.append((a, b))
        self._adj = adj
        self._edges = tuple(sorted(canon))
        self._nbrs: tuple[tuple[int, ...], ...] | None = None

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as sorted (u, v) pairs with u < v."""
        return self._edges

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        if self._nbrs is None:
            self._nbrs = tuple(
                tuple(sorted(nbrs)) for nbrs in self._adj
            )
        return self._nbrs[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edge_length(self, u: int, v: int) -> float:
        try:
            return self._adj[u][v]
        except KeyError:
            raise KeyError(f"no edge ({u}, {v})") from None

    def edge_lengths(self) -> tuple[float, ...]:
        """Lengths parallel to :attr:`edges`."""
        return tuple(self._adj[u][v] for u, v in self._edges)

    def with_edges(self, extra: Iterable[tuple[int, int, float]]) -> "Graph":
        """New graph with additional edges; existing edges are kept as-is."""
        edges = list(self._edges)
        lens = list(self.edge_lengths())
        seen = set(self._edges)
        for u, v, w in extra:
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in seen:
                continue
            seen.add((a, b))
            edges.append((a, b))
            lens.append(w)
        return Graph(self.n_vertices, edges, lens)

    def connected_components(self) -> list[list[int]]:
        """Vertex lists of connected components, each sorted, ordered by minimum vertex."""
        seen = np.zeros(self.n_vertices, dtype=bool)
        comps = []
        for s in range(self.n_vertices):
            if seen[s]:
                continue
            stack = [s]
            seen[s] = True
            comp = []
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def __repr__(self) -> str:
        return f"Graph(n_vertices={self.n_vertices}, n_edges={self.n_edges})"


def neighborhood_graph(cloud, delta: float, metric: str = "euclidean") -> Graph:
    """Build the delta-neighborhood graph of a point cloud.

    An edge (u, v) is present exactly when ``0 < dist(u, v) <= delta`` and
    carries the distance as its length. Coincident points are not joined.

    Parameters
    ----------
    cloud : array-like of shape (n, d)
        Point coordinates; must be finite.
    delta : float
        Neighborhood radius, > 0.
    metric : {"euclidean"}
        Only the Euclidean metric is built in; precomputed graphs can be
        passed to the downstream operations directly.
    """
    if metric != "euclidean":
        raise ValueError(f"unsupported metric {metric!r}")
    if not (np.isfinite(delta) and delta > 0):
        raise ValueError("delta must be positive")
    pts = as_point_cloud(cloud)
    tree = cKDTree(pts)
    pairs = tree.query_pairs(delta, output_type="ndarray")
    edges = []
    lens = []
    for u, v in pairs:
        d = float(np.linalg.norm(pts[u] - pts[v]))
        if d > 0.0:
            edges.append((int(u), int(v)))
            lens.append(d)
    return Graph(len(pts), edges, lens)


def grid_graph(rows: int, cols: int, connectivity: int = 4) -> Graph:
    """Pixel-grid graph in row-major order; axis edges have length 1, diagonals sqrt(2)."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    edges = []
    lens = []
    sqrt2 = float(np.sqrt(2.0))

    def vid(r, c):
        return r * cols + c

    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
                lens.append(1.0)
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
                lens.append(1.0)
            if connectivity == 8 and r + 1 < rows:
                if c + 1 < cols:
                    edges.append((vid(r, c), vid(r + 1, c + 1)))
                    lens.append(sqrt2)
                if c - 1 >= 0:
                    edges.append((vid(r, c), vid(r + 1, c - 1)))
                    lens.append(sqrt2)
    return Graph(rows * cols, edges, lens)


def barycentric_subdivision(g: Graph) -> tuple[Graph, dict[tuple[int, int], int]]:
    """Split every edge at a midpoint vertex.

    Returns the subdivided graph together with ``midpoint_of`` mapping each
    original edge (u, v), u < v, to its new midpoint index. Original vertex
    indices are preserved; each half-edge gets half the original length.
    """
    n = g.n_vertices
    midpoint_of = {}
    edges = []
    lens = []
    for k, (u, v) in enumerate(g.edges):
        m = n + k
        midpoint_of[(u, v)] = m
        half = g.edge_length(u, v) / 2.0
        edges.append((u, m))
        lens.append(half)
        edges.append((m, v))
        lens.append(half)
    return Graph(n + g.n_edges, edges, lens), midpoint_of


def is_topologically_robust(g: Graph, x: int) -> bool:
    """True when some neighbor of ``x`` is adjacent to all of x's other neighbors.

    Vertices with at most one neighbor are robust (the condition is vacuous).
    """
    if not (0 <= x < g.n_vertices):
        raise ValueError(f"vertex {x} out of range")
    nbrs = g.neighbors(x)
    if len(nbrs) <= 1:
        return True
    for u in nbrs:
        if all(g.has_edge(u, w) for w in nbrs if w != u):
            return True
    return False


def augment_for_robustness(g: Graph, targets: Iterable[int]) -> Graph:
    """Add edges so every target vertex becomes topologically robust.

    For each non-robust target, its lowest-index neighbor is used as a hub
    and joined to the target's other neighbors; added edges get the sum of
    the two incident edge lengths. No edge is ever removed. Because added
    edges can give earlier targets new neighbors, passes repeat until all
    targets are robust. Isolated targets are vacuously robust and reported
    as unmodifiable.
    """
    target_list = sorted(set(int(t) for t in targets))
    for t in target_list:
        if not (0 <= t < g.n_vertices):
            raise ValueError(f"target {t} out of range")
    isolated = [t for t in target_list if g.degree(t) == 0]
    if isolated:
        warnings.warn(
            f"isolated targets cannot be augmented: {isolated}", stacklevel=2
        )
    out = g
    while True:
        extra = []
        for x in target_list:
            if is_topologically_robust(out, x):
                continue
            nbrs = out.neighbors(x)
            hub = nbrs[0]
            for w in nbrs[1:]:
                if not out.has_edge(hub, w):
                    extra.append(
                        (hub, w, out.edge_length(x, hub) + out.edge_length(x, w))
                    )
        if not extra:
            return out
        out = out.with_edges(extra)
