"""Mode-seeking persistence clustering on a graph (single scalar field).

Vertices are scanned in decreasing field order. A vertex with no
already-scanned neighbor starts a new mode; otherwise it attaches to the
entry of its highest already-scanned neighbor, and entries meeting at the
vertex merge under the elder rule (the mode born higher survives; ties go
to the earlier-scanned root). Running with unconditional merging yields
the persistence diagram; gating merges by a prominence threshold ``tau``
yields the clustering. Ties in the field are broken by ascending vertex
index throughout, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .diagrams import DiagramPoint, PersistenceDiagram
from .fields import check_field
from .graphs import Graph

__all__ = [
    "Clustering",
    "compute_persistence",
    "cluster",
    "core",
    "check_related",
    "RelatednessResult",
]


class Clustering:
    """A partition of the vertex set into labeled clusters.

    ``labels[v]`` is the cluster id of vertex v, ids run 1..n_clusters.
    Each cluster carries its root vertex (the mode's local maximum) and a
    diagram point (birth, death).
    """

    __slots__ = ("labels", "roots", "points")

    def __init__(
        self,
        labels,
        roots: Sequence[int],
        points: Sequence[DiagramPoint],
    ):
        lbl = np.asarray(labels, dtype=int)
        n_clusters = len(roots)
        if len(points) != n_clusters:
            raise ValueError("roots and points must have one entry per cluster")
        present = np.unique(lbl)
        if lbl.size and (
            present[0] < 1 or present[-1] > n_clusters or len(present) != n_clusters
        ):
            raise ValueError("labels must cover exactly the ids 1..n_clusters")
        self.labels = lbl
        self.roots = tuple(int(r) for r in roots)
        self.points = tuple(points)

    @property
    def n_clusters(self) -> int:
        return len(self.roots)

    def members(self, cluster_id: int) -> np.ndarray:
        """Sorted vertex indices of one cluster."""
        return np.flatnonzero(self.labels == cluster_id)

    def cluster_sets(self) -> list[set[int]]:
        """Member sets indexed by cluster id - 1."""
        return [set(map(int, self.members(i + 1))) for i in range(self.n_clusters)]

    def __repr__(self) -> str:
        return f"Clustering({self.labels.size} vertices, {self.n_clusters} clusters)"


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root


def _scan(g: Graph, f: np.ndarray, tau: float | None):
    """Shared union-find sweep.

    ``tau=None`` merges unconditionally and records every merge event;
    otherwise merges are gated by ``min(root births) < f[x] + tau``.
    Returns (union-find, entry root per representative, merge events) where
    each event is (birth, death, dying root vertex).
    """
    n = g.n_vertices
    order = np.lexsort((np.arange(n), -f))
    pos = np.empty(n, dtype=int)
    pos[order] = np.arange(n)
    uf = _UnionFind(n)
    root = [-1] * n  # per representative: the entry's mode vertex
    events: list[tuple[float, float, int]] = []
    for x in order.tolist():
        prev = [y for y in g.neighbors(x) if pos[y] < pos[x]]
        if not prev:
            root[x] = x
            continue
        gx = min(prev, key=lambda y: pos[y])
        ei = uf.find(gx)
        uf.parent[x] = ei
        for y in prev:
            e = uf.find(y)
            if e == ei:
                continue
            if pos[root[e]] < pos[root[ei]]:
                elder, younger = e, ei
            else:
                elder, younger = ei, e
            dying = root[younger]
            if tau is not None and not (f[dying] < f[x] + tau):
                continue
            if tau is None:
                events.append((float(f[dying]), float(f[x]), dying))
            uf.parent[younger] = elder
            ei = elder
    return uf, root, pos, events


def compute_persistence(g: Graph, values) -> PersistenceDiagram:
    """Persistence diagram of the superlevel mode hierarchy.

    One point per mode, tagged with the mode's local maximum (root). The
    surviving mode of each connected component gets a finite death equal to
    the field minimum over that component. Points are ordered by descending
    birth, then ascending death and root index.
    """
    f = check_field(values, g.n_vertices)
    uf, root, _, events = _scan(g, f, tau=None)
    comp_min: dict[int, float] = {}
    for v in range(g.n_vertices):
        r = uf.find(v)
        comp_min[r] = min(comp_min.get(r, np.inf), float(f[v]))
    points = [DiagramPoint(b, d, r) for b, d, r in events]
    for rep, low in comp_min.items():
        points.append(DiagramPoint(float(f[root[rep]]), low, root[rep]))
    points.sort(key=lambda p: (-p.birth, p.death, p.root))
    return PersistenceDiagram(points)


def cluster(g: Graph, values, tau: float) -> Clustering:
    """Prominence-thresholded clustering: modes with prominence >= tau survive.

    Every vertex is labeled with a surviving mode by following the merge
    hierarchy; cluster ids are assigned by descending root field value
    (ties by vertex index). Each cluster's diagram point comes from the
    full persistence run.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    f = check_field(values, g.n_vertices)
    diagram = compute_persistence(g, values)
    point_by_root = {p.root: p for p in diagram}
    uf, root, pos, _ = _scan(g, f, tau=tau)
    reps = sorted({uf.find(v) for v in range(g.n_vertices)}, key=lambda r: pos[root[r]])
    cluster_id = {rep: i + 1 for i, rep in enumerate(reps)}
    labels = np.array([cluster_id[uf.find(v)] for v in range(g.n_vertices)])
    roots = [root[rep] for rep in reps]
    return Clustering(labels, roots, [point_by_root[r] for r in roots])


def core(clustering: Clustering, values, cluster_id: int, margin: float) -> np.ndarray:
    """High-field part of a cluster: members with f >= death + margin."""
    if not (1 <= cluster_id <= clustering.n_clusters):
        raise ValueError(f"invalid cluster id {cluster_id}")
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    f = check_field(values, clustering.labels.size)
    threshold = clustering.points[cluster_id - 1].death + margin
    members = clustering.members(cluster_id)
    return members[f[members] >= threshold]


@dataclass
class RelatednessResult:
    """Outcome of a core-containment relatedness check."""

    related: bool
    bijection: dict[int, int] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.related


def _forced_target(core_vertices, labels) -> int | None:
    """Cluster id that contains all core vertices, or None (empty core / split)."""
    if core_vertices.size == 0:
        return None
    targets = np.unique(labels[core_vertices])
    if len(targets) == 1:
        return int(targets[0])
    return -1  # core split across clusters: no valid target


def check_related(
    c1: Clustering,
    f1,
    c2: Clustering,
    epsilon: float,
    f2=None,
) -> RelatednessResult:
    """Test whether two clusterings are mutually 3-epsilon-related.

    Searches for a bijection b of cluster ids such that each cluster's core
    at margin ``3 * epsilon`` (computed with the clustering's own field;
    ``f2`` defaults to ``f1``) is contained in the paired cluster, in both
    directions. Nonempty cores force their target, so forced pairs are
    fixed first, remaining ids are filled by maximum-overlap assignment,
    and the result is verified exactly.
    """
    if c1.labels.size != c2.labels.size:
        return RelatednessResult(False, None, "different vertex sets")
    if c1.n_clusters != c2.n_clusters:
        return RelatednessResult(
            False,
            None,
            f"cluster counts differ: {c1.n_clusters} vs {c2.n_clusters}",
        )
    n_clusters = c1.n_clusters
    if n_clusters == 0:
        return RelatednessResult(True, {}, "")
    g2 = f1 if f2 is None else f2
    margin = 3.0 * epsilon

    cores1 = [core(c1, f1, i, margin) for i in range(1, n_clusters + 1)]
    cores2 = [core(c2, g2, j, margin) for j in range(1, n_clusters + 1)]

    forced: dict[int, int] = {}
    for i in range(1, n_clusters + 1):
        t = _forced_target(cores1[i - 1], c2.labels)
        if t == -1:
            return RelatednessResult(False, None, f"core of cluster {i} splits in c2")
        if t is not None:
            forced[i] = t
    # reverse cores force the inverse map
    for j in range(1, n_clusters + 1):
        s = _forced_target(cores2[j - 1], c1.labels)
        if s == -1:
            return RelatednessResult(False, None, f"core of cluster {j} splits in c1")
        if s is not None:
            if s in forced and forced[s] != j:
                return RelatednessResult(
                    False, None, f"conflicting forced pairs for cluster {s}"
                )
            forced[s] = j
    if len(set(forced.values())) != len(forced):
        return RelatednessResult(False, None, "forced pairing is not injective")

    free_left = [i for i in range(1, n_clusters + 1) if i not in forced]
    used = set(forced.values())
    free_right = [j for j in range(1, n_clusters + 1) if j not in used]
    bijection = dict(forced)
    if free_left:
        overlap = np.zeros((len(free_left), len(free_right)))
        sets2 = [set(map(int, c2.members(j))) for j in free_right]
        for a, i in enumerate(free_left):
            mem = set(map(int, c1.members(i)))
            for b, s2 in enumerate(sets2):
                overlap[a, b] = len(mem & s2)
        rows, cols = linear_sum_assignment(-overlap)
        for a, b in zip(rows, cols):
            bijection[free_left[a]] = free_right[b]

    # exact verification of both containment directions
    inverse = {j: i for i, j in bijection.items()}
    for i in range(1, n_clusters + 1):
        cv = cores1[i - 1]
        if cv.size and not np.all(c2.labels[cv] == bijection[i]):
            return RelatednessResult(False, None, f"core of cluster {i} not contained")
    for j in range(1, n_clusters + 1):
        cv = cores2[j - 1]
        if cv.size and not np.all(c1.labels[cv] == inverse[j]):
            return RelatednessResult(
                False, None, f"reverse core of cluster {j} not contained"
            )
    return RelatednessResult(True, bijection, "")
