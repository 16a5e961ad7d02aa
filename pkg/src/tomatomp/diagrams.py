"""Persistence diagrams and diagram-level computations.

Diagrams follow the superlevel convention: a mode is born at the value of
its local maximum and dies at the merge saddle, so ``birth >= death`` and
the prominence of a point is ``birth - death``. Diagram distances are the
optimal-partial-correspondence costs with the l-infinity ground metric;
unmatched points pay the distance to the diagonal (half their prominence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

__all__ = [
    "DiagramPoint",
    "PersistenceDiagram",
    "PartialCorrespondence",
    "prominence",
    "diagram_distance",
    "is_separated",
    "separation_gap",
]


@dataclass(frozen=True)
class DiagramPoint:
    """A (birth, death) pair, optionally tagged with the mode's root vertex."""

    birth: float
    death: float
    root: int | None = None

    def __post_init__(self):
        if not (np.isfinite(self.birth) and np.isfinite(self.death)):
            raise ValueError("diagram points must be finite")
        if self.birth < self.death:
            raise ValueError(
                f"superlevel convention requires birth >= death; got {self}"
            )

    @property
    def prominence(self) -> float:
        return self.birth - self.death


def prominence(point) -> float:
    """Prominence (birth - death) of a diagram point or (birth, death) pair."""
    if isinstance(point, DiagramPoint):
        return point.prominence
    b, d = float(point[0]), float(point[1])
    if b < d:
        raise ValueError("birth must be >= death")
    return b - d


class PersistenceDiagram:
    """Finite multiset of diagram points."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable[DiagramPoint | tuple]):
        pts = []
        for p in points:
            if not isinstance(p, DiagramPoint):
                p = DiagramPoint(
                    float(p[0]), float(p[1]), None if len(p) < 3 else p[2]
                )
            pts.append(p)
        self.points = tuple(pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i: int) -> DiagramPoint:
        return self.points[i]

    def as_array(self) -> np.ndarray:
        """(n, 2) array of (birth, death) rows."""
        if not self.points:
            return np.empty((0, 2))
        return np.array([(p.birth, p.death) for p in self.points])

    def prominences(self) -> np.ndarray:
        return np.array([p.prominence for p in self.points])

    def __repr__(self) -> str:
        return f"PersistenceDiagram({len(self.points)} points)"


@dataclass(frozen=True)
class PartialCorrespondence:
    """Injective partial matching between two diagrams, by point index.

    Unmatched points are implicitly matched to the diagonal.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        left = [i for i, _ in self.pairs]
        right = [j for _, j in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("both projections of a correspondence must be injective")

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def _cost_matrix(d1: PersistenceDiagram, d2: PersistenceDiagram) -> np.ndarray:
    """(m+n) x (n+m) augmented l-infinity cost matrix with diagonal slots."""
    m, n = len(d1), len(d2)
    a = d1.as_array()
    b = d2.as_array()
    cost = np.full((m + n, n + m), np.inf)
    if m and n:
        cost[:m, :n] = np.max(
            np.abs(a[:, None, :] - b[None, :, :]), axis=2
        )
    for i in range(m):
        cost[i, n + i] = a[i, 0] - a[i, 1]  # times 1/2 applied below
    for j in range(n):
        cost[m + j, j] = b[j, 0] - b[j, 1]
    cost[:m, n:] /= 2.0
    cost[m:, :n] /= 2.0
    cost[m:, n:] = 0.0
    return cost


def _bottleneck(cost: np.ndarray, m: int, n: int) -> tuple[float, list[tuple[int, int]]]:
    """Exact bottleneck via threshold search over candidate costs."""
    finite = np.unique(cost[np.isfinite(cost)])
    lo, hi = 0, len(finite) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        t = finite[mid]
        allowed = csr_matrix(cost <= t)
        match = maximum_bipartite_matching(allowed, perm_type="column")
        if np.all(match >= 0):
            best = (float(t), match.copy())
            hi = mid - 1
        else:
            lo = mid + 1
    assert best is not None  # diagonal-only matching is always feasible
    t, match = best
    pairs = [(i, int(match[i])) for i in range(m) if int(match[i]) < n]
    return t, pairs


def diagram_distance(
    d1: PersistenceDiagram, d2: PersistenceDiagram, q: float = math.inf
) -> tuple[float, PartialCorrespondence]:
    """q-th diagram distance and an optimal partial correspondence.

    Solved exactly by assignment on the cost matrix augmented with
    diagonal-projection slots; ``q = inf`` is the bottleneck distance,
    solved by threshold search.

    Returns
    -------
    (distance, correspondence) : the correspondence pairs indices of d1
        points with indices of d2 points; unmatched points go to the
        diagonal.
    """
    if q < 1:
        raise ValueError("q must be >= 1 (or inf)")
    m, n = len(d1), len(d2)
    if m == 0 and n == 0:
        return 0.0, PartialCorrespondence(())
    cost = _cost_matrix(d1, d2)
    if math.isinf(q):
        value, pairs = _bottleneck(cost, m, n)
        return value, PartialCorrespondence(tuple(pairs))
    powered = np.where(np.isfinite(cost), cost**q, np.inf)
    rows, cols = linear_sum_assignment(powered)
    total = float(np.sum(powered[rows, cols]))
    pairs = tuple(
        (int(i), int(j)) for i, j in zip(rows, cols) if i < m and j < n
    )
    return total ** (1.0 / q), PartialCorrespondence(pairs)


def is_separated(d: PersistenceDiagram, d1: float, d2: float) -> bool:
    """True when no point has prominence strictly inside the band (d1, d2).

    Prominence exactly equal to d1 or d2 still counts as separated.
    """
    if not (0 <= d1 < d2):
        raise ValueError("need 0 <= d1 < d2")
    proms = d.prominences()
    return not np.any((proms > d1) & (proms < d2))


def separation_gap(diagrams: Sequence[PersistenceDiagram], d2: float) -> float:
    """Half the minimum l-infinity distance between distinct prominent points.

    Only pairs within a single diagram count; points qualify when their
    prominence is at least ``d2``. Returns +inf when no diagram holds two
    prominent points.
    """
    best = math.inf
    for dgm in diagrams:
        pts = [p for p in dgm if p.prominence >= d2]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                dist = max(
                    abs(pts[i].birth - pts[j].birth),
                    abs(pts[i].death - pts[j].death),
                )
                best = min(best, dist)
    return best / 2.0
