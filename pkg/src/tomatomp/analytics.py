"""Evaluation metrics and field-ranking criteria.

Clustering quality uses the standard adjusted Rand / adjusted mutual
information scores; rankings are compared by Pearson correlation of
aligned scores and by top-k hit overlap. Fields (and tuples of fields)
are ranked by how much persistent cluster structure they induce: the sum
of squared prominences for a single field, mean pairwise Jaccard overlap
for pairs of clusterings, and a per-line quantile of the induced-diagram
scores for multi-field tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np
from sklearn.metrics import adjusted_mutual_info_score, adjusted_rand_score

from .diagrams import PersistenceDiagram
from .graphs import Graph
from .mma import MmaDecomposition, build_decomposition, induced_diagram
from .slicing import LineFamily, make_line_family, rescale_unit
from .tomato import Clustering, cluster, compute_persistence

__all__ = [
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


def _labels(x) -> np.ndarray:
    if isinstance(x, Clustering):
        return x.labels
    return np.asarray(x).ravel()


def ari(a, b) -> float:
    """Adjusted Rand index of two labelings of the same vertex set."""
    la, lb = _labels(a), _labels(b)
    if la.size != lb.size:
        raise ValueError("labelings must cover the same vertex set")
    return float(adjusted_rand_score(la, lb))


def ami(a, b) -> float:
    """Adjusted mutual information (arithmetic mean normalization)."""
    la, lb = _labels(a), _labels(b)
    if la.size != lb.size:
        raise ValueError("labelings must cover the same vertex set")
    return float(adjusted_mutual_info_score(la, lb, average_method="arithmetic"))


@dataclass(frozen=True)
class Ranking:
    """Items ordered by descending score, ties broken by ascending item id."""

    entries: tuple[tuple[object, float], ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.entries, key=lambda e: (-e[1], e[0])))
        object.__setattr__(self, "entries", ordered)
        items = [e[0] for e in ordered]
        if len(set(items)) != len(items):
            raise ValueError("ranking items must be unique")

    @property
    def items(self) -> list:
        return [e[0] for e in self.entries]

    def scores(self) -> dict:
        return {item: score for item, score in self.entries}

    def top(self, k: int) -> list:
        return self.items[:k]

    def __len__(self) -> int:
        return len(self.entries)


def pearson(r1, r2) -> float:
    """Pearson correlation of two score vectors.

    Accepts plain sequences (compared position by position) or
    :class:`Ranking` objects (aligned by item id). Zero variance on either
    side is an error.
    """
    if isinstance(r1, Ranking) and isinstance(r2, Ranking):
        s1, s2 = r1.scores(), r2.scores()
        if set(s1) != set(s2):
            raise ValueError("rankings must cover the same items")
        keys = sorted(s1, key=lambda item: str(item))
        x = np.array([s1[k] for k in keys])
        y = np.array([s2[k] for k in keys])
    else:
        x = np.asarray(r1, dtype=float).ravel()
        y = np.asarray(r2, dtype=float).ravel()
        if x.size != y.size:
            raise ValueError("score vectors must have equal length")
    if x.size < 2:
        raise ValueError("need at least two items")
    if np.std(x) == 0 or np.std(y) == 0:
        raise ValueError("zero variance makes the correlation undefined")
    return float(np.corrcoef(x, y)[0, 1])


def tophits(r1: Ranking, r2: Ranking, k: int) -> float:
    """Fraction of r1's top-k items that are also in r2's top-k."""
    if set(r1.items) != set(r2.items):
        raise ValueError("rankings must cover the same item universe")
    if k > len(r1):
        raise ValueError(f"k={k} exceeds the {len(r1)}-item universe")
    return len(set(r1.top(k)) & set(r2.top(k))) / k


def coss_single(d: PersistenceDiagram, squared_total: bool = False) -> float:
    """Spatial-structure coefficient of a diagram.

    Default is the sum of squared prominences; ``squared_total=True``
    instead squares the summed prominences.
    """
    proms = d.prominences()
    if squared_total:
        return float(np.sum(proms) ** 2)
    return float(np.sum(proms**2))


def mean_pairwise_jaccard(sets1: Iterable[set], sets2: Iterable[set]) -> float:
    """Mean Jaccard similarity over all cluster pairs; 0 when either side is empty."""
    a = [set(s) for s in sets1]
    b = [set(s) for s in sets2]
    if not a or not b:
        return 0.0
    total = 0.0
    for s in a:
        for t in b:
            union = len(s | t)
            total += len(s & t) / union if union else 0.0
    return total / (len(a) * len(b))


def coss_pair(c1: Clustering, c2: Clustering) -> float:
    """Co-localization score: mean Jaccard overlap over all cluster pairs."""
    if c1.labels.size != c2.labels.size:
        raise ValueError("clusterings must cover the same vertex set")
    return mean_pairwise_jaccard(c1.cluster_sets(), c2.cluster_sets())


def coss_multiparameter(
    dec: MmaDecomposition, family: LineFamily, quantile: float = 0.10
) -> float:
    """Lower-interpolation quantile of the per-line induced-diagram scores."""
    if not (0.0 < quantile < 1.0):
        raise ValueError("quantile level must lie in (0, 1)")
    values = [coss_single(induced_diagram(dec, line)) for line in family]
    return float(np.quantile(np.asarray(values), quantile, method="lower"))


def rank_tuples(
    fields: Mapping[str, Sequence[float]],
    graph: Graph,
    tuple_size: int,
    tau: float,
    n_lines: int,
    n_top: int,
    pair_mode: str = "quantile",
    quantile_level: float = 0.10,
    q: float = 2.0,
    rescale: bool = False,
) -> Ranking:
    """Rank tuples of named fields by induced cluster structure.

    The ``n_top`` fields with largest variance are selected (ties broken by
    name); all size-``tuple_size`` tuples among them are scored. Singletons
    score by the diagram's sum of squared prominences; larger tuples by the
    per-line quantile score of a multi-field decomposition. Pairs may
    instead be scored by mean Jaccard overlap of the two single-field
    clusterings (``pair_mode="jaccard"``).

    Parameters
    ----------
    fields : mapping name -> field values
    tuple_size : 1, 2 or 3
    tau : prominence threshold (used by the Jaccard pair mode)
    n_lines : number of diagonal lines for multi-field scoring
    n_top : how many top-variance fields enter the enumeration
    rescale : rescale each field to [0, 1] before slicing
    """
    if tuple_size not in (1, 2, 3):
        raise ValueError("tuple_size must be 1, 2 or 3")
    if tuple_size > len(fields):
        raise ValueError("tuple_size exceeds the number of fields")
    if pair_mode not in ("quantile", "jaccard"):
        raise ValueError("pair_mode must be 'quantile' or 'jaccard'")
    arrays = {
        name: np.asarray(v, dtype=float).ravel() for name, v in fields.items()
    }
    by_variance = sorted(arrays, key=lambda name: (-np.var(arrays[name]), name))
    selected = by_variance[: min(n_top, len(by_variance))]
    if tuple_size > len(selected):
        raise ValueError("tuple_size exceeds the selected field count")

    entries = []
    for names in combinations(selected, tuple_size):
        tuple_fields = [arrays[name] for name in names]
        if rescale:
            tuple_fields = rescale_unit(tuple_fields)
        if tuple_size == 1:
            score = coss_single(compute_persistence(graph, tuple_fields[0]))
        elif tuple_size == 2 and pair_mode == "jaccard":
            score = coss_pair(
                cluster(graph, tuple_fields[0], tau),
                cluster(graph, tuple_fields[1], tau),
            )
        else:
            family = make_line_family(tuple_fields, n_lines)
            dec, _ = build_decomposition(tuple_fields, graph, family, q)
            score = coss_multiparameter(dec, family, quantile_level)
        item = names[0] if tuple_size == 1 else names
        entries.append((item, score))
    return Ranking(tuple(entries))
