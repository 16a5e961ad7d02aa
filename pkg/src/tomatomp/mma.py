"""Chaining diagrams across a line family into decomposition summands.

Consecutive per-line diagrams are matched by the optimal partial
correspondence of the q-th diagram distance; maximal runs of matched
points form summands, the multi-parameter analogue of diagram points.
Each line keeps a partial injective map from summand ids to its own
diagram points, and every diagram point of every line belongs to exactly
one summand.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diagrams import DiagramPoint, PersistenceDiagram, diagram_distance
from .graphs import Graph
from .slicing import DiagonalLine, LineFamily, bar, sliced_field
from .tomato import compute_persistence

__all__ = [
    "MatchingFunction",
    "Summand",
    "MmaDecomposition",
    "match_consecutive",
    "check_compatibility",
    "build_decomposition",
    "induced_diagram",
    "interval_realization",
    "parallel_map",
]


def max_workers() -> int:
    """Worker cap from the TOMATOMP_THREADS environment variable (default 1)."""
    try:
        return max(1, int(os.environ.get("TOMATOMP_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items: Sequence) -> list:
    """Map preserving order; threads only when TOMATOMP_THREADS > 1."""
    items = list(items)
    workers = max_workers()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class MatchingFunction:
    """Injective partial map between the points of two consecutive diagrams."""

    pairs: tuple[tuple[int, int], ...]
    source: PersistenceDiagram
    target: PersistenceDiagram
    line_source: DiagonalLine | None = None
    line_target: DiagonalLine | None = None

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def match_consecutive(
    d1: PersistenceDiagram,
    d2: PersistenceDiagram,
    q: float = 2.0,
    line_source: DiagonalLine | None = None,
    line_target: DiagonalLine | None = None,
) -> MatchingFunction:
    """Optimal partial correspondence of the q-th diagram distance as a map.

    Diagonal-matched points are excluded, leaving an injective map from a
    subset of d1's point indices to d2's.
    """
    _, corr = diagram_distance(d1, d2, q)
    return MatchingFunction(corr.pairs, d1, d2, line_source, line_target)


def _strictly_below(a: np.ndarray, b: np.ndarray) -> bool:
    # strict domination in every coordinate; endpoints sliding along a
    # binding field coordinate (one coordinate equal) stay compatible
    return bool(np.all(a < b))


def check_compatibility(m: MatchingFunction):
    """Verify no matched bar pair has strictly comparable endpoints.

    A pair violates compatibility when one birth endpoint strictly
    dominates the other in every coordinate (likewise for deaths). Needs
    both lines attached so bars can be computed. Returns
    ``(ok, violations)`` where violations list (source index, target index,
    which endpoint) triples.
    """
    if m.line_source is None or m.line_target is None:
        raise ValueError("compatibility needs both lines attached to the matching")
    violations = []
    for i, j in m.pairs:
        b1, e1 = bar(m.line_source, m.source[i])
        b2, e2 = bar(m.line_target, m.target[j])
        if _strictly_below(b1, b2) or _strictly_below(b2, b1):
            violations.append((i, j, "birth"))
        if _strictly_below(e1, e2) or _strictly_below(e2, e1):
            violations.append((i, j, "death"))
    return (not violations), violations


@dataclass(frozen=True, eq=False)
class Summand:
    """Maximal sequence of bars on consecutive lines matched together."""

    first_line: int
    point_indices: tuple[int, ...]
    bars: tuple[tuple[np.ndarray, np.ndarray], ...]

    @property
    def last_line(self) -> int:
        return self.first_line + len(self.point_indices) - 1

    def lines(self) -> range:
        return range(self.first_line, self.last_line + 1)


class MmaDecomposition:
    """Summands plus the per-line point bookkeeping.

    ``pi[k]`` maps summand id (1-based) to the index of its diagram point
    on line k; it is partial (absent when the summand does not cover the
    line) and injective. ``summand_of_point`` inverts it and is total.
    """

    def __init__(
        self,
        summands: Sequence[Summand],
        diagrams: Sequence[PersistenceDiagram],
        family: LineFamily,
        matchings: Sequence[MatchingFunction],
        incompatible_pairs: Sequence = (),
    ):
        self.summands = tuple(summands)
        self.diagrams = tuple(diagrams)
        self.family = family
        self.matchings = tuple(matchings)
        self.incompatible_pairs = tuple(incompatible_pairs)
        n_lines = len(family)
        pi: list[dict[int, int]] = [dict() for _ in range(n_lines)]
        inverse: list[dict[int, int]] = [dict() for _ in range(n_lines)]
        for sid, s in enumerate(self.summands, start=1):
            for k, idx in enumerate(s.point_indices):
                ell = s.first_line + k
                pi[ell][sid] = idx
                inverse[ell][idx] = sid
        self.pi = tuple(pi)
        self._summand_of = tuple(inverse)

    @property
    def n_summands(self) -> int:
        return len(self.summands)

    def summand_of_point(self, line_index: int, point_index: int) -> int:
        """Summand id owning a given diagram point (total by construction)."""
        return self._summand_of[line_index][point_index]

    def summand_point(self, summand_id: int, line_index: int) -> DiagramPoint | None:
        idx = self.pi[line_index].get(summand_id)
        return None if idx is None else self.diagrams[line_index][idx]

    def most_prominent_bar(self, summand_id: int) -> tuple[int, DiagramPoint]:
        """(line index, diagram point) of the summand's most prominent bar."""
        s = self.summands[summand_id - 1]
        best = None
        for k, idx in enumerate(s.point_indices):
            ell = s.first_line + k
            p = self.diagrams[ell][idx]
            if best is None or p.prominence > best[1].prominence:
                best = (ell, p)
        return best

    def __repr__(self) -> str:
        return (
            f"MmaDecomposition({self.n_summands} summands over "
            f"{len(self.family)} lines)"
        )


def build_decomposition(
    fields: Sequence,
    graph: Graph,
    family: LineFamily,
    q: float = 2.0,
) -> tuple[MmaDecomposition, list[PersistenceDiagram]]:
    """Per-line persistence, consecutive matching, and summand assembly.

    Summands are ordered by (first line, descending max prominence,
    descending birth, point index) so ids are deterministic. Incompatible
    matched pairs are collected and warned about, not fatal.
    """
    diagrams = parallel_map(
        lambda line: compute_persistence(graph, sliced_field(fields, line)),
        list(family),
    )
    matchings = []
    incompatible = []
    for k in range(len(family) - 1):
        m = match_consecutive(
            diagrams[k], diagrams[k + 1], q, family[k], family[k + 1]
        )
        ok, violations = check_compatibility(m)
        if not ok:
            incompatible.extend((k, i, j, which) for i, j, which in violations)
        matchings.append(m)
    if incompatible:
        warnings.warn(
            f"{len(incompatible)} matched pairs have strictly comparable "
            "endpoints; the matchings are kept as computed",
            stacklevel=2,
        )

    maps = [m.as_dict() for m in matchings]
    matched_targets = [set(d.values()) for d in maps]
    raw = []
    for ell in range(len(family)):
        for idx in range(len(diagrams[ell])):
            if ell > 0 and idx in matched_targets[ell - 1]:
                continue
            chain = [idx]
            k, cur = ell, idx
            while k < len(family) - 1 and cur in maps[k]:
                cur = maps[k][cur]
                chain.append(cur)
                k += 1
            raw.append((ell, tuple(chain)))

    def sort_key(item):
        first, chain = item
        prom = max(
            diagrams[first + k][idx].prominence for k, idx in enumerate(chain)
        )
        head = diagrams[first][chain[0]]
        return (first, -prom, -head.birth, head.death, chain[0])

    raw.sort(key=sort_key)
    summands = []
    for first, chain in raw:
        bars = tuple(
            bar(family[first + k], diagrams[first + k][idx])
            for k, idx in enumerate(chain)
        )
        summands.append(Summand(first, chain, bars))
    dec = MmaDecomposition(summands, diagrams, family, matchings, incompatible)
    return dec, list(diagrams)


def interval_realization(summand: Summand) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Staircase realization as axis-aligned hyperrectangles (lower, upper).

    One rectangle per consecutive bar pair, spanned by the pair's death
    endpoints (lower corner) and birth endpoints (upper corner); a single
    bar yields its own degenerate rectangle. The union is connected and
    contains every bar of the summand.
    """
    bars = summand.bars
    if not bars:
        raise ValueError("summand has no bars")
    if len(bars) == 1:
        b, d = bars[0]
        return ((d.copy(), b.copy()),)
    rects = []
    for (b1, d1), (b2, d2) in zip(bars, bars[1:]):
        rects.append((np.minimum(d1, d2), np.maximum(b1, b2)))
    return tuple(rects)


def induced_diagram(dec: MmaDecomposition, line: DiagonalLine) -> PersistenceDiagram:
    """Diagram read off a line from the decomposition.

    On a family line this is exactly the stored per-line diagram indexed by
    summand; off the family each summand contributes the intersection of
    its realized interval with the line (when nonempty).
    """
    k = dec.family.index_of(line)
    if k is not None:
        points = []
        for sid in range(1, dec.n_summands + 1):
            p = dec.summand_point(sid, k)
            if p is not None:
                points.append(p)
        return PersistenceDiagram(points)
    points = []
    for s in dec.summands:
        lo_t, hi_t = math.inf, -math.inf
        for lower, upper in interval_realization(s):
            t_lo = float(np.max(lower - line.base))
            t_hi = float(np.min(upper - line.base))
            if t_lo <= t_hi:
                lo_t = min(lo_t, t_lo)
                hi_t = max(hi_t, t_hi)
        if lo_t <= hi_t:
            points.append(DiagramPoint(hi_t, lo_t))
    return PersistenceDiagram(points)
