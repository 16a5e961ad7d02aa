"""Independent reference implementations used to check the library.

These deliberately avoid the library's algorithms: the diagram oracle
recomputes superlevel components from scratch at every threshold, and the
distance oracle enumerates all partial correspondences.
"""

from __future__ import annotations

import math
from itertools import combinations, permutations

import numpy as np


def sweep_diagram(graph, f):
    """Threshold-sweep component tracking.

    For each value t of the field in decreasing order, the superlevel
    subgraph's connected components are recomputed by BFS and matched to
    the previous level's by intersection: component creations are births,
    merges kill all but the elder (root with highest field value, ties by
    lowest index). Returns a set of (birth, death, root) triples; surviving
    components die at their component minimum.
    """
    f = np.asarray(f, dtype=float)
    n = graph.n_vertices
    order = sorted(range(n), key=lambda v: (-f[v], v))
    pos = {v: i for i, v in enumerate(order)}
    thresholds = sorted(set(f.tolist()), reverse=True)

    def components(active):
        seen = set()
        comps = []
        for s in sorted(active):
            if s in seen:
                continue
            stack, comp = [s], set()
            seen.add(s)
            while stack:
                x = stack.pop()
                comp.add(x)
                for y in graph.neighbors(x):
                    if y in active and y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(comp)
        return comps

    alive = []  # list of (root, member set)
    points = set()
    for t in thresholds:
        active = {v for v in range(n) if f[v] >= t}
        for comp in components(active):
            overlapping = [entry for entry in alive if entry[1] & comp]
            if not overlapping:
                root = min(comp, key=lambda v: pos[v])
                alive.append((root, comp))
            elif len(overlapping) == 1:
                overlapping[0][1].clear()
                overlapping[0][1].update(comp)
            else:
                overlapping.sort(key=lambda entry: pos[entry[0]])
                survivor = overlapping[0]
                for root, members in overlapping[1:]:
                    points.add((float(f[root]), float(t), root))
                    alive.remove((root, members))
                survivor[1].clear()
                survivor[1].update(comp)
    for root, members in alive:
        low = min(float(f[v]) for v in members)
        points.add((float(f[root]), low, root))
    return points


def brute_force_distance(d1, d2, q=math.inf):
    """Optimal partial-correspondence cost by full enumeration (small diagrams)."""
    a = d1.as_array()
    b = d2.as_array()
    m, n = len(a), len(b)

    def pair_cost(i, j):
        return max(abs(a[i, 0] - b[j, 0]), abs(a[i, 1] - b[j, 1]))

    def diag_cost(row):
        return (row[0] - row[1]) / 2.0

    best = math.inf
    for k in range(min(m, n) + 1):
        for rows in combinations(range(m), k):
            for cols in permutations(range(n), k):
                costs = [pair_cost(i, j) for i, j in zip(rows, cols)]
                costs += [diag_cost(a[i]) for i in range(m) if i not in rows]
                costs += [diag_cost(b[j]) for j in range(n) if j not in cols]
                if math.isinf(q):
                    value = max(costs) if costs else 0.0
                else:
                    value = sum(c**q for c in costs) ** (1.0 / q)
                best = min(best, value)
    return best


def rectangles_connected(rects) -> bool:
    """True when the union of closed axis-aligned rectangles is connected."""
    k = len(rects)
    if k <= 1:
        return True
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(k):
        for j in range(i + 1, k):
            lo_i, hi_i = rects[i]
            lo_j, hi_j = rects[j]
            if np.all(np.maximum(lo_i, lo_j) <= np.minimum(hi_i, hi_j)):
                parent[find(i)] = find(j)
    return len({find(i) for i in range(k)}) == 1
