"""Single-field topological clustering, step by step.

A scalar field on a graph is scanned from its highest value down; local
maxima open modes, saddles merge them, and the resulting (birth, death)
pairs form a persistence diagram whose prominences rank the modes. A
prominence threshold then turns the mode hierarchy into a clustering.
"""

import numpy as np

from tomatomp import (
    Graph,
    cluster,
    compute_persistence,
    dtm_density,
    neighborhood_graph,
)

# --- a tiny path graph you can trace by hand --------------------------------
g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
f = np.array([1.0, 3.0, 2.0, 4.0, 1.0])

diagram = compute_persistence(g, f)
print("field:", f.tolist())
print("diagram points (birth, death, root vertex):")
for p in diagram:
    print(f"  ({p.birth}, {p.death}) root={p.root} prominence={p.prominence}")

for tau in (0.5, 1.5):
    c = cluster(g, f, tau)
    print(f"tau={tau}: {c.n_clusters} cluster(s), labels={c.labels.tolist()}")

# --- a denser example: density-driven clustering of two blobs ---------------
rng = np.random.default_rng(0)
points = np.vstack(
    [rng.normal(0.0, 0.3, size=(80, 2)), rng.normal(0.0, 0.3, size=(80, 2)) + [3.0, 0.0]]
)
density = dtm_density(points, k=6)
graph = neighborhood_graph(points, delta=0.9)

diagram = compute_persistence(graph, density)
prominent = sorted(diagram.prominences(), reverse=True)
print("\ntwo-blob density diagram, top prominences:", [round(v, 3) for v in prominent[:4]])

tau = (prominent[1] + prominent[2]) / 2 if len(prominent) > 2 else prominent[1] / 2
labels = cluster(graph, density, tau).labels
print(f"tau={tau:.3f} recovers {len(set(labels.tolist()))} clusters "
      f"(sizes {np.bincount(labels)[1:].tolist()})")
