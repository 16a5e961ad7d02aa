import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tomatomp import Graph


def random_connected_graph(rng, n_vertices: int, extra_edge_prob: float = 0.15) -> Graph:
    """Random spanning tree plus extra random edges."""
    edges = set()
    order = rng.permutation(n_vertices)
    for i in range(1, n_vertices):
        u = int(order[i])
        v = int(order[rng.integers(0, i)])
        edges.add((min(u, v), max(u, v)))
    for u in range(n_vertices):
        for v in range(u + 1, n_vertices):
            if (u, v) not in edges and rng.random() < extra_edge_prob:
                edges.add((u, v))
    return Graph(n_vertices, sorted(edges))


def random_graph(rng, n_vertices: int, edge_prob: float = 0.2) -> Graph:
    """Erdos-Renyi style graph; may be disconnected."""
    edges = [
        (u, v)
        for u in range(n_vertices)
        for v in range(u + 1, n_vertices)
        if rng.random() < edge_prob
    ]
    return Graph(n_vertices, edges)


def injective_field(rng, n: int) -> np.ndarray:
    values = rng.uniform(0.0, 10.0, size=n)
    while len(np.unique(values)) < n:
        values = rng.uniform(0.0, 10.0, size=n)
    return values


def spiral_blob(center, n, spacing, gap_ratio, rng, theta0=2.0):
    """Chain of n points along an archimedean spiral.

    Consecutive gaps sit below every other pairwise distance, so the chain
    stays connected even at the 1% quantile of the distance distribution.
    """
    a = gap_ratio * spacing / (2 * np.pi)
    thetas = [theta0]
    while len(thetas) < n:
        th = thetas[-1]
        thetas.append(th + spacing / (a * np.sqrt(1 + th * th)))
    th = np.array(thetas)
    r = a * th
    pts = np.column_stack([r * np.cos(th), r * np.sin(th)]) + np.asarray(
        center, dtype=float
    )
    pts += rng.normal(scale=0.015 * spacing, size=pts.shape)
    return pts


def two_blob_dataset(seed=0, n_per=100, spacing=0.1, gap_ratio=1.7, sep=8.0):
    """Two spiral blobs with a two-hump analytic field; ground truth by construction."""
    rng = np.random.default_rng(seed)
    a = spiral_blob((0.0, 0.0), n_per, spacing, gap_ratio, rng)
    b = spiral_blob((sep, 0.0), n_per, spacing, gap_ratio, rng)
    pts = np.vstack([a, b])
    truth = np.array([1] * n_per + [2] * n_per)
    sigma = 0.9
    f = np.exp(-np.sum(pts**2, axis=1) / (2 * sigma**2)) + 0.85 * np.exp(
        -np.sum((pts - [sep, 0.0]) ** 2, axis=1) / (2 * sigma**2)
    )
    return pts, f, truth


def disjoint_spike_vertices(graph, rng, n_spikes=10):
    """Vertices with pairwise disjoint closed neighborhoods."""
    closed = [set(graph.neighbors(v)) | {v} for v in range(graph.n_vertices)]
    chosen, used = [], set()
    for v in rng.permutation(graph.n_vertices):
        v = int(v)
        if closed[v] & used:
            continue
        chosen.append(v)
        used |= closed[v]
        if len(chosen) == n_spikes:
            return chosen
    raise RuntimeError("could not place disjoint spikes")


def zigzag_field(rng, n_teeth: int):
    """Piecewise-linear field with unit |slope|: its outlier score is constant.

    Teeth have distinct integer peaks (8..10) in descending order separated
    by distinct shallow valleys (1..3). Descending peaks keep the plateau
    tie-break (by index) aligned with the elder rule when a sweep clips the
    teeth, and shallow valleys keep every prominence at least 5.
    """
    peaks = sorted(
        map(int, rng.choice(np.arange(8, 11), size=n_teeth, replace=False)),
        reverse=True,
    )
    valleys = list(
        map(int, rng.choice(np.arange(1, 4), size=n_teeth - 1, replace=False))
    )
    valleys.append(0)
    values = [0.0]
    level = 0
    for peak, valley in zip(peaks, valleys):
        values.extend(range(level + 1, peak + 1))
        values.extend(range(peak - 1, valley - 1, -1))
        level = valley
    return np.array(values, dtype=float), peaks


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
