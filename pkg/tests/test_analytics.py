import numpy as np
import pytest

from tomatomp import (
    DiagramPoint,
    Graph,
    PersistenceDiagram,
    Ranking,
    ami,
    ari,
    build_decomposition,
    cluster,
    coss_multiparameter,
    coss_pair,
    coss_single,
    make_line_family,
    mean_pairwise_jaccard,
    pearson,
    rank_tuples,
    tophits,
)

pytestmark = pytest.mark.filterwarnings("ignore:.*strictly comparable.*")


def test_ari_values():
    assert ari([0, 0, 1, 1], [0, 0, 1, 1]) == 1.0
    assert ari([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    assert ari([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5, abs=1e-12)
    assert ari([7], [3]) == 1.0  # single vertex: trivially the same partition


def test_ari_ami_symmetric_and_permutation_invariant(rng):
    for _ in range(10):
        a = rng.integers(0, 4, size=30)
        b = rng.integers(0, 3, size=30)
        assert ari(a, b) == pytest.approx(ari(b, a))
        assert ami(a, b) == pytest.approx(ami(b, a))
        perm = {k: v for k, v in zip(range(4), rng.permutation(4))}
        a_perm = np.array([perm[x] for x in a])
        assert ari(a_perm, b) == pytest.approx(ari(a, b))
        assert ami(a_perm, b) == pytest.approx(ami(a, b))


def test_ami_values(rng):
    assert ami([0, 1, 1, 0], [2, 3, 3, 2]) == 1.0
    assert ami([0, 0, 0], [1, 1, 1]) == 1.0  # both trivial and equal
    a = rng.integers(0, 5, size=1000)
    b = rng.integers(0, 5, size=1000)
    assert abs(ami(a, b)) <= 0.1  # independent labelings are near 0


def test_pearson_values():
    assert pearson((1.0, 2.0, 3.0), (2.0, 4.0, 6.0)) == pytest.approx(1.0)
    assert pearson((1.0, 2.0, 3.0), (-1.0, -2.0, -3.0)) == pytest.approx(-1.0)
    assert pearson((1, 2, 3), (1, 2, 4)) == pytest.approx(0.98198, abs=1e-4)
    with pytest.raises(ValueError):
        pearson((1, 1, 1), (1, 2, 3))
    with pytest.raises(ValueError):
        pearson((1,), (2,))


def test_pearson_affine_invariance(rng):
    x = rng.normal(size=20)
    y = rng.normal(size=20)
    base = pearson(x, y)
    assert pearson(3.0 * x + 7.0, y) == pytest.approx(base)


def test_pearson_on_rankings():
    # aligned by item id, not by rank position
    r1 = Ranking((("a", 1.0), ("b", 2.0), ("c", 3.0)))
    r2 = Ranking((("c", 4.0), ("a", 1.0), ("b", 2.0)))
    assert pearson(r1, r2) == pytest.approx(0.98198, abs=1e-4)
    r3 = Ranking((("c", 6.0), ("a", 2.0), ("b", 4.0)))
    assert pearson(r1, r3) == pytest.approx(1.0)


def test_ranking_order_and_ties():
    r = Ranking((("b", 2.0), ("a", 2.0), ("c", 5.0)))
    assert r.items == ["c", "a", "b"]  # ties broken by item id
    assert r.top(2) == ["c", "a"]
    with pytest.raises(ValueError):
        Ranking((("a", 1.0), ("a", 2.0)))


def test_tophits():
    items = [chr(ord("a") + i) for i in range(12)]
    r1 = Ranking(tuple((it, float(-i)) for i, it in enumerate(items)))
    r2 = Ranking(tuple((it, float(-i)) for i, it in enumerate(items)))
    assert tophits(r1, r2, 10) == 1.0
    reversed_rank = Ranking(tuple((it, float(i)) for i, it in enumerate(items)))
    assert tophits(r1, reversed_rank, 6) == 0.0
    # 4 shared of k=10 on a 16-item universe
    items = [f"g{i:02d}" for i in range(16)]
    s1 = {it: float(-i) for i, it in enumerate(items)}
    order2 = items[:4] + items[10:] + items[4:10]
    s2 = {it: float(-i) for i, it in enumerate(order2)}
    r1 = Ranking(tuple(s1.items()))
    r2 = Ranking(tuple(s2.items()))
    assert tophits(r1, r2, 10) == pytest.approx(0.4)
    assert tophits(r2, r1, 10) == pytest.approx(0.4)  # symmetric
    with pytest.raises(ValueError):
        tophits(r1, r2, 20)


def test_coss_single():
    assert coss_single(PersistenceDiagram([])) == 0.0
    assert coss_single(PersistenceDiagram([(4, 1)])) == 9.0
    d = PersistenceDiagram([(4, 1), (2, 1)])
    assert coss_single(d) == 10.0
    assert coss_single(d, squared_total=True) == 16.0


def test_jaccard_pairs():
    assert mean_pairwise_jaccard([{0, 1}], [{1, 2}]) == pytest.approx(1 / 3)
    assert mean_pairwise_jaccard([], [{1}]) == 0.0
    assert mean_pairwise_jaccard([{0}], [{1}]) == 0.0
    assert mean_pairwise_jaccard([{0, 1}], [{0, 1}]) == 1.0


def test_coss_pair_on_clusterings():
    pt = DiagramPoint(1.0, 0.0)
    from tomatomp import Clustering

    c1 = Clustering([1, 1, 2, 2], (0, 2), (pt, pt))
    c2 = Clustering([1, 1, 2, 2], (0, 2), (pt, pt))
    assert coss_pair(c1, c2) == pytest.approx((1.0 + 0.0 + 0.0 + 1.0) / 4)
    c3 = Clustering([1, 1, 1, 1], (0,), (pt,))
    assert coss_pair(c3, c3) == 1.0
    # matches a brute-force table on random partitions
    rng = np.random.default_rng(11)
    for _ in range(10):
        la = rng.integers(1, 4, size=12)
        lb = rng.integers(1, 3, size=12)
        la[:3] = (1, 2, 3)
        lb[:2] = (1, 2)
        ca = Clustering(la, tuple(range(3)), (pt,) * 3)
        cb = Clustering(lb, tuple(range(2)), (pt,) * 2)
        sets_a = [set(np.flatnonzero(la == i).tolist()) for i in (1, 2, 3)]
        sets_b = [set(np.flatnonzero(lb == i).tolist()) for i in (1, 2)]
        expected = np.mean(
            [[len(s & t) / len(s | t) for t in sets_b] for s in sets_a]
        )
        assert coss_pair(ca, cb) == pytest.approx(float(expected))
        assert 0.0 <= coss_pair(ca, cb) <= 1.0


def _ramp_instance():
    h = np.array([1.0, 9.0, 2.0, 8.0, 1.0])
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    return g, h


def test_coss_multiparameter_single_line():
    g, h = _ramp_instance()
    family = make_line_family([h, 0.5 * h], 1)
    dec, diagrams = build_decomposition([h, 0.5 * h], g, family)
    assert coss_multiparameter(dec, family, 0.1) == pytest.approx(
        coss_single(diagrams[0])
    )


def test_coss_multiparameter_constant_and_quantile():
    g, h = _ramp_instance()
    family = make_line_family([h, h], 10)
    dec, _ = build_decomposition([h, h], g, family)
    values = [
        coss_single(d) for d in dec.diagrams
    ]
    lo = coss_multiparameter(dec, family, 0.10)
    hi = coss_multiparameter(dec, family, 0.90)
    assert lo == pytest.approx(float(np.quantile(values, 0.10, method="lower")))
    assert lo <= hi  # monotone in the level


def test_quantile_lower_interpolation():
    vals = np.arange(1.0, 101.0)
    assert float(np.quantile(vals, 0.10, method="lower")) == 10.0


def test_rank_tuples_single_field():
    g, h = _ramp_instance()
    r = rank_tuples({"f": h}, g, 1, tau=0.5, n_lines=5, n_top=5)
    assert len(r) == 1 and r.items == ["f"]
    from tomatomp import compute_persistence

    assert r.entries[0][1] == pytest.approx(coss_single(compute_persistence(g, h)))


def test_rank_tuples_identical_pair_jaccard():
    g, h = _ramp_instance()
    r = rank_tuples(
        {"a": h, "b": h.copy()},
        g,
        2,
        tau=0.5,
        n_lines=5,
        n_top=2,
        pair_mode="jaccard",
    )
    assert r.entries[0][0] == ("a", "b")
    assert r.entries[0][1] == pytest.approx(
        coss_pair(cluster(g, h, 0.5), cluster(g, h, 0.5))
    )


def test_rank_tuples_pairs_sorted(rng):
    g, h = _ramp_instance()
    fields = {
        "a": h,
        "b": 0.5 * h + 1.0,
        "c": np.array([2.0, 1.0, 2.0, 1.0, 2.0]),
    }
    r = rank_tuples(fields, g, 2, tau=0.5, n_lines=7, n_top=3)
    assert len(r) == 3
    scores = [s for _, s in r.entries]
    assert scores == sorted(scores, reverse=True)
    # top-variance selection: n_top=2 keeps only the two most variable fields
    r2 = rank_tuples(fields, g, 2, tau=0.5, n_lines=7, n_top=2)
    assert len(r2) == 1


def test_rank_tuples_validation():
    g, h = _ramp_instance()
    with pytest.raises(ValueError):
        rank_tuples({"a": h}, g, 2, 0.5, 5, 5)
    with pytest.raises(ValueError):
        rank_tuples({"a": h}, g, 4, 0.5, 5, 5)
