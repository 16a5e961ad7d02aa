import json
import subprocess
import sys

import numpy as np
import pytest

from tomatomp import ari, cluster, Graph, PersistenceDiagram
from tomatomp import io as tio
from tomatomp.cli import main

pytestmark = pytest.mark.filterwarnings("ignore:.*strictly comparable.*")

PATH_CSV = "x,y,f\n0,0,1\n1,0,3\n2,0,2\n3,0,4\n4,0,1\n"


def run_cli(args):
    return main([str(a) for a in args])


def test_ingest_points_csv(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("x,y,f\n0,0,1.5\n1,0,2.5\n2,0,3.5\n")
    points, fields = tio.ingest_points_csv(p, ["f"])
    assert points.shape == (3, 2)
    assert fields["f"].tolist() == [1.5, 2.5, 3.5]


def test_ingest_points_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x,y,f\n0,0,1\n1,oops,2\n")
    with pytest.raises(tio.IngestError, match="bad.csv:3"):
        tio.ingest_points_csv(p, ["f"])
    p2 = tmp_path / "nan.csv"
    p2.write_text("x,y,f\n0,0,nan\n1,0,2\n")
    with pytest.raises(tio.IngestError, match="non-finite"):
        tio.ingest_points_csv(p2, ["f"])
    p3 = tmp_path / "missing.csv"
    p3.write_text("x,y\n0,0\n")
    with pytest.raises(tio.IngestError, match="no column named"):
        tio.ingest_points_csv(p3, ["f"])


def test_ingest_grid_csv(tmp_path):
    p = tmp_path / "grid.csv"
    p.write_text("1,2\n3,4\n")
    g, fields = tio.ingest_grid_csv(p)
    assert g.n_vertices == 4 and g.n_edges == 4
    assert fields["pixel"].tolist() == [1, 2, 3, 4]
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,2\n3\n")
    with pytest.raises(tio.IngestError, match="ragged"):
        tio.ingest_grid_csv(ragged)


def test_ingest_off_mesh(tmp_path):
    off = tmp_path / "tri.off"
    off.write_text("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n")
    sidecar = tmp_path / "f.csv"
    sidecar.write_text("hks\n0.1\n0.2\n0.3\n")
    g, fields = tio.ingest_off_mesh(off, sidecar, ["hks"])
    assert g.n_vertices == 3 and g.n_edges == 3
    assert g.edge_length(0, 1) == pytest.approx(1.0)
    assert g.edge_length(1, 2) == pytest.approx(np.sqrt(2))
    assert fields["hks"].tolist() == [0.1, 0.2, 0.3]
    bad = tmp_path / "bad.off"
    bad.write_text("NOFF\n3 1 3\n")
    with pytest.raises(tio.IngestError, match="OFF header"):
        tio.ingest_off_mesh(bad, sidecar, ["hks"])


def test_ingest_graph_csv(tmp_path):
    edges = tmp_path / "edges.csv"
    edges.write_text("u,v,length\n0,1,1.0\n1,2,2.0\n")
    flds = tmp_path / "fields.csv"
    flds.write_text("f\n1\n5\n2\n")
    g, fields = tio.ingest_graph_csv(edges, flds, ["f"])
    assert g.n_vertices == 3 and g.n_edges == 2
    assert g.edge_length(1, 2) == 2.0
    assert fields["f"].tolist() == [1, 5, 2]


def test_labels_roundtrip(tmp_path):
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    c = cluster(g, [1, 3, 2, 4, 1], 0.5)
    path = tmp_path / "labels.csv"
    tio.write_labels_csv(path, c)
    again = tio.read_labels_csv(path)
    assert ari(c.labels, again) == 1.0


def test_diagram_json_roundtrip(tmp_path):
    d = PersistenceDiagram([(4.0, 1.0, 3), (3.0, 2.0, 1)])
    path = tmp_path / "d.json"
    tio.write_diagram_json(path, d)
    back = tio.read_diagram_json(path)
    assert [(p.birth, p.death, p.root) for p in back] == [
        (4.0, 1.0, 3),
        (3.0, 2.0, 1),
    ]


def test_svg_contains_points_and_band(tmp_path):
    d = PersistenceDiagram([(4.0, 1.0), (3.0, 2.0)])
    path = tmp_path / "d.svg"
    tio.write_diagram_svg(path, d, d1=0.5, d2=2.0)
    text = path.read_text()
    assert text.count("<circle") == 2
    assert "<polygon" in text and "<line" in text


def test_cli_cluster_artifacts(tmp_path):
    src = tmp_path / "pts.csv"
    src.write_text(PATH_CSV)
    out = tmp_path / "out"
    code = run_cli(
        ["cluster", "--input", src, "--fields", "f", "--delta", "1.5",
         "--tau", "0.5", "--out", out]
    )
    assert code == 0
    labels = tio.read_labels_csv(out / "labels.csv")
    assert sorted(np.unique(labels).tolist()) == [1, 2]
    diagram = json.loads((out / "diagram.json").read_text())
    assert {(p["birth"], p["death"]) for p in diagram["points"]} == {
        (4.0, 1.0),
        (3.0, 2.0),
    }
    assert (out / "diagram.svg").exists()


def test_cli_missing_input_exit_2(tmp_path):
    out = tmp_path / "out"
    code = run_cli(["cluster", "--input", tmp_path / "nope.csv", "--fields", "f", "--out", out])
    assert code == 2
    assert not out.exists()  # no partial outputs


def test_cli_rank_single_field(tmp_path):
    src = tmp_path / "pts.csv"
    src.write_text(PATH_CSV)
    out = tmp_path / "out"
    code = run_cli(
        ["rank", "--input", src, "--fields", "f", "--delta", "1.5",
         "--tuple-size", "1", "--out", out]
    )
    assert code == 0
    ranking = tio.read_ranking_csv(out / "ranking.csv")
    assert len(ranking) == 1 and ranking.items == ["f"]


def test_cli_cluster_mp_determinism(tmp_path):
    src = tmp_path / "pts.csv"
    src.write_text("x,y,f,g\n0,0,1,2.5\n1,0,9,6.5\n2,0,2,3\n3,0,8,6\n4,0,1,2.5\n")
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        code = run_cli(
            ["cluster-mp", "--input", src, "--fields", "f,g", "--delta", "1.5",
             "--tau", "1.0", "--n-lines", "9", "--seed", "7", "--out", out]
        )
        assert code == 0
        outs.append(out)
    names = sorted(p.name for p in outs[0].iterdir())
    assert "summands.json" in names and "labels.csv" in names
    for name in names:
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_cli_graph_free_and_outlier(tmp_path):
    rows = ["x,y,f"]
    rng = np.random.default_rng(3)
    pts = np.vstack([rng.normal(0, 0.3, (20, 2)), rng.normal(0, 0.3, (20, 2)) + [4, 0]])
    f = np.exp(-np.sum(pts**2, axis=1)) + np.exp(-np.sum((pts - [4, 0]) ** 2, axis=1))
    for (x, y), v in zip(pts, f):
        rows.append(f"{x},{y},{v}")
    src = tmp_path / "pts.csv"
    src.write_text("\n".join(rows) + "\n")
    out = tmp_path / "gf"
    code = run_cli(
        ["graph-free", "--input", src, "--fields", "f", "--delta-max", "0.8",
         "--tau", "0.9", "--n-lines", "10", "--out", out]
    )
    assert code == 0
    labels = tio.read_labels_csv(out / "labels.csv")
    assert labels.size == 40
    out2 = tmp_path / "orb"
    code = run_cli(
        ["outlier-robust", "--input", src, "--fields", "f", "--delta", "0.8",
         "--tau", "0.3", "--n-lines", "10", "--out", out2]
    )
    assert code == 0
    assert (out2 / "labels.csv").exists()


def test_cli_metrics_json(tmp_path):
    src = tmp_path / "pts.csv"
    src.write_text(PATH_CSV)
    truth = tmp_path / "truth.csv"
    truth.write_text("vertex_id,label\n0,2\n1,2\n2,1\n3,1\n4,1\n")
    out = tmp_path / "out"
    code = run_cli(
        ["cluster", "--input", src, "--fields", "f", "--delta", "1.5",
         "--tau", "0.5", "--truth-labels", truth, "--out", out]
    )
    assert code == 0
    metrics = json.loads((out / "metrics.json").read_text())
    assert metrics["ari"] == 1.0 and metrics["ami"] == 1.0


def test_cli_diagram_and_match(tmp_path):
    src = tmp_path / "pts.csv"
    src.write_text(PATH_CSV)
    out_a = tmp_path / "a"
    assert run_cli(["diagram", "--input", src, "--fields", "f", "--delta", "1.5", "--out", out_a]) == 0
    shifted = tmp_path / "pts2.csv"
    shifted.write_text("x,y,f\n0,0,1.2\n1,0,3.2\n2,0,2.2\n3,0,4.2\n4,0,1.2\n")
    out_b = tmp_path / "b"
    assert run_cli(["diagram", "--input", shifted, "--fields", "f", "--delta", "1.5", "--out", out_b]) == 0
    out_m = tmp_path / "m"
    code = run_cli(
        ["match", "--diagram-a", out_a / "diagram.json",
         "--diagram-b", out_b / "diagram.json", "--q", "inf", "--out", out_m]
    )
    assert code == 0
    matching = json.loads((out_m / "matching.json").read_text())
    assert matching["distance"] == pytest.approx(0.2, abs=1e-9)
    assert sorted(map(tuple, matching["pairs"])) == [(0, 0), (1, 1)]


def test_cli_config_file_overrides(tmp_path):
    src = tmp_path / "pts.csv"
    src.write_text(PATH_CSV)
    cfg = tmp_path / "run.cfg"
    out = tmp_path / "out"
    # tau and delta both come from the config file (delta has no flag here)
    cfg.write_text("tau = 1.5\ndelta = 1.5\n# comment line\n")
    code = run_cli(
        ["cluster", "--input", src, "--fields", "f",
         "--tau", "0.5", "--config", cfg, "--out", out]
    )
    assert code == 0
    labels = tio.read_labels_csv(out / "labels.csv")
    assert np.unique(labels).size == 1  # tau came from the config file


def test_cli_rank_pairs_with_truth_metrics(tmp_path):
    rows = ["x,y,a,b,c"]
    rng = np.random.default_rng(9)
    for i in range(12):
        x = float(i)
        rows.append(f"{x},0,{np.sin(x):.4f},{np.sin(x + 0.1):.4f},{rng.normal():.4f}")
    src = tmp_path / "pts.csv"
    src.write_text("\n".join(rows) + "\n")
    out = tmp_path / "out"
    code = run_cli(
        ["rank", "--input", src, "--fields", "a,b,c", "--delta", "1.5",
         "--tuple-size", "2", "--n-lines", "7", "--top", "3", "--out", out]
    )
    assert code == 0
    ranking = tio.read_ranking_csv(out / "ranking.csv")
    assert len(ranking) == 3
    assert all(isinstance(item, tuple) and len(item) == 2 for item in ranking.items)
    # reuse the emitted ranking as ground truth: perfect agreement
    out2 = tmp_path / "out2"
    code = run_cli(
        ["rank", "--input", src, "--fields", "a,b,c", "--delta", "1.5",
         "--tuple-size", "2", "--n-lines", "7", "--top", "3",
         "--truth-ranking", out / "ranking.csv", "--out", out2]
    )
    assert code == 0
    metrics = json.loads((out2 / "metrics.json").read_text())
    assert metrics["pearson"] == pytest.approx(1.0)
    assert metrics["tophits"] == 1.0


def test_threaded_per_line_runs_match_serial(tmp_path, monkeypatch):
    import tomatomp as tm

    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    h = np.array([1.0, 9.0, 2.0, 8.0, 1.0])
    flds = [h, 0.5 * h + 2.0]
    family = tm.make_line_family(flds, 12)
    serial = tm.tomatomp(flds, g, 1.0, family)
    monkeypatch.setenv("TOMATOMP_THREADS", "4")
    threaded = tm.tomatomp(flds, g, 1.0, family)
    assert np.array_equal(serial.clustering.labels, threaded.clustering.labels)
    assert np.array_equal(serial.assignments, threaded.assignments)


def test_cli_invalid_parameters(tmp_path):
    src = tmp_path / "pts.csv"
    src.write_text(PATH_CSV)
    code = run_cli(["cluster", "--input", src, "--fields", "f", "--delta", "1.5", "--tau", "-1"])
    assert code == 1


def test_console_entry_point(tmp_path):
    src = tmp_path / "pts.csv"
    src.write_text(PATH_CSV)
    out = tmp_path / "out"
    proc = subprocess.run(
        [sys.executable, "-m", "tomatomp.cli", "cluster", "--input", str(src),
         "--fields", "f", "--delta", "1.5", "--tau", "0.5", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (out / "labels.csv").exists()
