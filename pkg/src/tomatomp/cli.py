"""Command-line surface.

Subcommands: ``cluster`` (single field), ``cluster-mp`` (multi-field),
``graph-free``, ``outlier-robust``, ``rank``, ``diagram`` and ``match``.
All runs write their artifacts (labels.csv, diagram JSON/SVG,
summands.json, ranking.csv, metrics.json) into the output directory and
are byte-deterministic for a fixed configuration and seed. A key=value
``--config`` file overrides flags; the TOMATOMP_THREADS environment
variable caps internal parallelism.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, fields as dc_fields
from pathlib import Path

import numpy as np

from . import io as tio
from .analytics import ari, ami, pearson, rank_tuples, tophits
from .diagrams import diagram_distance
from .graphs import Graph, neighborhood_graph
from .mma import match_consecutive
from .multiparameter import (
    pipeline_graph_free,
    pipeline_outlier_robust,
    tomatomp,
)
from .slicing import make_line_family, rescale_unit, sliced_field
from .tomato import cluster, compute_persistence

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISSING_INPUT = 2


@dataclass
class RunConfig:
    """Validated run parameters; mirrors the CLI flags."""

    pipeline: str
    input: str | None = None
    kind: str = "points-csv"
    fields: list[str] = field(default_factory=list)
    coords: list[str] | None = None
    sidecar: str | None = None
    edges: str | None = None
    tau: float = 0.0
    n_lines: int = 100
    q: float = 2.0
    delta: float | None = None
    delta_max: float | None = None
    outlier_quantile: float = 0.1
    rescale: bool = False
    out: str = "."
    seed: int = 0
    connectivity: int = 4
    tuple_size: int = 1
    top: int = 10
    pair_mode: str = "quantile"
    quantile_level: float = 0.10
    d1: float | None = None
    d2: float | None = None
    truth_labels: str | None = None
    truth_ranking: str | None = None
    diagram_a: str | None = None
    diagram_b: str | None = None

    def validate(self) -> None:
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")
        if self.n_lines < 1:
            raise ValueError("n_lines must be >= 1")
        if self.q != float("inf") and self.q < 1:
            raise ValueError("q must be >= 1 or inf")
        if not (0 < self.outlier_quantile < 1):
            raise ValueError("outlier_quantile must lie in (0, 1)")
        if not (0 < self.quantile_level < 1):
            raise ValueError("quantile_level must lie in (0, 1)")
        if self.connectivity not in (4, 8):
            raise ValueError("connectivity must be 4 or 8")
        if (self.d1 is None) != (self.d2 is None):
            raise ValueError("d1 and d2 must be given together")
        if self.d1 is not None and not (0 <= self.d1 < self.d2):
            raise ValueError("need 0 <= d1 < d2")


_LIST_KEYS = frozenset({"fields", "coords"})
_BOOL_KEYS = frozenset({"rescale"})
_INT_KEYS = frozenset({"n_lines", "seed", "connectivity", "tuple_size", "top"})
_FLOAT_KEYS = frozenset(
    {"tau", "q", "delta", "delta_max", "outlier_quantile", "quantile_level", "d1", "d2"}
)


def _apply_config_file(cfg: RunConfig, path: str) -> None:
    """key=value lines override the parsed flags."""
    text = Path(path).read_text()
    valid = {f.name for f in dc_fields(RunConfig)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in valid:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        if key in _LIST_KEYS:
            setattr(cfg, key, [v.strip() for v in value.split(",") if v.strip()])
        elif key in _BOOL_KEYS:
            setattr(cfg, key, value.lower() in ("1", "true", "yes", "on"))
        elif key in _INT_KEYS:
            setattr(cfg, key, int(value))
        elif key in _FLOAT_KEYS:
            setattr(cfg, key, _float_or_inf(value))
        else:
            setattr(cfg, key, value)


def _ingest(cfg: RunConfig):
    """Returns (graph_or_none, points_or_none, ordered field dict)."""
    if cfg.kind == "points-csv":
        points, flds = tio.ingest_points_csv(cfg.input, cfg.fields, cfg.coords)
        return None, points, flds
    if cfg.kind == "grid-image-csv":
        g, flds = tio.ingest_grid_csv(cfg.input, cfg.connectivity)
        return g, None, flds
    if cfg.kind == "off-mesh":
        if not cfg.sidecar:
            raise ValueError("off-mesh input needs --sidecar")
        g, flds = tio.ingest_off_mesh(cfg.input, cfg.sidecar, cfg.fields)
        return g, None, flds
    if cfg.kind == "graph-csv":
        if not cfg.edges:
            raise ValueError("graph-csv input needs --edges")
        g, flds = tio.ingest_graph_csv(cfg.edges, cfg.input, cfg.fields)
        return g, None, flds
    raise ValueError(f"unknown input kind {cfg.kind!r}")


def _resolve_graph(cfg: RunConfig, graph, points) -> Graph:
    if graph is not None:
        return graph
    if cfg.delta is None:
        raise ValueError("point-cloud input needs --delta to build the graph")
    return neighborhood_graph(points, cfg.delta)


def _maybe_rescale(cfg: RunConfig, field_list):
    return rescale_unit(field_list) if cfg.rescale else list(field_list)


def _write_metrics(cfg: RunConfig, out: Path, clustering=None, ranking=None):
    metrics = {}
    if cfg.truth_labels and clustering is not None:
        truth = tio.read_labels_csv(cfg.truth_labels)
        metrics["ari"] = ari(clustering.labels, truth)
        metrics["ami"] = ami(clustering.labels, truth)
    if cfg.truth_ranking and ranking is not None:
        truth_rank = tio.read_ranking_csv(cfg.truth_ranking)
        metrics["pearson"] = pearson(ranking, truth_rank)
        metrics["tophits"] = tophits(
            ranking, truth_rank, min(10, len(truth_rank))
        )
    if metrics:
        tio.write_metrics_json(out / "metrics.json", metrics)


def _run_single(cfg: RunConfig, out: Path) -> None:
    graph, points, flds = _ingest(cfg)
    graph = _resolve_graph(cfg, graph, points)
    name = cfg.fields[0] if cfg.fields else next(iter(flds))
    values = _maybe_rescale(cfg, [flds[name]])[0]
    diagram = compute_persistence(graph, values)
    clustering = cluster(graph, values, cfg.tau)
    tio.write_labels_csv(out / "labels.csv", clustering)
    tio.write_diagram_json(out / "diagram.json", diagram)
    tio.write_diagram_svg(out / "diagram.svg", diagram, cfg.d1, cfg.d2)
    _write_metrics(cfg, out, clustering=clustering)


def _selected_fields(cfg: RunConfig, flds) -> list[np.ndarray]:
    names = cfg.fields if cfg.fields else list(flds)
    return [flds[n] for n in names]


def _write_multi_artifacts(cfg: RunConfig, out: Path, multi) -> None:
    diagrams = multi.decomposition.diagrams
    family = multi.family
    tio.write_combined_diagrams_json(out / "diagram.json", diagrams, family)
    for k, dgm in enumerate(diagrams):
        tio.write_diagram_json(
            out / f"diagram_line_{k:03d}.json", dgm, base=family[k].base
        )
    tio.write_summands_json(out / "summands.json", multi.decomposition)
    mid = len(family) // 2
    tio.write_diagram_svg(out / "diagram.svg", diagrams[mid], cfg.d1, cfg.d2)


def _run_multi(cfg: RunConfig, out: Path) -> None:
    graph, points, flds = _ingest(cfg)
    graph = _resolve_graph(cfg, graph, points)
    field_list = _maybe_rescale(cfg, _selected_fields(cfg, flds))
    family = make_line_family(field_list, cfg.n_lines)
    multi = tomatomp(field_list, graph, cfg.tau, family, cfg.q)
    tio.write_labels_csv(out / "labels.csv", multi.clustering)
    _write_multi_artifacts(cfg, out, multi)
    _write_metrics(cfg, out, clustering=multi.clustering)


def _run_graph_free(cfg: RunConfig, out: Path) -> None:
    graph, points, flds = _ingest(cfg)
    if points is None:
        raise ValueError("graph-free pipeline needs a point-cloud input")
    if cfg.delta_max is None:
        raise ValueError("graph-free pipeline needs --delta-max")
    values = _maybe_rescale(cfg, _selected_fields(cfg, flds))[0]
    result = pipeline_graph_free(
        points, values, cfg.delta_max, cfg.tau, cfg.n_lines, cfg.q
    )
    tio.write_labels_csv(out / "labels.csv", result.clustering)
    _write_multi_artifacts(cfg, out, result.multi)
    _write_metrics(cfg, out, clustering=result.clustering)


def _run_outlier_robust(cfg: RunConfig, out: Path) -> None:
    graph, points, flds = _ingest(cfg)
    graph = _resolve_graph(cfg, graph, points)
    values = _maybe_rescale(cfg, _selected_fields(cfg, flds))[0]
    result = pipeline_outlier_robust(
        graph, values, cfg.tau, cfg.n_lines, cfg.q, cfg.outlier_quantile
    )
    tio.write_labels_csv(out / "labels.csv", result.clustering)
    _write_multi_artifacts(cfg, out, result.multi)
    _write_metrics(cfg, out, clustering=result.clustering)


def _run_rank(cfg: RunConfig, out: Path) -> None:
    graph, points, flds = _ingest(cfg)
    graph = _resolve_graph(cfg, graph, points)
    names = cfg.fields if cfg.fields else list(flds)
    ranking = rank_tuples(
        {n: flds[n] for n in names},
        graph,
        cfg.tuple_size,
        cfg.tau,
        cfg.n_lines,
        cfg.top,
        pair_mode=cfg.pair_mode,
        quantile_level=cfg.quantile_level,
        q=cfg.q,
        rescale=cfg.rescale,
    )
    tio.write_ranking_csv(out / "ranking.csv", ranking)
    _write_metrics(cfg, out, ranking=ranking)


def _run_diagram(cfg: RunConfig, out: Path) -> None:
    graph, points, flds = _ingest(cfg)
    graph = _resolve_graph(cfg, graph, points)
    field_list = _maybe_rescale(cfg, _selected_fields(cfg, flds))
    if len(field_list) == 1:
        diagram = compute_persistence(graph, field_list[0])
    else:
        family = make_line_family(field_list, cfg.n_lines)
        mid = family[len(family) // 2]
        diagram = compute_persistence(graph, sliced_field(field_list, mid))
    tio.write_diagram_json(out / "diagram.json", diagram)
    tio.write_diagram_svg(out / "diagram.svg", diagram, cfg.d1, cfg.d2)


def _run_match(cfg: RunConfig, out: Path) -> None:
    if not cfg.diagram_a or not cfg.diagram_b:
        raise ValueError("match needs --diagram-a and --diagram-b")
    da = tio.read_diagram_json(cfg.diagram_a)
    db = tio.read_diagram_json(cfg.diagram_b)
    value, corr = diagram_distance(da, db, cfg.q)
    m = match_consecutive(da, db, cfg.q)
    tio.write_metrics_json(
        out / "matching.json",
        {
            "distance": value,
            "q": "inf" if cfg.q == float("inf") else cfg.q,
            "pairs": [list(p) for p in m.pairs],
        },
    )


_RUNNERS = {
    "tomato": _run_single,
    "tomatomp": _run_multi,
    "graph-free": _run_graph_free,
    "outlier-robust": _run_outlier_robust,
    "rank": _run_rank,
    "diagram": _run_diagram,
    "match": _run_match,
}

_INPUT_PATH_FIELDS = (
    "input",
    "sidecar",
    "edges",
    "truth_labels",
    "truth_ranking",
    "diagram_a",
    "diagram_b",
)


def run(cfg: RunConfig) -> int:
    """Execute a validated configuration; returns a process exit code."""
    try:
        cfg.validate()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for name in _INPUT_PATH_FIELDS:
        value = getattr(cfg, name)
        if value is not None and not Path(value).exists():
            print(f"error: input file not found: {value}", file=sys.stderr)
            return EXIT_MISSING_INPUT
    if cfg.pipeline != "match" and cfg.input is None:
        print("error: missing --input", file=sys.stderr)
        return EXIT_MISSING_INPUT
    np.random.seed(cfg.seed)  # pipelines are deterministic; seed pinned anyway
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        _RUNNERS[cfg.pipeline](cfg, out)
    except (ValueError, tio.IngestError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def _float_or_inf(text: str) -> float:
    return float("inf") if text in ("inf", "infinity") else float(text)


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="main input file")
    p.add_argument(
        "--kind",
        default="points-csv",
        choices=["points-csv", "grid-image-csv", "off-mesh", "graph-csv"],
    )
    p.add_argument("--fields", type=_csv_list, default=[], help="field column names")
    p.add_argument("--coords", type=_csv_list, default=None, help="coordinate columns")
    p.add_argument("--sidecar", help="per-vertex field CSV for off-mesh input")
    p.add_argument("--edges", help="edge-list CSV for graph-csv input")
    p.add_argument("--tau", type=float, default=0.0, help="prominence threshold")
    p.add_argument("--n-lines", type=int, default=100)
    p.add_argument("--q", type=_float_or_inf, default=2.0)
    p.add_argument("--delta", type=float, help="neighborhood radius for point input")
    p.add_argument("--delta-max", type=float, help="radius bound (graph-free)")
    p.add_argument("--outlier-quantile", type=float, default=0.1)
    p.add_argument("--rescale", action="store_true")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--connectivity", type=int, default=4, choices=[4, 8])
    p.add_argument("--tuple-size", type=int, default=1, choices=[1, 2, 3])
    p.add_argument("--top", type=int, default=10, help="top-variance field count")
    p.add_argument("--pair-mode", default="quantile", choices=["quantile", "jaccard"])
    p.add_argument("--quantile-level", type=float, default=0.10)
    p.add_argument("--d1", type=float, help="separation band lower bound (plot)")
    p.add_argument("--d2", type=float, help="separation band upper bound (plot)")
    p.add_argument("--truth-labels", help="ground-truth labels.csv for metrics")
    p.add_argument("--truth-ranking", help="ground-truth ranking.csv for metrics")
    p.add_argument("--diagram-a", help="first diagram JSON (match)")
    p.add_argument("--diagram-b", help="second diagram JSON (match)")
    p.add_argument("--config", help="key=value file overriding flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tomatomp",
        description="Topological clustering with one or several scalar fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command in (
        "cluster",
        "cluster-mp",
        "graph-free",
        "outlier-robust",
        "rank",
        "diagram",
        "match",
    ):
        _add_common(sub.add_parser(command))
    return parser


_COMMAND_TO_PIPELINE = {
    "cluster": "tomato",
    "cluster-mp": "tomatomp",
    "graph-free": "graph-free",
    "outlier-robust": "outlier-robust",
    "rank": "rank",
    "diagram": "diagram",
    "match": "match",
}


def config_from_args(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(pipeline=_COMMAND_TO_PIPELINE[args.command])
    for f in dc_fields(RunConfig):
        if f.name == "pipeline":
            continue
        if hasattr(args, f.name):
            value = getattr(args, f.name)
            if value is not None or f.name in ("coords",):
                setattr(cfg, f.name, value)
    if args.config:
        _apply_config_file(cfg, args.config)
    return cfg


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
