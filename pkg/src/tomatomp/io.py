"""File ingestion and artifact emission for the command-line surface.

Input kinds: points-csv (coordinates plus named field columns),
grid-image-csv (rows of pixel values), off-mesh (OFF file plus a sidecar
CSV of per-vertex fields), and graph-csv (edge list plus a vertex field
CSV). Outputs are plain CSV/JSON plus a dependency-free SVG diagram plot;
all writers are byte-deterministic.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .diagrams import DiagramPoint, PersistenceDiagram
from .graphs import Graph, grid_graph
from .mma import MmaDecomposition
from .tomato import Clustering


class IngestError(ValueError):
    """Raised when an input file cannot be parsed."""


def _read_csv_columns(path: Path) -> tuple[list[str], list[list[float]]]:
    """Parse a headered CSV of floats; report bad cells with line numbers."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise IngestError(
                    f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}"
                )
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise IngestError(f"{path}:{lineno}: {exc}") from None
    return header, rows


def _columns_as_fields(
    header: list[str], rows: list[list[float]], names: list[str], path: Path
) -> dict[str, np.ndarray]:
    fields = {}
    for name in names:
        if name not in header:
            raise IngestError(f"{path}: no column named {name!r}")
        col = np.array([r[header.index(name)] for r in rows])
        if not np.all(np.isfinite(col)):
            bad = int(np.flatnonzero(~np.isfinite(col))[0]) + 2
            raise IngestError(f"{path}:{bad}: non-finite value in column {name!r}")
        fields[name] = col
    return fields


def ingest_points_csv(
    path, field_columns: list[str], coord_columns: list[str] | None = None
) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Point cloud plus named scalar fields from a headered CSV."""
    path = Path(path)
    header, rows = _read_csv_columns(path)
    if coord_columns is None:
        coord_columns = [c for c in ("x", "y", "z") if c in header]
        if not coord_columns:
            coord_columns = [c for c in header if c not in field_columns]
    if not coord_columns:
        raise IngestError(f"{path}: no coordinate columns found")
    coords = _columns_as_fields(header, rows, coord_columns, path)
    points = np.column_stack([coords[c] for c in coord_columns])
    fields = _columns_as_fields(header, rows, field_columns, path)
    return points, fields


def ingest_grid_csv(path, connectivity: int = 4) -> tuple[Graph, dict[str, np.ndarray]]:
    """Pixel grid from a headerless CSV of rows of values."""
    path = Path(path)
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise IngestError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise IngestError(f"{path}: empty file")
    width = len(rows[0])
    for lineno, r in enumerate(rows, start=1):
        if len(r) != width:
            raise IngestError(f"{path}:{lineno}: ragged row")
    values = np.asarray(rows).ravel()
    if not np.all(np.isfinite(values)):
        raise IngestError(f"{path}: non-finite pixel value")
    return grid_graph(len(rows), width, connectivity), {"pixel": values}


def ingest_off_mesh(
    path, sidecar, field_columns: list[str]
) -> tuple[Graph, dict[str, np.ndarray]]:
    """Graph from an OFF mesh's face edges plus per-vertex fields from a CSV."""
    path = Path(path)
    with open(path) as fh:
        lines = []
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append((lineno, line))
    if not lines or lines[0][1].upper() != "OFF":
        raise IngestError(f"{path}:1: missing OFF header")
    try:
        nv, nf, _ = (int(t) for t in lines[1][1].split()[:3])
    except (IndexError, ValueError):
        raise IngestError(f"{path}:{lines[1][0]}: malformed counts line") from None
    body = lines[2:]
    if len(body) < nv + nf:
        raise IngestError(f"{path}: truncated file")
    verts = []
    for lineno, line in body[:nv]:
        try:
            verts.append([float(t) for t in line.split()])
        except ValueError:
            raise IngestError(f"{path}:{lineno}: bad vertex line") from None
    pts = np.asarray(verts)
    edges = set()
    for lineno, line in body[nv : nv + nf]:
        try:
            parts = [int(t) for t in line.split()]
        except ValueError:
            raise IngestError(f"{path}:{lineno}: bad face line") from None
        k, face = parts[0], parts[1:]
        if len(face) < k or k < 2:
            raise IngestError(f"{path}:{lineno}: bad face arity")
        face = face[:k]
        for a, b in zip(face, face[1:] + face[:1]):
            if a == b:
                raise IngestError(f"{path}:{lineno}: degenerate face edge")
            edges.add((a, b) if a < b else (b, a))
    lens = [float(np.linalg.norm(pts[u] - pts[v])) for u, v in sorted(edges)]
    g = Graph(nv, sorted(edges), lens)
    header, rows = _read_csv_columns(Path(sidecar))
    if len(rows) != nv:
        raise IngestError(
            f"{sidecar}: {len(rows)} field rows for {nv} mesh vertices"
        )
    fields = _columns_as_fields(header, rows, field_columns, Path(sidecar))
    return g, fields


def ingest_graph_csv(
    edges_path, fields_path, field_columns: list[str]
) -> tuple[Graph, dict[str, np.ndarray]]:
    """Graph from an edge-list CSV (u,v,length) plus a vertex field CSV."""
    header, frows = _read_csv_columns(Path(fields_path))
    fields = _columns_as_fields(header, frows, field_columns, Path(fields_path))
    n = len(frows)
    edges_path = Path(edges_path)
    eh, erows = _read_csv_columns(edges_path)
    for col in ("u", "v", "length"):
        if col not in eh:
            raise IngestError(f"{edges_path}: missing column {col!r}")
    iu, iv, il = eh.index("u"), eh.index("v"), eh.index("length")
    edges = [(int(r[iu]), int(r[iv])) for r in erows]
    lens = [float(r[il]) for r in erows]
    return Graph(n, edges, lens), fields


def ingest(path, kind: str, **kw):
    """Dispatch on the input kind; see the kind-specific helpers."""
    if kind == "points-csv":
        return ingest_points_csv(path, kw["field_columns"], kw.get("coord_columns"))
    if kind == "grid-image-csv":
        return ingest_grid_csv(path, kw.get("connectivity", 4))
    if kind == "off-mesh":
        return ingest_off_mesh(path, kw["sidecar"], kw["field_columns"])
    if kind == "graph-csv":
        return ingest_graph_csv(path, kw["fields_path"], kw["field_columns"])
    raise IngestError(f"unknown input kind {kind!r}")


# ---------------------------------------------------------------------------
# artifact writers (all byte-deterministic)
# ---------------------------------------------------------------------------


def _json_dump(obj, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=1, separators=(",", ": "))
        fh.write("\n")


def _point_obj(p: DiagramPoint) -> dict:
    return {"birth": p.birth, "death": p.death, "root": p.root}


def write_labels_csv(path, clustering: Clustering) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["vertex_id", "label"])
        for v, lab in enumerate(clustering.labels.tolist()):
            w.writerow([v, lab])


def read_labels_csv(path) -> np.ndarray:
    header, rows = _read_csv_columns(Path(path))
    if header[:2] != ["vertex_id", "label"]:
        raise IngestError(f"{path}: expected header vertex_id,label")
    rows.sort(key=lambda r: r[0])
    return np.array([int(r[1]) for r in rows])


def write_diagram_json(path, diagram: PersistenceDiagram, base=None) -> None:
    obj = {"points": [_point_obj(p) for p in diagram]}
    if base is not None:
        obj["base"] = list(map(float, base))
    _json_dump(obj, Path(path))


def read_diagram_json(path) -> PersistenceDiagram:
    with open(path) as fh:
        obj = json.load(fh)
    return PersistenceDiagram(
        [DiagramPoint(p["birth"], p["death"], p.get("root")) for p in obj["points"]]
    )


def write_combined_diagrams_json(path, diagrams, family) -> None:
    obj = {
        "lines": [
            {
                "index": k,
                "base": list(map(float, family[k].base)),
                "points": [_point_obj(p) for p in dgm],
            }
            for k, dgm in enumerate(diagrams)
        ]
    }
    _json_dump(obj, Path(path))


def write_summands_json(path, dec: MmaDecomposition) -> None:
    obj = {
        "summands": [
            {
                "id": sid,
                "first_line": s.first_line,
                "point_indices": list(s.point_indices),
                "bars": [
                    {"birth": b.tolist(), "death": d.tolist()} for b, d in s.bars
                ],
            }
            for sid, s in enumerate(dec.summands, start=1)
        ],
        "pi": [
            {str(sid): idx for sid, idx in sorted(pimap.items())}
            for pimap in dec.pi
        ],
    }
    _json_dump(obj, Path(path))


def write_ranking_csv(path, ranking) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["item", "score"])
        for item, score in ranking.entries:
            name = ",".join(item) if isinstance(item, tuple) else str(item)
            w.writerow([name, repr(float(score))])


def read_ranking_csv(path):
    from .analytics import Ranking

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != ["item", "score"]:
            raise IngestError(f"{path}: expected header item,score")
        entries = []
        for row in reader:
            if not row:
                continue
            item = tuple(row[0].split(",")) if "," in row[0] else row[0]
            entries.append((item, float(row[1])))
    return Ranking(tuple(entries))


def write_metrics_json(path, metrics: dict) -> None:
    _json_dump({k: metrics[k] for k in sorted(metrics)}, Path(path))


def _svg_fmt(x: float) -> str:
    return f"{x:.4f}"


def write_diagram_svg(
    path,
    diagram: PersistenceDiagram,
    d1: float | None = None,
    d2: float | None = None,
    size: int = 480,
) -> None:
    """Scatter of (death, birth) with the diagonal and an optional band overlay.

    The band marks prominences between ``d1`` and ``d2``; a separated
    diagram has no point inside it.
    """
    pts = diagram.as_array()
    if len(pts):
        lo = float(min(pts[:, 0].min(), pts[:, 1].min()))
        hi = float(max(pts[:, 0].max(), pts[:, 1].max()))
    else:
        lo, hi = 0.0, 1.0
    span = hi - lo if hi > lo else 1.0
    lo -= 0.08 * span
    hi += 0.08 * span
    span = hi - lo
    margin = 40.0
    scale = (size - 2 * margin) / span

    def sx(value):  # death on x
        return margin + (value - lo) * scale

    def sy(value):  # birth on y, SVG y axis points down
        return size - margin - (value - lo) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if d1 is not None and d2 is not None:
        # region between the lines birth = death + d1 and birth = death + d2
        poly = [
            (sx(lo), sy(lo + d1)),
            (sx(hi - d1), sy(hi)),
            (sx(hi - d2), sy(hi)),
            (sx(lo), sy(lo + d2)),
        ]
        pts_str = " ".join(f"{_svg_fmt(x)},{_svg_fmt(y)}" for x, y in poly)
        parts.append(f'<polygon points="{pts_str}" fill="#fde2c8" stroke="none"/>')
    parts.append(
        f'<line x1="{_svg_fmt(sx(lo))}" y1="{_svg_fmt(sy(lo))}" '
        f'x2="{_svg_fmt(sx(hi))}" y2="{_svg_fmt(sy(hi))}" '
        'stroke="#888888" stroke-width="1"/>'
    )
    for p in diagram:
        parts.append(
            f'<circle cx="{_svg_fmt(sx(p.death))}" cy="{_svg_fmt(sy(p.birth))}" '
            'r="3.5" fill="#2b6cb0" fill-opacity="0.85"/>'
        )
    parts.append(
        f'<text x="{size // 2}" y="{size - 10}" font-size="12" '
        'text-anchor="middle" fill="#444444">death</text>'
    )
    parts.append(
        f'<text x="14" y="{size // 2}" font-size="12" text-anchor="middle" '
        f'fill="#444444" transform="rotate(-90 14 {size // 2})">birth</text>'
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
