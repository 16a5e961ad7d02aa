"""Diagonal lines in R^p and the sliced scalar fields they induce.

A diagonal line has direction (1, ..., 1) and is identified by its unique
base point on the zero-sum hyperplane. The sliced field of p scalar fields
along a line is ``min_i (f_i - base_i)``: the one function whose superlevel
sets are the coordinate-wise intersections of the fields' superlevel sets
along the line. Distances between lines are l-infinity distances between
canonical bases.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .diagrams import DiagramPoint

__all__ = [
    "DiagonalLine",
    "LineFamily",
    "sliced_field",
    "make_line_family",
    "bar",
    "rescale_unit",
]

_PARAM_TOL = 1e-12


class DiagonalLine:
    """A line with direction (1, ..., 1), stored by its zero-sum base point."""

    __slots__ = ("base",)

    def __init__(self, base):
        b = np.asarray(base, dtype=float).ravel()
        if b.size < 1:
            raise ValueError("base must have dimension >= 1")
        if not np.all(np.isfinite(b)):
            raise ValueError("base must be finite")
        b = b - b.mean()  # canonical representative on the zero-sum hyperplane
        b.setflags(write=False)
        self.base = b

    @property
    def dim(self) -> int:
        return self.base.size

    def parametrize(self, t: float) -> np.ndarray:
        """phi(t) = base + t * (1, ..., 1)."""
        return self.base + float(t)

    def unparametrize(self, point, tol: float = 1e-9) -> float:
        """Inverse of :meth:`parametrize`; the point must lie on the line."""
        p = np.asarray(point, dtype=float).ravel()
        if p.size != self.dim:
            raise ValueError("point dimension mismatch")
        t = float(p.mean())
        if np.max(np.abs(p - (self.base + t))) > tol:
            raise ValueError("point does not lie on the line")
        return t

    def distance(self, other: "DiagonalLine") -> float:
        """l-infinity distance between canonical bases."""
        return float(np.max(np.abs(self.base - other.base)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiagonalLine)
            and self.dim == other.dim
            and bool(np.all(self.base == other.base))
        )

    def __hash__(self):
        return hash(self.base.tobytes())

    def __repr__(self) -> str:
        return f"DiagonalLine(base={self.base.tolist()})"


class LineFamily:
    """Ordered diagonal lines with consecutive bases at l-infinity distance eta."""

    __slots__ = ("lines", "eta")

    def __init__(self, lines: Sequence[DiagonalLine], eta: float | None = None):
        lines = tuple(lines)
        if not lines:
            raise ValueError("a line family needs at least one line")
        dim = lines[0].dim
        if any(ln.dim != dim for ln in lines):
            raise ValueError("all lines must share the same dimension")
        steps = [
            lines[k + 1].base - lines[k].base for k in range(len(lines) - 1)
        ]
        if steps:
            drift = max(
                float(np.max(np.abs(step - steps[0]))) for step in steps
            )
            if drift > 1e-9:
                raise ValueError(
                    "family bases must advance by one fixed step vector"
                )
        gaps = [float(np.max(np.abs(step))) for step in steps]
        if eta is None:
            eta = gaps[0] if gaps else 0.0
        if gaps and np.max(np.abs(np.asarray(gaps) - eta)) > 1e-9:
            raise ValueError("consecutive lines must be evenly spaced at eta")
        self.lines = lines
        self.eta = float(eta)

    @property
    def dim(self) -> int:
        return self.lines[0].dim

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __getitem__(self, k: int) -> DiagonalLine:
        return self.lines[k]

    def index_of(self, line: DiagonalLine, tol: float = 1e-9) -> int | None:
        """Index of a family line whose base matches within tol, else None."""
        for k, ln in enumerate(self.lines):
            if ln.dim == line.dim and ln.distance(line) <= tol:
                return k
        return None

    def __repr__(self) -> str:
        return f"LineFamily({len(self.lines)} lines, eta={self.eta:g}, p={self.dim})"


def sliced_field(fields: Sequence, line: DiagonalLine) -> np.ndarray:
    """Evaluate the sliced field min_i (f_i - base_i) on every vertex."""
    if len(fields) != line.dim:
        raise ValueError(
            f"{len(fields)} fields for a line in dimension {line.dim}"
        )
    arrs = [np.asarray(f, dtype=float).ravel() for f in fields]
    if any(a.size != arrs[0].size for a in arrs):
        raise ValueError("all fields must share the same vertex set")
    return np.min(np.vstack(arrs) - line.base[:, None], axis=0)


def rescale_unit(fields: Sequence) -> list[np.ndarray]:
    """Rescale each field affinely to [0, 1]; constant fields map to 0."""
    out = []
    for f in fields:
        f = np.asarray(f, dtype=float).ravel()
        lo, hi = f.min(), f.max()
        out.append((f - lo) / (hi - lo) if hi > lo else np.zeros_like(f))
    return out


def _spread_direction(offsets: np.ndarray) -> np.ndarray:
    """Principal direction of the zero-sum offsets, unit l-infinity norm."""
    centered = offsets - offsets.mean(axis=0)
    cov = centered.T @ centered
    vals, vecs = np.linalg.eigh(cov)
    u = vecs[:, -1]
    u = u - u.mean()  # keep it inside the zero-sum hyperplane
    peak = int(np.argmax(np.abs(u)))
    if u[peak] < 0:
        u = -u
    norm = np.max(np.abs(u))
    if norm == 0:
        u = np.zeros(offsets.shape[1])
        u[0] = 1.0
        u -= u.mean()
        norm = np.max(np.abs(u))
    return u / norm


def make_line_family(
    fields: Sequence, count: int, direction=None
) -> LineFamily:
    """Evenly spaced diagonal lines spanning the fields' value ranges.

    For two fields the bases are (c, -c) with c sweeping linearly from
    ``(min f1 - max f2) / 2`` to ``(max f1 - min f2) / 2``, so every data
    point's value pair lies between the extreme lines. For p >= 3 the
    family sweeps along ``direction`` (a zero-sum vector; defaults to the
    principal direction of the data's offset distribution), covering the
    offsets' projections. ``count == 1`` yields the single midpoint line
    with eta 0.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    flds = [np.asarray(f, dtype=float).ravel() for f in fields]
    p = len(flds)
    if p < 1:
        raise ValueError("need at least one field")
    if p == 1:
        return LineFamily([DiagonalLine([0.0])] * count, eta=0.0)
    if p == 2:
        lo = (flds[0].min() - flds[1].max()) / 2.0
        hi = (flds[0].max() - flds[1].min()) / 2.0
        cs = (
            np.array([(lo + hi) / 2.0])
            if count == 1
            else np.linspace(lo, hi, count)
        )
        lines = [DiagonalLine([c, -c]) for c in cs]
        eta = 0.0 if count == 1 else float(cs[1] - cs[0])
        return LineFamily(lines, eta=eta)
    values = np.vstack(flds).T  # (n, p)
    offsets = values - values.mean(axis=1, keepdims=True)
    if direction is None:
        u = _spread_direction(offsets)
    else:
        u = np.asarray(direction, dtype=float).ravel()
        if u.size != p:
            raise ValueError("direction dimension mismatch")
        u = u - u.mean()
        norm = np.max(np.abs(u))
        if norm == 0:
            raise ValueError("direction must not be parallel to (1, ..., 1)")
        u = u / norm
    center = offsets.mean(axis=0)
    proj = (offsets - center) @ u / float(u @ u)
    lo, hi = float(proj.min()), float(proj.max())
    ss = (
        np.array([(lo + hi) / 2.0]) if count == 1 else np.linspace(lo, hi, count)
    )
    lines = [DiagonalLine(center + s * u) for s in ss]
    eta = 0.0 if count == 1 else float(ss[1] - ss[0])  # u has unit l-inf norm
    return LineFamily(lines, eta=abs(eta))


def bar(line: DiagonalLine, point) -> tuple[np.ndarray, np.ndarray]:
    """Map a diagram point to its segment on the line: (phi(birth), phi(death))."""
    if isinstance(point, DiagramPoint):
        b, d = point.birth, point.death
    else:
        b, d = float(point[0]), float(point[1])
    return line.parametrize(b), line.parametrize(d)
