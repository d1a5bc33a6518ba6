"""Assembly of the C1 spline from vertex data and evaluation over the mesh."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .basis import ProcedureConfig, TriangleBasis
from .errors import BadGrid, MissingData, OutsideDomain
from .geometry import Point, Vector, as_points, locate_many
from .mesh import Mesh, VertexGradientData

__all__ = [
    "SplineField", "SampleRow", "spline_value", "spline_gradient", "sample_grid",
    "write_csv", "format_float",
]


@dataclass(eq=False)
class SplineField:
    """The interpolant of ``data`` over ``mesh`` for the procedure ``cfg``.

    Per-triangle basis builders are created lazily and kept; ``use_cache=False``
    rebuilds them on every call, which must give identical results.
    """

    mesh: Mesh
    data: VertexGradientData | None
    cfg: ProcedureConfig = field(default_factory=ProcedureConfig)
    use_cache: bool = True
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if self.data is not None and len(self.data) != self.mesh.n_vertices:
            raise MissingData(
                f"data has {len(self.data)} rows for {self.mesh.n_vertices} vertices")

    def _require_data(self) -> VertexGradientData:
        if self.data is None:
            raise MissingData("no gradient data bound to the mesh")
        return self.data

    def triangle_basis(self, k: int) -> TriangleBasis:
        if not self.use_cache:
            return TriangleBasis(self.cfg, self.mesh.triangle(k))
        tb = self._cache.get(k)
        if tb is None:
            tb = self._cache[k] = TriangleBasis(self.cfg, self.mesh.triangle(k))
        return tb

    def evaluate_on(self, k: int, pts) -> tuple[np.ndarray, np.ndarray]:
        """Value and gradient of the polynomial piece of triangle ``k``, at any points."""
        data = self._require_data()
        rows = data.table[list(self.mesh.triangles[k])]
        return self.triangle_basis(k).evaluate(pts, rows)

    def evaluate_many(self, pts) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Values, gradients and triangle indices; NaN and ``-1`` outside the domain."""
        self._require_data()
        P = as_points(pts)
        idx, _ = locate_many(self.mesh, P)
        val = np.full(len(P), np.nan)
        grad = np.full((len(P), 2), np.nan)
        for k in np.unique(idx[idx >= 0]):
            sel = idx == k
            v, g = self.evaluate_on(int(k), P[sel])
            val[sel] = v
            grad[sel] = g
        return val, grad, idx

    def evaluate(self, x: Point) -> tuple[float, Vector, int]:
        val, grad, idx = self.evaluate_many([[x.x, x.y]])
        if idx[0] < 0:
            raise OutsideDomain(f"{x} lies outside the mesh domain")
        return float(val[0]), Vector(*grad[0]), int(idx[0])

    def with_data(self, data: VertexGradientData) -> SplineField:
        return SplineField(self.mesh, data, self.cfg, self.use_cache)


def spline_value(fld: SplineField, x: Point) -> float:
    return fld.evaluate(x)[0]


def spline_gradient(fld: SplineField, x: Point) -> Vector:
    return fld.evaluate(x)[1]


class SampleRow(NamedTuple):
    x: float
    y: float
    f: float | None
    fx: float | None
    fy: float | None
    tri: int


def sample_grid(fld: SplineField, bbox: tuple[float, float, float, float],
                nx: int, ny: int) -> list[SampleRow]:
    """Regular ``nx`` by ``ny`` grid over ``bbox = (x0, y0, x1, y1)``, corners included.

    Rows are ordered with ``x`` varying fastest. Points outside the mesh get
    ``None`` values and ``tri = -1``.
    """
    if int(nx) != nx or int(ny) != ny or nx < 2 or ny < 2:
        raise BadGrid(f"grid must be at least 2x2, got {nx}x{ny}")
    x0, y0, x1, y1 = bbox
    if not (np.isfinite([x0, y0, x1, y1]).all() and x1 > x0 and y1 > y0):
        raise BadGrid(f"bad bounding box {bbox}")
    xs = np.linspace(x0, x1, int(nx))
    ys = np.linspace(y0, y1, int(ny))
    X, Y = np.meshgrid(xs, ys)
    P = np.column_stack([X.ravel(), Y.ravel()])
    val, grad, idx = fld.evaluate_many(P)
    rows = []
    for (x, y), v, g, k in zip(P, val, grad, idx):
        if k < 0:
            rows.append(SampleRow(float(x), float(y), None, None, None, -1))
        else:
            rows.append(SampleRow(float(x), float(y), float(v), float(g[0]), float(g[1]), int(k)))
    return rows


def format_float(v: float) -> str:
    """17 significant digits; ``-0`` is printed as ``0``."""
    return format(float(v) + 0.0, ".17g")


def write_csv(rows: list[SampleRow], fh: io.TextIOBase | None = None) -> str:
    """CSV with header ``x,y,f,fx,fy,tri``; returns the text and writes it to ``fh``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "f", "fx", "fy", "tri"])
    for r in rows:
        vals = ["" if c is None else format_float(c) for c in (r.f, r.fx, r.fy)]
        w.writerow([format_float(r.x), format_float(r.y), *vals, r.tri])
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text
