"""Conforming triangular meshes, their validation, and per-vertex gradient data.

JSON layout::

    {"vertices": [{"x": .., "y": .., "f": .., "fx": .., "fy": ..}, ...],
     "triangles": [[i, j, k], ...],
     "config": {"phi1": [[num, den], ...], "psi1": [...]}}

``f/fx/fy`` are either present on every vertex or on none; ``config`` is
optional.
"""
from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import DegenerateTriangle, MeshIndexError, ParseError
from .geometry import EPS_AREA_REL, Point, Triangle, affine_coordinates, signed_area

__all__ = [
    "Mesh", "VertexGradientData", "ValidationReport", "CheckResult", "parse_mesh",
    "load_mesh", "serialize_mesh", "validate_mesh", "adjacent_pairs", "MeshFile",
]

Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Mesh:
    """Vertices shared by index and triangles stored counterclockwise."""

    def __init__(self, vertices: Sequence, triangles: Sequence[Sequence[int]]):
        self.vertices: tuple[Point, ...] = tuple(
            v if isinstance(v, Point) else Point(*v) for v in vertices)
        n = len(self.vertices)
        tris = []
        self.n_flipped = 0
        for k, tri in enumerate(triangles):
            if len(tri) != 3:
                raise ParseError(f"triangle {k} must have 3 indices, got {tri!r}")
            ids = [int(i) for i in tri]
            for i in ids:
                if not 0 <= i < n:
                    raise MeshIndexError(f"triangle {k} references missing vertex {i}")
            if len(set(ids)) != 3:
                raise DegenerateTriangle(f"triangle {k} repeats a vertex: {ids}")
            if signed_area(Triangle(*(self.vertices[i] for i in ids))) < 0:
                ids = [ids[0], ids[2], ids[1]]
                self.n_flipped += 1
            tris.append(tuple(ids))
        self.triangles: tuple[tuple[int, int, int], ...] = tuple(tris)
        edge_map: dict[Edge, list[int]] = defaultdict(list)
        for k, (i, j, l) in enumerate(self.triangles):
            for e in (_edge(i, j), _edge(j, l), _edge(l, i)):
                edge_map[e].append(k)
        self.edge_map: dict[Edge, list[int]] = dict(edge_map)
        self._affine = None

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_edges(self) -> int:
        return len(self.edge_map)

    def triangle(self, k: int) -> Triangle:
        i, j, l = self.triangles[k]
        return Triangle(self.vertices[i], self.vertices[j], self.vertices[l])

    def diameter(self) -> float:
        xs = np.array([[v.x, v.y] for v in self.vertices])
        span = xs.max(axis=0) - xs.min(axis=0)
        return float(np.hypot(*span))

    def bbox(self) -> tuple[float, float, float, float]:
        xs = np.array([[v.x, v.y] for v in self.vertices])
        return (*xs.min(axis=0), *xs.max(axis=0))

    def affine_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-triangle barycentric gradients (T, 3, 2) and offsets (T, 3)."""
        if self._affine is None:
            Gs, cs = [], []
            for k in range(self.n_triangles):
                G, c = affine_coordinates(self.triangle(k))
                Gs.append(G)
                cs.append(c)
            self._affine = (np.array(Gs).reshape(-1, 3, 2), np.array(cs).reshape(-1, 3))
        return self._affine

    def triangles_at(self, vertex: int) -> list[int]:
        return [k for k, tri in enumerate(self.triangles) if vertex in tri]

    def mapped(self, fn) -> Mesh:
        """Same connectivity with every vertex replaced by ``fn(point)``."""
        return Mesh([fn(v) for v in self.vertices], self.triangles)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mesh):
            return NotImplemented
        return self.vertices == other.vertices and self.triangles == other.triangles

    __hash__ = None

    def __repr__(self) -> str:
        return f"Mesh({self.n_vertices} vertices, {self.n_triangles} triangles)"


@dataclass(frozen=True)
class VertexGradientData:
    """Per-vertex ``(f, fx, fy)`` rows, shape (n_vertices, 3)."""

    table: np.ndarray

    def __post_init__(self):
        arr = np.array(self.table, dtype=float).reshape(-1, 3)
        if not np.all(np.isfinite(arr)):
            raise ValueError("gradient data must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    @classmethod
    def from_records(cls, records) -> VertexGradientData:
        return cls(np.array([tuple(r) for r in records], dtype=float))

    @classmethod
    def zeros(cls, n: int) -> VertexGradientData:
        return cls(np.zeros((n, 3)))

    @classmethod
    def from_field(cls, mesh: Mesh, value, gradient) -> VertexGradientData:
        """Sample ``value(x, y)`` and ``gradient(x, y) -> (gx, gy)`` at the vertices."""
        return cls(np.array([(value(v.x, v.y), *gradient(v.x, v.y)) for v in mesh.vertices]))

    def __len__(self) -> int:
        return len(self.table)

    def __getitem__(self, i):
        return self.table[i]

    @property
    def f(self) -> np.ndarray:
        return self.table[:, 0]

    @property
    def fx(self) -> np.ndarray:
        return self.table[:, 1]

    @property
    def fy(self) -> np.ndarray:
        return self.table[:, 2]

    def __add__(self, other: VertexGradientData) -> VertexGradientData:
        return VertexGradientData(self.table + other.table)

    def __mul__(self, k: float) -> VertexGradientData:
        return VertexGradientData(self.table * k)

    __rmul__ = __mul__


@dataclass
class MeshFile:
    """Everything a mesh JSON document carries."""

    mesh: Mesh
    data: VertexGradientData | None = None
    config: dict | None = None


def _number(obj: Any, key: str, where: str) -> float:
    try:
        val = obj[key]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{where}: missing field {key!r}") from exc
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ParseError(f"{where}: field {key!r} must be a number, got {val!r}")
    val = float(val)
    if not math.isfinite(val):
        raise ParseError(f"{where}: field {key!r} is not finite")
    return val


def parse_mesh(text: str) -> MeshFile:
    """Parse a mesh JSON document; raises ParseError, MeshIndexError or DegenerateTriangle."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    verts = doc.get("vertices")
    tris = doc.get("triangles")
    if not isinstance(verts, list) or not isinstance(tris, list):
        raise ParseError("'vertices' and 'triangles' must be lists")

    points, rows = [], []
    has_data = None
    for k, v in enumerate(verts):
        where = f"vertex {k}"
        if not isinstance(v, dict):
            raise ParseError(f"{where} must be an object")
        points.append(Point(_number(v, "x", where), _number(v, "y", where)))
        present = [key in v for key in ("f", "fx", "fy")]
        if any(present) and not all(present):
            raise ParseError(f"{where}: f, fx, fy must appear together")
        if has_data is None:
            has_data = all(present)
        elif has_data != all(present):
            raise ParseError("f/fx/fy must be present on all vertices or on none")
        if has_data:
            rows.append(tuple(_number(v, key, where) for key in ("f", "fx", "fy")))

    for k, t in enumerate(tris):
        if (not isinstance(t, list) or len(t) != 3
                or not all(isinstance(i, int) and not isinstance(i, bool) for i in t)):
            raise ParseError(f"triangle {k} must be a list of 3 integers")
    mesh = Mesh(points, tris)

    config = doc.get("config")
    if config is not None and not isinstance(config, dict):
        raise ParseError("'config' must be an object")
    data = VertexGradientData(np.array(rows)) if has_data else None
    return MeshFile(mesh, data, config)


def load_mesh(path) -> MeshFile:
    with open(path, encoding="utf-8") as fh:
        return parse_mesh(fh.read())


def serialize_mesh(mesh: Mesh, data: VertexGradientData | None = None,
                   config: dict | None = None, indent: int | None = None) -> str:
    """JSON text that ``parse_mesh`` reads back to an identical mesh.

    Floats are written with ``repr`` so every coordinate round-trips exactly.
    """
    verts = []
    for k, v in enumerate(mesh.vertices):
        rec: dict[str, float] = {"x": v.x, "y": v.y}
        if data is not None:
            f, fx, fy = (float(c) for c in data[k])
            rec.update(f=f, fx=fx, fy=fy)
        verts.append(rec)
    doc: dict[str, Any] = {"vertices": verts, "triangles": [list(t) for t in mesh.triangles]}
    if config:
        doc["config"] = config
    return json.dumps(doc, indent=indent)


@dataclass
class CheckResult:
    passed: bool
    detail: str = ""
    warning: bool = False


@dataclass
class ValidationReport:
    checks: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed or c.warning for c in self.checks.values())

    def failed(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed and not c.warning]

    def to_dict(self) -> dict:
        return {
            "pass": self.ok,
            "checks": {name: {"pass": c.passed, "warning_only": c.warning, "detail": c.detail}
                       for name, c in self.checks.items()},
            "failed": self.failed(),
        }


def _on_segment_interior(q: Point, u: Point, v: Point, tol: float) -> bool:
    dx, dy = v.x - u.x, v.y - u.y
    L2 = dx * dx + dy * dy
    wx, wy = q.x - u.x, q.y - u.y
    s = (wx * dx + wy * dy) / L2
    if s <= tol or s >= 1 - tol:
        return False
    cross = wx * dy - wy * dx
    return abs(cross) <= tol * L2


def validate_mesh(mesh: Mesh, n_samples: int = 100, seed: int = 0) -> ValidationReport:
    """Check non-degeneracy, edge multiplicity, conformity and orientation."""
    rep = ValidationReport()

    bad = []
    for k in range(mesh.n_triangles):
        tri = mesh.triangle(k)
        if abs(signed_area(tri)) <= EPS_AREA_REL * tri.longest_edge() ** 2:
            bad.append(k)
    rep.checks["non_degeneracy"] = CheckResult(
        not bad, f"degenerate triangles: {bad}" if bad else "")

    multi = {e: ts for e, ts in mesh.edge_map.items() if len(ts) > 2}
    rep.checks["edge_multiplicity"] = CheckResult(
        not multi, "; ".join(f"edge {e} in triangles {ts}" for e, ts in multi.items()))

    # a vertex strictly inside some edge is a hanging node (T-junction);
    # a vertex strictly inside some triangle means overlapping triangles
    problems = []
    for (u, v) in mesh.edge_map:
        pu, pv = mesh.vertices[u], mesh.vertices[v]
        for w, q in enumerate(mesh.vertices):
            if w in (u, v):
                continue
            if _on_segment_interior(q, pu, pv, 1e-10):
                problems.append(f"vertex {w} lies inside edge {(u, v)}")
    good_tris = [k for k in range(mesh.n_triangles) if k not in bad]
    if good_tris:
        Gs, cs = mesh.affine_tables() if not bad else _tables(mesh, good_tris)
        P = np.array([[q.x, q.y] for q in mesh.vertices])
        lam = np.einsum("nd,tkd->tnk", P, Gs) + cs[:, None, :]
        strictly = np.all(lam > 1e-9, axis=2)
        for t_i, w in zip(*np.nonzero(strictly)):
            problems.append(f"vertex {w} lies inside triangle {good_tris[t_i]}")
        rng = np.random.default_rng(seed)
        x0, y0, x1, y1 = mesh.bbox()
        S = rng.uniform((x0, y0), (x1, y1), size=(n_samples, 2))
        lam = np.einsum("nd,tkd->tnk", S, Gs) + cs[:, None, :]
        counts = np.all(lam > 1e-9, axis=2).sum(axis=0)
        for i in np.nonzero(counts > 1)[0]:
            problems.append(f"sample {S[i].tolist()} lies inside {counts[i]} triangles")
    rep.checks["conformity"] = CheckResult(not problems, "; ".join(problems))

    seen: dict[tuple[float, float], int] = {}
    dups = []
    for i, v in enumerate(mesh.vertices):
        key = (v.x, v.y)
        if key in seen:
            dups.append((seen[key], i))
        else:
            seen[key] = i
    rep.checks["duplicate_vertices"] = CheckResult(
        not dups, f"vertices with equal coordinates: {dups}" if dups else "", warning=True)

    ccw = all(signed_area(mesh.triangle(k)) > 0 for k in good_tris)
    rep.checks["orientation"] = CheckResult(
        ccw, f"{mesh.n_flipped} triangle(s) reoriented to counterclockwise")
    return rep


def _tables(mesh: Mesh, ks: list[int]) -> tuple[np.ndarray, np.ndarray]:
    Gs, cs = zip(*(affine_coordinates(mesh.triangle(k)) for k in ks))
    return np.array(Gs), np.array(cs)


def adjacent_pairs(mesh: Mesh) -> list[tuple[int, int, Edge]]:
    """``(tri_i, tri_j, (u, v))`` for every interior edge, ``tri_i < tri_j``."""
    out = []
    for e, ts in sorted(mesh.edge_map.items()):
        if len(ts) == 2:
            i, j = sorted(ts)
            out.append((i, j, e))
    return out
