"""Planar primitives: points, the quarter-turn rotation, barycentric and frame
coordinates, orientation and point location.

Points are row vectors; the rotation ``R = [[0, 1], [-1, 0]]`` acts by right
multiplication, so ``(x, y) R = (-y, x)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import CoincidentPoints, DegenerateTriangle, NotFound

if TYPE_CHECKING:
    from .mesh import Mesh

__all__ = [
    "Point", "Vector", "Triangle", "BarycentricTriple", "EPS_AREA_REL",
    "EPS_LEN_REL", "EPS_LOC", "rot90", "dot", "signed_area", "barycentric",
    "barycentric_det", "barycentric_gradients", "frame_coords", "locate",
    "locate_many", "as_points", "affine_coordinates", "barycentric_array",
]

EPS_AREA_REL = 1e-12
EPS_LEN_REL = 1e-12
EPS_LOC = 1e-9


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite coordinate {v!r}")


@dataclass(frozen=True, slots=True)
class Vector:
    dx: float
    dy: float

    def __post_init__(self):
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "dy", float(self.dy))
        _check_finite(self.dx, self.dy)

    def __add__(self, other: Vector) -> Vector:
        return Vector(self.dx + other.dx, self.dy + other.dy)

    def __sub__(self, other: Vector) -> Vector:
        return Vector(self.dx - other.dx, self.dy - other.dy)

    def __neg__(self) -> Vector:
        return Vector(-self.dx, -self.dy)

    def __mul__(self, k: float) -> Vector:
        return Vector(self.dx * k, self.dy * k)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.dx
        yield self.dy

    def norm(self) -> float:
        return math.hypot(self.dx, self.dy)

    def to_array(self) -> np.ndarray:
        return np.array([self.dx, self.dy])


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        _check_finite(self.x, self.y)

    def __sub__(self, other: Point) -> Vector:
        return Vector(self.x - other.x, self.y - other.y)

    def __add__(self, v: Vector) -> Point:
        return Point(self.x + v.dx, self.y + v.dy)

    def __iter__(self):
        yield self.x
        yield self.y

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True, slots=True)
class BarycentricTriple:
    lam_a: float
    lam_b: float
    lam_p: float

    def __iter__(self):
        yield self.lam_a
        yield self.lam_b
        yield self.lam_p

    def clamped(self) -> BarycentricTriple:
        """Copy with every component clipped to [0, 1]; for reporting only."""
        return BarycentricTriple(*(min(1.0, max(0.0, v)) for v in self))


@dataclass(frozen=True, slots=True)
class Triangle:
    """Triangle ``Co{a, b, p}``; ``p`` is the distinguished vertex where one applies."""

    a: Point
    b: Point
    p: Point

    def vertices(self) -> tuple[Point, Point, Point]:
        return (self.a, self.b, self.p)

    def longest_edge(self) -> float:
        return max((self.b - self.a).norm(), (self.p - self.b).norm(),
                   (self.a - self.p).norm())

    diameter = longest_edge

    def check(self) -> None:
        """Raise DegenerateTriangle when the area is negligible at this scale."""
        if abs(signed_area(self)) <= EPS_AREA_REL * self.longest_edge() ** 2:
            raise DegenerateTriangle(f"degenerate triangle {self}")

    def with_distinguished(self, k: int) -> Triangle:
        """Relabel so that vertex ``k`` (0=a, 1=b, 2=p) becomes ``p``."""
        a, b, p = self.vertices()
        return (Triangle(b, p, a), Triangle(a, p, b), self)[k]


def as_points(x) -> np.ndarray:
    """Coerce a Point, pair or (N, 2) array-like into a float (N, 2) array."""
    if isinstance(x, Point):
        return np.array([[x.x, x.y]])
    arr = np.asarray(x, dtype=float)
    return arr.reshape(-1, 2)


def rot90(v: Vector) -> Vector:
    """Row vector times ``R``: ``(dx, dy) -> (-dy, dx)``."""
    return Vector(-v.dy, v.dx)


def dot(u: Vector, v: Vector) -> float:
    return u.dx * v.dx + u.dy * v.dy


def signed_area(t: Triangle) -> float:
    """Half of ``det(b - a, p - a)``; positive for counterclockwise ``(a, b, p)``."""
    u, v = t.b - t.a, t.p - t.a
    return 0.5 * (u.dx * v.dy - u.dy * v.dx)


def _affine_coordinate(u: Point, v: Point, w: Point) -> tuple[np.ndarray, float]:
    """Gradient and offset of the barycentric coordinate of ``w`` in ``Co{u, v, w}``.

    Uses ``<(v - u)R | x - u> / <(v - u)R | w - u>``.
    """
    n = rot90(v - u)
    denom = dot(n, w - u)
    g = np.array([n.dx, n.dy]) / denom
    return g, -(g[0] * u.x + g[1] * u.y)


def affine_coordinates(t: Triangle) -> tuple[np.ndarray, np.ndarray]:
    """Rows of ``G`` and offsets ``c`` with ``lambda = x @ G.T + c`` for (a, b, p)."""
    t.check()
    ga, ca = _affine_coordinate(t.b, t.p, t.a)
    gb, cb = _affine_coordinate(t.p, t.a, t.b)
    gp, cp = _affine_coordinate(t.a, t.b, t.p)
    return np.array([ga, gb, gp]), np.array([ca, cb, cp])


def barycentric_array(t: Triangle, pts) -> np.ndarray:
    """Barycentric coordinates ``(lam_a, lam_b, lam_p)`` of many points, shape (N, 3)."""
    G, c = affine_coordinates(t)
    return as_points(pts) @ G.T + c


def barycentric(t: Triangle, x: Point) -> BarycentricTriple:
    """Barycentric coordinates of ``x`` by the inner-product formula."""
    t.check()
    lam = []
    for u, v, w in ((t.b, t.p, t.a), (t.p, t.a, t.b), (t.a, t.b, t.p)):
        n = rot90(v - u)
        lam.append(dot(n, x - u) / dot(n, w - u))
    return BarycentricTriple(*lam)


def barycentric_det(t: Triangle, x: Point) -> BarycentricTriple:
    """Barycentric coordinates by the determinant ratio; cross-check for ``barycentric``."""
    t.check()

    def det(u: Vector, v: Vector) -> float:
        return u.dx * v.dy - u.dy * v.dx

    lam = []
    for u, v, w in ((t.b, t.p, t.a), (t.p, t.a, t.b), (t.a, t.b, t.p)):
        lam.append(det(x - u, x - v) / det(w - u, w - v))
    return BarycentricTriple(*lam)


def barycentric_gradients(t: Triangle) -> tuple[Vector, Vector, Vector]:
    """Constant gradients ``(grad lam_a, grad lam_b, grad lam_p)``."""
    G, _ = affine_coordinates(t)
    return tuple(Vector(*row) for row in G)


def frame_coords(p: Point, a: Point, v: Point) -> tuple[float, float]:
    """Coordinates of ``v`` in the orthogonal frame at ``a`` spanned by ``p - a`` and
    ``(p - a)R``, both normalized by ``|p - a|^2``."""
    d = p - a
    n2 = dot(d, d)
    scale = max(math.hypot(p.x, p.y), math.hypot(a.x, a.y))
    if math.sqrt(n2) <= EPS_LEN_REL * scale or n2 == 0.0:
        raise CoincidentPoints(f"{p} and {a} coincide")
    w = v - a
    return dot(w, d) / n2, dot(w, rot90(d)) / n2


def locate_many(mesh: Mesh, pts) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``locate``: triangle index per point (``-1`` outside) and the
    unclamped barycentric triples in that triangle's stored vertex order."""
    P = as_points(pts)
    Gs, cs = mesh.affine_tables()
    lam = np.einsum("nd,tkd->tnk", P, Gs) + cs[:, None, :]
    inside = np.all(lam >= -EPS_LOC, axis=2)
    hit = inside.any(axis=0)
    idx = np.where(hit, inside.argmax(axis=0), -1)
    rows = np.where(hit, idx, 0)
    bary = lam[rows, np.arange(len(P))]
    bary[~hit] = np.nan
    return idx, bary


def locate(mesh: Mesh, x: Point) -> tuple[int, BarycentricTriple]:
    """Lowest-index triangle containing ``x`` within ``EPS_LOC``.

    The returned triple refers to the stored vertex order ``(v0, v1, v2)`` of
    that triangle.
    """
    idx, bary = locate_many(mesh, [[x.x, x.y]])
    if idx[0] < 0:
        raise NotFound(f"{x} lies outside the mesh domain")
    return int(idx[0]), BarycentricTriple(*bary[0])


def bounding_box(points: Iterable[Point]) -> tuple[float, float, float, float]:
    xs, ys = zip(*((q.x, q.y) for q in points))
    return min(xs), min(ys), max(xs), max(ys)
