"""Numerical certification of the properties the construction guarantees.

Every checker returns a :class:`Report`; its JSON form is
``{"check", "max_jump", "per_edge", "pass", "tolerance"}`` where
``max_jump`` is the worst measured deviation of that check.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .basis import KINDS, BasisFunction, ProcedureConfig
from .errors import MissingData, SingularMap
from .geometry import Point, Triangle, Vector, as_points
from .mesh import Mesh, VertexGradientData, adjacent_pairs
from .spline import SplineField

__all__ = [
    "Report", "C1Report", "AffineMap", "check_c1", "check_vertex_conditions",
    "check_edge_shape", "check_invariance", "check_degree", "degree_residual",
    "fd_gradient", "check_reflection", "pushforward", "random_isometry",
    "random_homothety", "DEFAULT_SEED",
]

# documented 64-bit seed used whenever the caller does not pick one
DEFAULT_SEED = 0x9E3779B97F4A7C15


@dataclass
class Report:
    check: str
    max_jump: float
    per_edge: list = field(default_factory=list)
    passed: bool = True
    tolerance: float = 0.0

    def to_dict(self) -> dict:
        return {"check": self.check, "max_jump": float(self.max_jump),
                "per_edge": self.per_edge, "pass": bool(self.passed),
                "tolerance": float(self.tolerance)}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass
class C1Report(Report):
    max_value_jump: float = 0.0
    samples_per_edge: int = 0


def fd_gradient(fn: Callable[[np.ndarray], float], x, h: float = 1e-6) -> Vector:
    """Central-difference gradient of a scalar function of a 2-vector."""
    if h <= 0:
        raise ValueError("step must be positive")
    x = np.asarray(tuple(x), dtype=float)
    ex, ey = np.array([h, 0.0]), np.array([0.0, h])
    gx = (fn(x + ex) - fn(x - ex)) / (2 * h)
    gy = (fn(x + ey) - fn(x - ey)) / (2 * h)
    return Vector(float(gx), float(gy))


def _edge_samples(mesh: Mesh, edge, n: int) -> np.ndarray:
    u, v = (mesh.vertices[i] for i in edge)
    t = (np.arange(n) + 1.0) / (n + 1.0)
    return np.column_stack([(1 - t) * u.x + t * v.x, (1 - t) * u.y + t * v.y])


def check_c1(fld: SplineField, samples_per_edge: int = 50, tolerance: float = 1e-9) -> C1Report:
    """Compare the two polynomial pieces along every interior edge."""
    if fld.data is None:
        raise MissingData("C1 check needs gradient data")
    per_edge = []
    worst_v = worst_g = 0.0
    for i, j, e in adjacent_pairs(fld.mesh):
        P = _edge_samples(fld.mesh, e, samples_per_edge)
        vi, gi = fld.evaluate_on(i, P)
        vj, gj = fld.evaluate_on(j, P)
        dv = float(np.max(np.abs(vi - vj))) if len(P) else 0.0
        dg = float(np.max(np.hypot(*(gi - gj).T))) if len(P) else 0.0
        worst_v, worst_g = max(worst_v, dv), max(worst_g, dg)
        per_edge.append({"edge": list(e), "triangles": [i, j], "max_value_jump": dv,
                         "max_grad_jump": dg, "samples": samples_per_edge})
    return C1Report("c1", worst_g, per_edge, worst_g <= tolerance, tolerance,
                    max_value_jump=worst_v, samples_per_edge=samples_per_edge)


def check_vertex_conditions(fld: SplineField, rel_tolerance: float = 1e-10) -> Report:
    """Value and gradient of every incident piece at every vertex against the data."""
    if fld.data is None:
        raise MissingData("vertex check needs gradient data")
    data = fld.data.table
    tol = rel_tolerance * (1.0 + (float(np.max(np.abs(data))) if data.size else 0.0))
    per_vertex = []
    worst = 0.0
    for k, tri in enumerate(fld.mesh.triangles):
        P = np.array([[fld.mesh.vertices[i].x, fld.mesh.vertices[i].y] for i in tri])
        v, g = fld.evaluate_on(k, P)
        for row, i in enumerate(tri):
            dv = abs(v[row] - data[i, 0])
            dg = float(np.hypot(g[row, 0] - data[i, 1], g[row, 1] - data[i, 2]))
            worst = max(worst, dv, dg)
            per_vertex.append({"vertex": i, "triangle": k, "value_dev": float(dv),
                               "grad_dev": dg})
    return Report("vertex", worst, per_vertex, worst <= tol, tol)


def check_edge_shape(cfg: ProcedureConfig, tri: Triangle, samples: int = 20,
                     tolerance: float = 1e-11) -> Report:
    """Edge profiles of the basic functions at the distinguished vertex ``tri.p``.

    Along ``y_t = (1-t) a + t p`` (and likewise from ``b``) the value function
    must equal ``Phi(t)`` and the derivative functions ``(p - a)_j * Psi(t)``;
    on ``Co{a, b}`` all values and gradients must vanish.
    """
    a, b, p = tri.a, tri.b, tri.p
    t = np.linspace(0.0, 1.0, samples)
    fns = [BasisFunction(cfg, tri, i) for i in KINDS]
    phi = cfg.shapes.phi.eval_f64(t)
    psi = cfg.shapes.psi.eval_f64(t)
    per_edge = []
    worst = 0.0
    for name, q in (("a-p", a), ("b-p", b)):
        P = np.column_stack([(1 - t) * q.x + t * p.x, (1 - t) * q.y + t * p.y])
        expected = [phi, (p.x - q.x) * psi, (p.y - q.y) * psi]
        dev = max(float(np.max(np.abs(f.value(P) - e))) for f, e in zip(fns, expected))
        worst = max(worst, dev)
        per_edge.append({"edge": name, "max_dev": dev})
    P = np.column_stack([(1 - t) * a.x + t * b.x, (1 - t) * a.y + t * b.y])
    dev = max(max(float(np.max(np.abs(f.value(P)))),
                  float(np.max(np.abs(f.gradient(P))))) for f in fns)
    worst = max(worst, dev)
    per_edge.append({"edge": "a-b", "max_dev": dev})
    return Report("shape", worst, per_edge, worst <= tolerance, tolerance)


@dataclass(frozen=True)
class AffineMap:
    """``G(x) = x A + w`` for row vectors ``x``; ``A = [[a11, a12], [a21, a22]]``."""

    a11: float
    a12: float
    a21: float
    a22: float
    w: Vector = Vector(0.0, 0.0)

    def __post_init__(self):
        if abs(self.det) <= 1e-14 * max(1.0, float(np.max(np.abs(self.matrix)))) ** 2:
            raise SingularMap(f"singular linear part {self.matrix.tolist()}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    @classmethod
    def from_matrix(cls, A, w=(0.0, 0.0)) -> AffineMap:
        A = np.asarray(A, dtype=float)
        return cls(A[0, 0], A[0, 1], A[1, 0], A[1, 1], Vector(*w))

    @classmethod
    def rotation(cls, theta: float, w=(0.0, 0.0), scale: float = 1.0,
                 reflect: bool = False) -> AffineMap:
        c, s = math.cos(theta), math.sin(theta)
        A = scale * np.array([[c, s], [-s, c]])
        if reflect:
            A = np.array([[1.0, 0.0], [0.0, -1.0]]) @ A
        return cls.from_matrix(A, w)

    def apply(self, pts) -> np.ndarray:
        return as_points(pts) @ self.matrix + np.array([self.w.dx, self.w.dy])

    def __call__(self, x: Point) -> Point:
        return Point(*self.apply(x)[0])

    def is_isometry(self, tol: float = 1e-12) -> bool:
        A = self.matrix
        return bool(np.allclose(A @ A.T, np.eye(2), atol=tol))


def pushforward(amap: AffineMap, data: VertexGradientData,
                convention: str = "chain") -> VertexGradientData:
    """Data for ``h o G^{-1}`` from data of ``h``: values kept, gradient rows mapped.

    ``"chain"`` multiplies gradients by ``(A^T)^{-1}`` (the chain rule);
    ``"inverse"`` multiplies by ``A^{-1}`` and is kept only to show that it is
    wrong for non-symmetric ``A``.
    """
    A = amap.matrix
    M = np.linalg.inv(A.T) if convention == "chain" else np.linalg.inv(A)
    table = data.table.copy()
    table[:, 1:] = table[:, 1:] @ M
    return VertexGradientData(table)


def random_isometry(rng: np.random.Generator) -> AffineMap:
    return AffineMap.rotation(rng.uniform(0, 2 * math.pi), rng.uniform(-3, 3, 2),
                              reflect=bool(rng.integers(2)))


def random_homothety(rng: np.random.Generator) -> AffineMap:
    return AffineMap.rotation(rng.uniform(0, 2 * math.pi), rng.uniform(-3, 3, 2),
                              scale=rng.uniform(0.5, 2.0), reflect=bool(rng.integers(2)))


def _random_points(mesh: Mesh, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    ks = rng.integers(mesh.n_triangles, size=n)
    lam = rng.dirichlet(np.ones(3), size=n)
    V = np.array([[v.x, v.y] for v in mesh.vertices])
    T = np.array(mesh.triangles)[ks]
    P = np.einsum("nk,nkd->nd", lam, V[T])
    return ks, P


def check_invariance(fld: SplineField, amap: AffineMap, n_points: int = 200,
                     seed: int = DEFAULT_SEED, tolerance: float = 1e-9,
                     expect_invariant: bool = True, convention: str = "chain") -> Report:
    """Compare ``f_{T,F}`` with ``f_{G(T), G#F} o G`` at random points of the domain.

    With ``expect_invariant=False`` the report passes when the deviation
    exceeds ``tolerance`` (a witness of non-invariance).
    """
    if fld.data is None:
        raise MissingData("invariance check needs gradient data")
    rng = np.random.default_rng(seed)
    ks, P = _random_points(fld.mesh, n_points, rng)
    moved = SplineField(fld.mesh.mapped(amap), pushforward(amap, fld.data, convention), fld.cfg)
    GP = amap.apply(P)
    worst = 0.0
    for k in np.unique(ks):
        sel = ks == k
        v0, _ = fld.evaluate_on(int(k), P[sel])
        v1, _ = moved.evaluate_on(int(k), GP[sel])
        worst = max(worst, float(np.max(np.abs(v0 - v1))))
    scale = 1.0 + float(np.max(np.abs(fld.data.table)))
    tol = tolerance * scale
    passed = worst <= tol if expect_invariant else worst > tol
    entry = {"matrix": amap.matrix.tolist(), "shift": [amap.w.dx, amap.w.dy],
             "max_dev": worst, "points": n_points}
    name = "invariance" if expect_invariant else "non_invariance"
    return Report(name, worst, [entry], passed, tol)


def _random_chord(tri: Triangle, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Segment between random points on two different sides of ``tri``."""
    V = np.array([[q.x, q.y] for q in tri.vertices()])
    e1, e2 = rng.choice(3, size=2, replace=False)
    u1, u2 = rng.uniform(0.1, 0.9, size=2)
    q0 = (1 - u1) * V[e1] + u1 * V[(e1 + 1) % 3]
    q1 = (1 - u2) * V[e2] + u2 * V[(e2 + 1) % 3]
    return q0, q1


def degree_residual(cfg: ProcedureConfig, tri: Triangle, kind: int, order: int,
                    n_chords: int = 20, seed: int = DEFAULT_SEED) -> float:
    """Largest ``(order+1)``-th forward difference of a basic function along chords.

    Each chord is parametrized over [0, 1] and sampled at ``order + 2`` equally
    spaced points; the residual vanishes (up to rounding) exactly when the
    restriction has degree at most ``order``.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    fn = BasisFunction(cfg, tri, kind)
    rng = np.random.default_rng(seed)
    n = order + 1
    s = np.arange(n + 1) / n
    weights = np.array([(-1) ** (n - k) * math.comb(n, k) for k in range(n + 1)], dtype=float)
    worst = 0.0
    for _ in range(n_chords):
        q0, q1 = _random_chord(tri, rng)
        P = q0[None, :] + s[:, None] * (q1 - q0)[None, :]
        worst = max(worst, abs(float(weights @ fn.value(P))))
    return worst


def check_degree(cfg: ProcedureConfig, tri: Triangle, kind: int, order: int,
                 n_chords: int = 20, seed: int = DEFAULT_SEED,
                 rel_tolerance: float = 1e-7) -> Report:
    res = degree_residual(cfg, tri, kind, order, n_chords, seed)
    tol = rel_tolerance * tri.diameter()
    return Report("degree", res, [{"kind": int(kind), "order": order, "residual": res}],
                  res <= tol, tol)


def check_reflection(cfg: ProcedureConfig, rho: float, b: Point, samples: int = 20,
                     tolerance: float = 1e-10) -> Report:
    """Mirror-symmetry consequences on ``T = Co{0, rho e1, b}`` with distinguished 0.

    On the x-axis edge ``d/dy phi``, ``d/dy psi1`` and ``psi2`` must vanish;
    this holds for reflection-invariant procedures only.
    """
    tri = Triangle(Point(rho, 0.0), b, Point(0.0, 0.0))
    t = np.linspace(0.0, rho, samples)
    P = np.column_stack([t, np.zeros_like(t)])
    phi, psi1, psi2 = (BasisFunction(cfg, tri, i) for i in KINDS)
    devs = {
        "dphi/dy": float(np.max(np.abs(phi.gradient(P)[:, 1]))),
        "dpsi1/dy": float(np.max(np.abs(psi1.gradient(P)[:, 1]))),
        "psi2": float(np.max(np.abs(psi2.value(P)))),
    }
    worst = max(devs.values())
    return Report("reflection", worst, [devs], worst <= tolerance, tolerance)
