"""Basic polynomials of the C1 family on a single triangle.

For a triangle ``Co{a, b, p}`` with distinguished vertex ``p`` and kind
``i`` (0: value, 1/2: x/y derivative) the basic function is::

    f = Phi_i(lam_p) * x_p^i + lam_p^2 * lam_a * lam_b * C(lam_b, lam_a)

with ``Phi_0 = Phi``, ``Phi_1 = Phi_2 = Theta``, ``x_p^0 = 1`` and
``x_p^j = x^j - x^j(p)``. The correction ``C`` is ``P`` for kind 0 and ``Q^j``
otherwise; both are bivariate polynomials in ``(s, t) = (lam_b, lam_a)``
whose coefficients depend on the triangle through the frame coordinates of
``a`` and ``b`` and on the free ``k`` and ``R`` options of the configuration.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Mapping

import numpy as np
from numpy.polynomial import polynomial as npoly

from .geometry import Point, Triangle, Vector, affine_coordinates, as_points, frame_coords
from .poly import Polynomial
from .shape import ShapeFamily, make_shape_family, minimal_family

__all__ = [
    "BasisKind", "KProvider", "RProvider", "ProcedureConfig", "Bivariate",
    "EvalResult", "BasisFunction", "TriangleBasis", "build_basis", "correction_P",
    "correction_Q", "basis_value", "basis_gradient", "basis_eval",
    "edge_gradient_reference",
]


class BasisKind(IntEnum):
    VALUE = 0
    DX = 1
    DY = 2


KINDS = (BasisKind.VALUE, BasisKind.DX, BasisKind.DY)


def _float_coeffs(q) -> np.ndarray:
    if q is None:
        return np.zeros(0)
    if isinstance(q, Polynomial):
        return np.array(q.float_coeffs(), dtype=float)
    return np.atleast_1d(np.asarray(q, dtype=float))


def _key(pt: Point) -> tuple[float, float]:
    return (pt.x, pt.y)


class KProvider:
    """Assigns a univariate polynomial ``k^{i,p}_c`` to a kind and an ordered pair
    of distinct points.

    ``fn(i, p, c)`` may return a :class:`Polynomial`, an ascending float
    coefficient sequence, or ``None`` for zero. It must be deterministic.
    """

    def __init__(self, fn: Callable | None = None):
        self._fn = fn

    @classmethod
    def zero(cls) -> KProvider:
        return cls(None)

    @classmethod
    def constant(cls, q, kinds=(0, 1, 2)) -> KProvider:
        """The same polynomial for every pair of points and every kind in ``kinds``."""
        kinds = frozenset(int(i) for i in kinds)
        return cls(lambda i, p, c: q if int(i) in kinds else None)

    @classmethod
    def from_table(cls, table: Mapping) -> KProvider:
        """Lookup table keyed by ``(i, (px, py), (cx, cy))``; missing keys give zero."""
        table = {(int(i), tuple(map(float, p)), tuple(map(float, c))): q
                 for (i, p, c), q in table.items()}
        return cls(lambda i, p, c: table.get((int(i), _key(p), _key(c))))

    @property
    def is_zero(self) -> bool:
        return self._fn is None

    def __call__(self, i: int, p: Point, c: Point) -> np.ndarray:
        if self._fn is None:
            return np.zeros(0)
        return _float_coeffs(self._fn(int(i), p, c))


class RProvider:
    """Assigns a bivariate polynomial ``R^{i,p}_{q,r}(s, t)`` to a kind and an
    ordered triple of points.

    ``fn(i, p, q, r)`` returns a dense coefficient matrix ``M[m, n]`` of
    ``s^m t^n`` (or ``None``). The symmetry ``R_{q,r}(s, t) = R_{r,q}(t, s)``
    is enforced by averaging ``fn(i, p, q, r)`` with the transpose of
    ``fn(i, p, r, q)``.
    """

    def __init__(self, fn: Callable | None = None):
        self._fn = fn

    @classmethod
    def zero(cls) -> RProvider:
        return cls(None)

    @property
    def is_zero(self) -> bool:
        return self._fn is None

    def _raw(self, i, p, q, r) -> np.ndarray:
        out = self._fn(int(i), p, q, r)
        if out is None:
            return np.zeros((0, 0))
        return np.atleast_2d(np.asarray(out, dtype=float))

    def __call__(self, i: int, p: Point, q: Point, r: Point) -> np.ndarray:
        if self._fn is None:
            return np.zeros((0, 0))
        m1 = self._raw(i, p, q, r)
        m2 = self._raw(i, p, r, q).T
        shape = (max(m1.shape[0], m2.shape[0]), max(m1.shape[1], m2.shape[1]))
        out = np.zeros(shape)
        out[: m1.shape[0], : m1.shape[1]] += m1
        out[: m2.shape[0], : m2.shape[1]] += m2
        return 0.5 * out


@dataclass(frozen=True, eq=False)
class ProcedureConfig:
    """A member of the classified family: shape perturbations plus the k and R options.

    ``printed_pairing`` is a test-only switch that swaps the frame-coordinate
    factors of the two correction terms (the pairing printed in the closed
    form of the degree-5 scheme). It breaks C1 continuity and must not be
    used for real interpolation.
    """

    shapes: ShapeFamily = field(default_factory=minimal_family)
    k: KProvider = field(default_factory=KProvider.zero)
    r: RProvider = field(default_factory=RProvider.zero)
    printed_pairing: bool = False

    @classmethod
    def minimal(cls) -> ProcedureConfig:
        return cls()

    @classmethod
    def from_perturbations(cls, phi1=None, psi1=None, **kw) -> ProcedureConfig:
        return cls(shapes=make_shape_family(phi1, psi1), **kw)

    @classmethod
    def from_json(cls, data: Mapping | None) -> ProcedureConfig:
        """Read ``{"phi1": [[num, den], ...], "psi1": [...]}``; both keys optional."""
        if not data:
            return cls()
        phi1 = Polynomial.from_json(data["phi1"]) if "phi1" in data else None
        psi1 = Polynomial.from_json(data["psi1"]) if "psi1" in data else None
        return cls.from_perturbations(phi1, psi1)

    @property
    def is_minimal(self) -> bool:
        return (self.shapes.is_minimal and self.k.is_zero and self.r.is_zero
                and not self.printed_pairing)

    def degree(self) -> int:
        """Degree of the basic polynomials when the k and R options are zero."""
        return self.shapes.basis_degree()


class Bivariate:
    """Dense bivariate polynomial ``sum M[m, n] s^m t^n`` with float coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if c.size == 0:
            c = np.zeros((1, 1))
        self.coeffs = c

    def __call__(self, s, t):
        return npoly.polyval2d(s, t, self.coeffs)

    def ds(self) -> Bivariate:
        if self.coeffs.shape[0] == 1:
            return Bivariate(np.zeros((1, 1)))
        return Bivariate(npoly.polyder(self.coeffs, axis=0))

    def dt(self) -> Bivariate:
        if self.coeffs.shape[1] == 1:
            return Bivariate(np.zeros((1, 1)))
        return Bivariate(npoly.polyder(self.coeffs, axis=1))

    def swapped(self) -> Bivariate:
        """``(s, t) -> self(t, s)``."""
        return Bivariate(self.coeffs.T)

    def __repr__(self) -> str:
        return f"Bivariate({self.coeffs.tolist()})"


def _assemble(s_part: np.ndarray, t_part: np.ndarray, rmat: np.ndarray) -> Bivariate:
    """``s * s_part(s) + t * t_part(t) + s t R(s, t)`` as a coefficient matrix."""
    rows = max(len(s_part) + 1, rmat.shape[0] + 1, 1)
    cols = max(len(t_part) + 1, rmat.shape[1] + 1, 1)
    M = np.zeros((rows, cols))
    M[1: 1 + len(s_part), 0] += s_part
    M[0, 1: 1 + len(t_part)] += t_part
    M[1: 1 + rmat.shape[0], 1: 1 + rmat.shape[1]] += rmat
    return Bivariate(M)


def _padd(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.zeros(max(len(u), len(v)))
    out[: len(u)] += u
    out[: len(v)] += v
    return out


def _correction(cfg: ProcedureConfig, tri: Triangle, kind: int) -> Bivariate:
    tri.check()
    a, b, p = tri.a, tri.b, tri.p
    xi_a, xibar_a = frame_coords(p, b, a)
    xi_b, xibar_b = frame_coords(p, a, b)
    if cfg.printed_pairing:
        xi_a, xi_b = xi_b, xi_a
    if kind == 0:
        profile = cfg.shapes.a_poly.float_coeffs()
        wa, wb = xi_a, xi_b
    else:
        profile = cfg.shapes.b_poly.float_coeffs()
        j = kind - 1
        wa = xi_a * ((b.x, b.y)[j] - (p.x, p.y)[j])
        wb = xi_b * ((a.x, a.y)[j] - (p.x, p.y)[j])
    s_part = _padd(wa * profile, xibar_a * cfg.k(kind, p, b))
    t_part = _padd(wb * profile, xibar_b * cfg.k(kind, p, a))
    return _assemble(s_part, t_part, cfg.r(kind, p, a, b))


def correction_P(cfg: ProcedureConfig, tri: Triangle) -> Bivariate:
    """Value-type correction ``P^p_{a,b}(s, t)``."""
    return _correction(cfg, tri, 0)


def correction_Q(cfg: ProcedureConfig, tri: Triangle, j: int) -> Bivariate:
    """Derivative-type correction ``Q^{j,p}_{a,b}(s, t)``, ``j`` in {1, 2}."""
    if j not in (1, 2):
        raise ValueError(f"j must be 1 or 2, got {j}")
    return _correction(cfg, tri, j)


@dataclass(frozen=True)
class EvalResult:
    value: float
    grad: Vector


class BasisFunction:
    """One basic polynomial, precomputed for fast vectorized evaluation."""

    def __init__(self, cfg: ProcedureConfig, tri: Triangle, kind: int):
        self.kind = int(kind)
        self.tri = tri
        G, c = affine_coordinates(tri)
        self._G, self._c = G, c
        outer = cfg.shapes.phi if self.kind == 0 else cfg.shapes.theta
        self._outer = outer.float_coeffs()
        self._douter = outer.derive().float_coeffs()
        self._p = np.array([tri.p.x, tri.p.y])
        self.correction = _correction(cfg, tri, self.kind)
        self._cs = self.correction.ds()
        self._ct = self.correction.dt()

    def _lam(self, P: np.ndarray):
        lam = P @ self._G.T + self._c
        return lam[:, 0], lam[:, 1], lam[:, 2]

    def _xp(self, P: np.ndarray) -> np.ndarray:
        if self.kind == 0:
            return np.ones(len(P))
        j = self.kind - 1
        return P[:, j] - self._p[j]

    def value(self, pts) -> np.ndarray:
        P = as_points(pts)
        la, lb, lp = self._lam(P)
        outer = npoly.polyval(lp, self._outer) if len(self._outer) else 0.0 * lp
        return outer * self._xp(P) + lp ** 2 * la * lb * self.correction(lb, la)

    def gradient(self, pts) -> np.ndarray:
        P = as_points(pts)
        la, lb, lp = self._lam(P)
        ga, gb, gp = self._G
        xp = self._xp(P)
        outer = npoly.polyval(lp, self._outer) if len(self._outer) else 0.0 * lp
        douter = npoly.polyval(lp, self._douter) if len(self._douter) else 0.0 * lp
        grad = np.outer(douter * xp, gp)
        if self.kind:
            grad[:, self.kind - 1] += outer
        w = lp ** 2 * la * lb
        dw = (np.outer(2 * lp * la * lb, gp) + np.outer(lp ** 2 * lb, ga)
              + np.outer(lp ** 2 * la, gb))
        cv = self.correction(lb, la)
        dc = np.outer(self._cs(lb, la), gb) + np.outer(self._ct(lb, la), ga)
        return grad + dw * cv[:, None] + w[:, None] * dc

    def eval(self, pts) -> tuple[np.ndarray, np.ndarray]:
        return self.value(pts), self.gradient(pts)


def build_basis(cfg: ProcedureConfig, tri: Triangle, kind: int) -> BasisFunction:
    return BasisFunction(cfg, tri, kind)


def basis_value(cfg: ProcedureConfig, tri: Triangle, kind: int, x: Point) -> float:
    return float(BasisFunction(cfg, tri, kind).value(x)[0])


def basis_gradient(cfg: ProcedureConfig, tri: Triangle, kind: int, x: Point) -> Vector:
    return Vector(*BasisFunction(cfg, tri, kind).gradient(x)[0])


def basis_eval(cfg: ProcedureConfig, tri: Triangle, kind: int, x: Point) -> EvalResult:
    f = BasisFunction(cfg, tri, kind)
    return EvalResult(float(f.value(x)[0]), Vector(*f.gradient(x)[0]))


class TriangleBasis:
    """The nine basic functions of one mesh triangle (three distinguished vertices
    times three kinds), combined with vertex data."""

    def __init__(self, cfg: ProcedureConfig, tri: Triangle):
        self.tri = tri
        self.functions = [[BasisFunction(cfg, tri.with_distinguished(k), i) for i in KINDS]
                          for k in range(3)]

    def evaluate(self, pts, data: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Spline value and gradient from ``data[k] = (f, fx, fy)`` at stored vertex ``k``."""
        P = as_points(pts)
        val = np.zeros(len(P))
        grad = np.zeros((len(P), 2))
        for k in range(3):
            for i in KINDS:
                w = data[k][i]
                if w == 0.0:
                    continue
                fn = self.functions[k][i]
                val += w * fn.value(P)
                grad += w * fn.gradient(P)
        return val, grad


def _g(u: Point, v: Point, w: Point) -> np.ndarray:
    """Gradient of the barycentric coordinate of ``w`` in ``Co{u, v, w}``:
    ``(u - v)R / <(u - v)R | w - u>``."""
    d = (u.x - v.x, u.y - v.y)
    n = np.array([-d[1], d[0]])
    return n / (n[0] * (w.x - u.x) + n[1] * (w.y - u.y))


def edge_gradient_reference(cfg: ProcedureConfig, tri: Triangle, kind: int, t: float) -> Vector:
    """Closed-form gradient of a basic function at ``y_t = (1 - t) a + t p``.

    Independent of :class:`BasisFunction`'s product-rule evaluation; used as a
    test oracle.
    """
    a, b, p = tri.a, tri.b, tri.p
    kind = int(kind)
    shape = cfg.shapes.phi if kind == 0 else cfg.shapes.theta
    dshape = shape.derive()
    if kind == 0:
        coord = 1.0
        e = np.zeros(2)
    else:
        j = kind - 1
        coord = (1.0 - t) * ((a.x, a.y)[j] - (p.x, p.y)[j])
        e = np.eye(2)[j]
    corr = _correction(cfg, tri, kind)
    g = (coord * dshape(t) * _g(a, b, p) + shape(t) * e
         + t ** 2 * (1.0 - t) * float(corr(0.0, 1.0 - t)) * _g(a, p, b))
    return Vector(*g)
