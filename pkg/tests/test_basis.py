import numpy as np
import pytest
import sympy as sp
from conftest import random_family_config, random_triangle
from hypothesis import given, settings
from hypothesis import strategies as st
from oracle import X, Y, at, basis, grad

from trispline.basis import (KINDS, BasisFunction, KProvider, ProcedureConfig, RProvider,
                             TriangleBasis, basis_eval, basis_gradient, basis_value,
                             correction_P, correction_Q, edge_gradient_reference)
from trispline.geometry import Point, Triangle
from trispline.poly import Polynomial

MINIMAL = ProcedureConfig.minimal()
UNIT = Triangle(Point(0, 0), Point(1, 0), Point(0, 1))


def test_unit_triangle_corrections():
    P = correction_P(MINIMAL, UNIT)
    s, t = np.array([0.0, 0.3, 1.0]), np.array([0.0, 0.7, 0.2])
    assert P(s, t) == pytest.approx(15 * s)
    # xi^a_{p,b} = 1/2, xi^b_{p,a} = 0, x_p^{[2]}(b) = -1
    Q2 = correction_Q(MINIMAL, UNIT, 2)
    assert Q2(s, t) == pytest.approx(12 * s * 0.5 * -1)


def test_correction_swap_symmetry(rng):
    for _ in range(10):
        tri = random_triangle(rng)
        swapped = Triangle(tri.b, tri.a, tri.p)
        s, t = rng.uniform(0, 1, (2, 20))
        assert correction_P(MINIMAL, swapped)(t, s) == pytest.approx(correction_P(MINIMAL, tri)(s, t))


def test_corrections_vanish_at_origin(rng):
    cfg = random_family_config(rng, with_options=True)
    tri = random_triangle(rng)
    assert correction_P(cfg, tri)(0.0, 0.0) == pytest.approx(0.0, abs=1e-14)
    for j in (1, 2):
        assert correction_Q(cfg, tri, j)(0.0, 0.0) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("x, want", [((1 / 3, 1 / 3), 22 / 81), ((0.5, 0.25), 83 / 512)])
def test_frozen_spot_values(x, want):
    assert basis_value(MINIMAL, UNIT, 0, Point(*x)) == pytest.approx(want, abs=1e-14)


def test_psi2_on_edge():
    assert basis_value(MINIMAL, UNIT, 2, Point(0, 0.5)) == pytest.approx(-5 / 32, abs=1e-14)


TRIANGLES = [((0, 0), (1, 0), (0, 1)), ((0.1, -0.2), (1.3, 0.4), (0.35, 0.9)),
             ((-1, 0.5), (0.2, -0.7), (0.4, 0.6))]


@pytest.mark.parametrize("verts", TRIANGLES)
@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("perturb", [(0, 0), (1, 0), (0, 1), (2, -1)])
def test_against_symbolic_oracle(verts, kind, perturb):
    a, b, p = verts
    T = sp.Symbol("t")
    phi1, psi1 = perturb[0] * T, perturb[1] * (1 - T)
    ref = basis(a, b, p, int(kind), phi1, psi1)
    gx, gy = grad(ref)
    cfg = ProcedureConfig.from_perturbations(Polynomial([0, perturb[0]]),
                                             Polynomial([perturb[1], -perturb[1]]))
    tri = Triangle(*(Point(*q) for q in verts))
    fn = BasisFunction(cfg, tri, kind)
    pts = [(sp.Rational(1, 3), sp.Rational(1, 5)), (sp.Rational(1, 7), sp.Rational(3, 5)),
           (sp.Rational(1, 2), sp.Rational(1, 2))]
    for u, v in pts:
        x = (1 - u - v) * sp.nsimplify(a[0]) + u * sp.nsimplify(b[0]) + v * sp.nsimplify(p[0])
        y = (1 - u - v) * sp.nsimplify(a[1]) + u * sp.nsimplify(b[1]) + v * sp.nsimplify(p[1])
        val, g = fn.eval([[float(x), float(y)]])
        sub = {X: x, Y: y}
        assert val[0] == pytest.approx(float(ref.subs(sub)), abs=1e-12)
        assert g[0] == pytest.approx([float(gx.subs(sub)), float(gy.subs(sub))], abs=1e-11)


def test_oracle_partition_of_unity_is_exact():
    a, b, p = (0, 0), (sp.Rational(7, 5), sp.Rational(1, 3)), (sp.Rational(2, 7), sp.Rational(9, 8))
    total = basis(b, p, a) + basis(a, p, b) + basis(a, b, p)
    assert sp.simplify(total - 1) == 0


def test_oracle_linear_field_value():
    a, b, p = (0, 0), (1, 0), (0, 1)
    total = 0
    for A, B, P in ((b, p, a), (a, p, b), (a, b, p)):
        total += P[0] * basis(A, B, P) + basis(A, B, P, 1)
    assert at(total, "1/3", "1/3") == sp.Rational(26, 81)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_cardinal_property(seed):
    rng = np.random.default_rng(seed)
    tri = random_triangle(rng)
    cfg = random_family_config(rng, with_options=bool(seed % 2))
    V = np.array([[q.x, q.y] for q in tri.vertices()])
    for i in KINDS:
        val, g = BasisFunction(cfg, tri, i).eval(V)
        assert val == pytest.approx([0, 0, 1.0 if i == 0 else 0], abs=1e-10)
        want = np.zeros((3, 2))
        if i:
            want[2, i - 1] = 1
        assert np.abs(g - want).max() <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_partition_of_unity(seed):
    rng = np.random.default_rng(seed)
    tri = random_triangle(rng)
    V = np.array([[q.x, q.y] for q in tri.vertices()])
    P = rng.dirichlet(np.ones(3), 20) @ V
    total = sum(BasisFunction(MINIMAL, tri.with_distinguished(k), 0).value(P) for k in range(3))
    assert np.abs(total - 1).max() <= 1e-12


def test_scalar_and_vector_evaluation_agree(rng):
    tri = random_triangle(rng)
    x = Point(*(np.mean([[q.x, q.y] for q in tri.vertices()], axis=0)))
    for i in KINDS:
        res = basis_eval(MINIMAL, tri, i, x)
        assert res.value == basis_value(MINIMAL, tri, i, x)
        assert res.grad == basis_gradient(MINIMAL, tri, i, x)


def test_edge_gradient_reference_midpoint():
    for i in KINDS:
        ref = edge_gradient_reference(MINIMAL, UNIT, i, 0.5)
        got = basis_gradient(MINIMAL, UNIT, i, Point(0, 0.5))
        assert (ref.dx, ref.dy) == pytest.approx((got.dx, got.dy), abs=1e-12)


def test_printed_pairing_flag_changes_only_corrections():
    printed = ProcedureConfig(printed_pairing=True)
    assert not printed.is_minimal
    x = Point(0, 0.5)
    assert basis_value(printed, UNIT, 0, x) == pytest.approx(basis_value(MINIMAL, UNIT, 0, x))


def test_r_provider_is_symmetrized():
    r = RProvider(lambda i, p, q, s: [[0, 1], [0, 0]])
    m = r(0, Point(0, 0), Point(1, 0), Point(0, 1))
    assert np.array_equal(m, m.T)


def test_k_provider_table_and_constant():
    q = Polynomial([1, 2])
    k = KProvider.from_table({(0, (0.0, 1.0), (1.0, 0.0)): q})
    assert k(0, Point(0, 1), Point(1, 0)).tolist() == [1.0, 2.0]
    assert k(1, Point(0, 1), Point(1, 0)).size == 0
    assert KProvider.constant([3.0], kinds=(1,))(1, Point(0, 0), Point(1, 1)).tolist() == [3.0]
    assert KProvider.zero().is_zero


def test_nonzero_k_keeps_vertex_interpolation(rng):
    cfg = ProcedureConfig(k=KProvider.constant(Polynomial([1, -2, 3])))
    tri = random_triangle(rng)
    V = np.array([[q.x, q.y] for q in tri.vertices()])
    val, g = BasisFunction(cfg, tri, 0).eval(V)
    assert val == pytest.approx([0, 0, 1], abs=1e-12)
    assert np.abs(g).max() <= 1e-10


def test_triangle_basis_linearity(rng):
    tri = random_triangle(rng)
    tb = TriangleBasis(MINIMAL, tri)
    V = np.array([[q.x, q.y] for q in tri.vertices()])
    P = rng.dirichlet(np.ones(3), 5) @ V
    d1, d2 = rng.normal(size=(2, 3, 3))
    v1, g1 = tb.evaluate(P, d1)
    v2, g2 = tb.evaluate(P, d2)
    v, g = tb.evaluate(P, 2 * d1 - d2)
    assert v == pytest.approx(2 * v1 - v2)
    assert g == pytest.approx(2 * g1 - g2)


def test_config_from_json():
    cfg = ProcedureConfig.from_json({"phi1": [[1, 1]]})
    assert cfg.degree() == 6
    assert ProcedureConfig.from_json(None).is_minimal
