"""Shape functions of the degree-5 scheme and of its perturbation family.

A family is fixed by two free polynomials ``phi1`` and ``psi1``::

    Phi(t) = t^3 (10 - 15 t + 6 t^2) + t^3 (1 - t)^3 phi1(t)
    Psi(t) = t^3 (t - 1)(4 - 3 t)    + t^3 (1 - t)^3 psi1(t)

Everything the basic functions need from the family is derived here by exact
rational arithmetic: the modified shape ``Theta = Psi / (t - 1)`` and the two
correction profiles ``A(t) = Phi'(1 - t) / (t^2 (1 - t)^2)`` and
``B(t) = Theta'(1 - t) / (t (1 - t)^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ShapeConfigError
from .poly import Polynomial

__all__ = [
    "ShapeFamily", "phi_star", "psi_star", "theta_star", "make_shape_family",
    "minimal_family", "verify_shape_constraints", "closed_form_expansions",
    "MAX_PERTURBATION_DEGREE",
]

MAX_PERTURBATION_DEGREE = 16

_T = Polynomial.t()
_ONE_MINUS_T = Polynomial([1, -1])


def phi_star() -> Polynomial:
    """``t^3 (10 - 15 t + 6 t^2)``."""
    return Polynomial([0, 0, 0, 10, -15, 6])


def psi_star() -> Polynomial:
    """``t^3 (t - 1)(4 - 3 t) = -4 t^3 + 7 t^4 - 3 t^5``."""
    return Polynomial([0, 0, 0, -4, 7, -3])


def theta_star() -> Polynomial:
    """``t^3 (4 - 3 t)``."""
    return Polynomial([0, 0, 0, 4, -3])


@dataclass(frozen=True)
class ShapeFamily:
    phi1: Polynomial
    psi1: Polynomial
    phi: Polynomial
    psi: Polynomial
    theta: Polynomial
    a_poly: Polynomial
    b_poly: Polynomial

    @property
    def is_minimal(self) -> bool:
        return self.phi1.is_zero() and self.psi1.is_zero()

    def basis_degree(self) -> int:
        """Total degree of the basic functions built from this family with k = R = 0."""
        return max(self.phi.degree, self.theta.degree + 1,
                   5 + self.a_poly.degree, 5 + self.b_poly.degree)

    def to_json(self) -> dict:
        return {"phi1": self.phi1.to_json(), "psi1": self.psi1.to_json()}


def make_shape_family(phi1: Polynomial | None = None,
                      psi1: Polynomial | None = None) -> ShapeFamily:
    """Build the family for the perturbations ``phi1``, ``psi1`` (zero by default)."""
    phi1 = phi1 if phi1 is not None else Polynomial()
    psi1 = psi1 if psi1 is not None else Polynomial()
    for name, q in (("phi1", phi1), ("psi1", psi1)):
        if q.degree > MAX_PERTURBATION_DEGREE:
            raise ShapeConfigError(
                f"{name} has degree {q.degree} > {MAX_PERTURBATION_DEGREE}")

    bump = _T ** 3 * _ONE_MINUS_T ** 3
    phi = phi_star() + bump * phi1
    psi = psi_star() + bump * psi1
    theta = psi.exact_div(Polynomial([-1, 1]))

    # t^2 (1-t)^2 | Phi'(1-t) and t (1-t)^2 | Theta'(1-t) for every admissible family
    a_poly = phi.derive().reflect().exact_div(_T ** 2 * _ONE_MINUS_T ** 2)
    b_poly = theta.derive().reflect().exact_div(_T * _ONE_MINUS_T ** 2)
    return ShapeFamily(phi1, psi1, phi, psi, theta, a_poly, b_poly)


def minimal_family() -> ShapeFamily:
    return make_shape_family()


SHAPE_CONDITIONS = ("Phi(0)=0", "Psi(0)=0", "Phi'(0)=0", "Psi'(0)=0",
                    "Psi(1)=0", "Phi(1)=1", "Psi'(1)=1")


def verify_shape_constraints(f: ShapeFamily) -> dict[str, bool]:
    """Endpoint conditions on ``Phi`` and ``Psi``, checked exactly."""
    dphi, dpsi = f.phi.derive(), f.psi.derive()
    values = {
        "Phi(0)=0": f.phi.eval_exact(0) == 0,
        "Psi(0)=0": f.psi.eval_exact(0) == 0,
        "Phi'(0)=0": dphi.eval_exact(0) == 0,
        "Psi'(0)=0": dpsi.eval_exact(0) == 0,
        "Psi(1)=0": f.psi.eval_exact(1) == 0,
        "Phi(1)=1": f.phi.eval_exact(1) == 1,
        "Psi'(1)=1": dpsi.eval_exact(1) == 1,
    }
    return values


def closed_form_expansions(phi1: Polynomial, psi1: Polynomial) -> dict[str, Polynomial]:
    """Closed-form expansions of ``A``, ``Theta`` and ``B`` in terms of the perturbations.

    Used only to cross-check the division-built polynomials of a family.
    """
    p1r, s1r = phi1.reflect(), psi1.reflect()
    t, omt = _T, _ONE_MINUS_T
    a = 30 - Polynomial([3, -6]) * p1r + t * omt * phi1.derive().reflect()
    theta = t ** 3 * (Polynomial([4, -3]) - omt ** 2 * psi1)
    b = 12 + Polynomial([2, -5]) * s1r - t * omt * psi1.derive().reflect()
    return {"a_poly": a, "theta": theta, "b_poly": b}


def cross_check_expansions(f: ShapeFamily) -> dict[str, bool]:
    exp = closed_form_expansions(f.phi1, f.psi1)
    return {name: getattr(f, name) == poly for name, poly in exp.items()}

