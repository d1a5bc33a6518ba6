"""Univariate polynomials with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import DivisibilityViolation, IntegerOverflow, ParseError

__all__ = ["Polynomial", "LIMIT_128"]

# signed 128-bit range for numerators and denominators
LIMIT_128 = 1 << 127


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, (tuple, list)) and len(c) == 2:
        return Fraction(int(c[0]), int(c[1]))
    if isinstance(c, (np.integer, np.floating)):
        return Fraction(c.item())
    raise TypeError(f"cannot use {c!r} as a rational coefficient")


class Polynomial:
    """Immutable polynomial ``sum(c[k] * t**k)`` over the rationals.

    Coefficients are stored ascending with trailing zeros trimmed; the zero
    polynomial has an empty coefficient tuple. Every result is checked to stay
    inside the signed 128-bit range.
    """

    __slots__ = ("coeffs", "_floats")

    def __init__(self, coeffs: Iterable = ()):
        cs = [_to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        for c in cs:
            if abs(c.numerator) >= LIMIT_128 or c.denominator >= LIMIT_128:
                raise IntegerOverflow(f"coefficient {c} exceeds 128-bit range")
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._floats = None

    # construction helpers
    @classmethod
    def monomial(cls, k: int, c=1) -> Polynomial:
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls([c])

    @classmethod
    def t(cls) -> Polynomial:
        return cls([0, 1])

    # container protocol
    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    # arithmetic
    @staticmethod
    def _coerce(other) -> Polynomial:
        return other if isinstance(other, Polynomial) else Polynomial([other])

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def scale(self, k) -> Polynomial:
        k = _to_fraction(k)
        return Polynomial(c * k for c in self.coeffs)

    def derive(self) -> Polynomial:
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def compose_affine(self, alpha, beta) -> Polynomial:
        """Substitute ``t -> alpha*t + beta``; ``compose_affine(-1, 1)`` gives ``p(1 - t)``."""
        lin = Polynomial([beta, alpha])
        out = Polynomial()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def reflect(self) -> Polynomial:
        """``p(1 - t)``."""
        return self.compose_affine(-1, 1)

    def divmod(self, divisor: Polynomial) -> tuple[Polynomial, Polynomial]:
        """Euclidean division over the rationals."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dlead = divisor.coeffs[-1]
        dd = divisor.degree
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            q = rem[k] / dlead
            quot[k - dd] = q
            if q:
                for j, c in enumerate(divisor.coeffs):
                    rem[k - dd + j] -= q * c
        return Polynomial(quot), Polynomial(rem[:dd] if dd > 0 else [])

    def exact_div(self, divisor: Polynomial) -> Polynomial:
        """Quotient of a division known to be exact."""
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise DivisibilityViolation(f"{self} is not divisible by {divisor} (remainder {r})")
        return q

    # evaluation
    def eval_exact(self, t) -> Fraction:
        t = _to_fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def float_coeffs(self) -> np.ndarray:
        if self._floats is None:
            arr = np.array([float(c) for c in self.coeffs], dtype=float)
            arr.setflags(write=False)
            self._floats = arr
        return self._floats

    def eval_f64(self, t):
        """Horner evaluation in double precision; ``t`` may be an array."""
        acc = np.zeros_like(np.asarray(t, dtype=float))
        for c in reversed(self.float_coeffs()):
            acc = acc * t + c
        if np.ndim(acc) == 0:
            return float(acc)
        return acc

    __call__ = eval_f64

    # serialization
    def to_json(self) -> list[list[int]]:
        return [[c.numerator, c.denominator] for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> Polynomial:
        """Parse ``[[num, den], ...]``; plain numbers are accepted as well."""
        if not isinstance(data, (list, tuple)):
            raise ParseError(f"polynomial must be a list of [num, den] pairs, got {data!r}")
        cs = []
        for item in data:
            if isinstance(item, (list, tuple)):
                if len(item) != 2:
                    raise ParseError(f"bad rational {item!r}")
                num, den = item
                try:
                    fn, fd = _to_fraction(num), _to_fraction(den)
                except (TypeError, ValueError) as exc:
                    raise ParseError(f"bad rational {item!r}") from exc
                if fd == 0:
                    raise ParseError(f"zero denominator in {item!r}")
                cs.append(fn / fd)
            elif isinstance(item, (int, float)) and not isinstance(item, bool):
                cs.append(_to_fraction(item))
            else:
                raise ParseError(f"bad coefficient {item!r}")
        return cls(cs)
