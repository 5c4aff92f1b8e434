"""Primitive integer polynomials, univariate or binary homogeneous."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import sympy

from . import poly as P


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial stored in normal form: content 1, positive leading term.

    ``coeffs[i]`` multiplies ``z**i`` (univariate) or ``x**i y**(n-i)`` where
    ``n = len(coeffs) - 1`` (homogeneous). A homogeneous form keeps its formal
    degree even when the ``x**n`` coefficient vanishes (a root at infinity).
    """

    coeffs: tuple[int, ...]
    homogeneous: bool = False

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        if not self.homogeneous:
            c = tuple(P.trim(c)) or (0,)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, homogeneous: bool = False) -> "IntPoly":
        """Normalize rational coefficients to the primitive positive-leading form."""
        coeffs = list(coeffs)
        if not homogeneous:
            coeffs = P.trim(coeffs) or [0]
        return cls(tuple(P.primitive(coeffs)), homogeneous)

    @classmethod
    def linear_form(cls, x: int, y: int) -> "IntPoly":
        """Form ``y X - x Y`` vanishing at the projective point ``[x:y]``."""
        return cls.from_coeffs([-x, y], homogeneous=True)

    @property
    def degree(self) -> int:
        if self.homogeneous:
            return len(self.coeffs) - 1
        return len(self.coeffs) - 1 if any(self.coeffs) else -1

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def lead(self) -> int:
        for c in reversed(self.coeffs):
            if c:
                return c
        return 0

    def __call__(self, z):
        return P.evaluate(self.coeffs, z)

    def dehomogenize(self) -> "IntPoly":
        """Univariate polynomial of the finite roots (z = x/y)."""
        return IntPoly(self.coeffs, False)

    def homogenize(self, n: int | None = None) -> "IntPoly":
        n = self.degree if n is None else n
        return IntPoly(tuple(P.homogenize(self.coeffs, n)), True)

    @property
    def infinity_multiplicity(self) -> int:
        """Number of roots at [1:0] of a homogeneous form."""
        if not self.homogeneous:
            return 0
        k = 0
        for c in reversed(self.coeffs):
            if c != 0:
                break
            k += 1
        return k

    @cached_property
    def _sympy_factors(self):
        z = sympy.Symbol("z")
        uni = self.dehomogenize()
        if uni.degree <= 0:
            return []
        expr = sympy.Poly(list(reversed(uni.coeffs)), z, domain="ZZ")
        _, facs = expr.factor_list()
        out = []
        for f, m in facs:
            coeffs = [int(c) for c in reversed(f.all_coeffs())]
            out.append((IntPoly.from_coeffs(coeffs), int(m)))
        out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
        return out

    def factor(self) -> list[tuple["IntPoly", int]]:
        """Irreducible factors over Q (of the finite part) with multiplicities."""
        return list(self._sympy_factors)

    def is_irreducible(self) -> bool:
        f = self._sympy_factors
        return len(f) == 1 and f[0][1] == 1 and self.infinity_multiplicity == 0

    def squarefree_part(self) -> "IntPoly":
        out = [1]
        for f, _ in self.factor():
            out = P.mul(out, f.coeffs)
        return IntPoly.from_coeffs(out)

    def shift(self, t) -> "IntPoly":
        """``P(z + t)`` normalized to a primitive integer polynomial."""
        return IntPoly.from_coeffs(P.shift([Fraction(c) for c in self.coeffs], Fraction(t)))

    def __str__(self) -> str:
        var = "x" if self.homogeneous else "z"
        n = len(self.coeffs) - 1
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if self.homogeneous:
                mono = "*".join(s for s in (_pw("x", i), _pw("y", n - i)) if s)
            else:
                mono = _pw(var, i)
            terms.append(f"{c}" if not mono else (f"{c}*{mono}" if c != 1 else mono))
        return " + ".join(terms) if terms else "0"


def _pw(v: str, k: int) -> str:
    if k == 0:
        return ""
    return v if k == 1 else f"{v}^{k}"
