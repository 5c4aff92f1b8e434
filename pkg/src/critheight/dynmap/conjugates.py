"""Galois-stable sets of points: critical divisors, branch points and forward images."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exactnum import poly as P
from ..exactnum.intpoly import IntPoly
from .ratmap import Point, RatMap, apply, normalize_point


@dataclass(frozen=True)
class ConjugateSet:
    """All roots of an irreducible polynomial over Q, or the point at infinity.

    ``multiplicity`` weights every point of the set.
    """

    minpoly: IntPoly | None
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")
        if self.minpoly is not None:
            if self.minpoly.homogeneous or self.minpoly.degree < 1:
                raise ValueError("minimal polynomial must be a univariate polynomial of degree >= 1")
            if not self.minpoly.is_irreducible():
                raise ValueError(f"{self.minpoly} is not irreducible over Q")

    @classmethod
    def infinity(cls, multiplicity: int = 1) -> "ConjugateSet":
        return cls(None, multiplicity)

    @classmethod
    def point(cls, pt: Point, multiplicity: int = 1) -> "ConjugateSet":
        x, y = normalize_point(*pt)
        if y == 0:
            return cls.infinity(multiplicity)
        return cls(IntPoly.from_coeffs([-x, y]), multiplicity)

    @property
    def is_infinity(self) -> bool:
        return self.minpoly is None

    @property
    def size(self) -> int:
        """Number of distinct points in the set."""
        return 1 if self.minpoly is None else self.minpoly.degree

    @property
    def degree(self) -> int:
        """Number of points counted with multiplicity."""
        return self.size * self.multiplicity

    def rational_point(self) -> Point | None:
        if self.minpoly is None:
            return (1, 0)
        if self.minpoly.degree == 1:
            c0, c1 = self.minpoly.coeffs
            return normalize_point(-c0, c1)
        return None

    def form(self) -> list[int]:
        """Binary form of degree ``size`` vanishing on the set."""
        if self.minpoly is None:
            return [1, 0]
        return list(self.minpoly.coeffs)

    def key(self) -> tuple:
        return (self.minpoly.coeffs if self.minpoly is not None else (), self.multiplicity)

    def __str__(self) -> str:
        base = "inf" if self.minpoly is None else f"roots({self.minpoly})"
        return base if self.multiplicity == 1 else f"{self.multiplicity}*{base}"


def sets_from_form(form: Sequence[int], multiplicity: int = 1) -> list[ConjugateSet]:
    """Split the zero set of a nonzero binary form into conjugate sets."""
    form = list(form)
    if not any(form):
        raise ValueError("zero form")
    h = IntPoly.from_coeffs(form, homogeneous=True)
    out = []
    k = h.infinity_multiplicity
    if k:
        out.append(ConjugateSet.infinity(k * multiplicity))
    finite = h.dehomogenize()
    if finite.degree >= 1:
        for fac, m in finite.factor():
            out.append(ConjugateSet(fac, m * multiplicity))
    return sorted(out, key=lambda s: s.key())


def merge(sets: Sequence[ConjugateSet]) -> list[ConjugateSet]:
    """Combine entries with equal minimal polynomials."""
    acc: dict[tuple, int] = {}
    polys: dict[tuple, IntPoly | None] = {}
    for s in sets:
        k = s.minpoly.coeffs if s.minpoly is not None else ()
        acc[k] = acc.get(k, 0) + s.multiplicity
        polys[k] = s.minpoly
    return sorted((ConjugateSet(polys[k], m) for k, m in acc.items()), key=lambda s: s.key())


def wronskian(f: RatMap) -> list[int]:
    """F1_x F2_y - F1_y F2_x as a form of degree 2d - 2."""
    d = f.degree
    F1, F2 = list(f.num), list(f.den)
    # for a form sum c_i x^i y^(d-i): d/dx has entries (i+1) c_{i+1}, d/dy has (d-i) c_i
    def dx(F):
        return [(i + 1) * F[i + 1] for i in range(d)]

    def dy(F):
        return [(d - i) * F[i] for i in range(d)]

    w = P.sub(P.form_mul(dx(F1), dy(F2)), P.form_mul(dy(F1), dx(F2)))
    return w + [0] * (2 * d - 1 - len(w))


def critical_divisor(f: RatMap) -> list[ConjugateSet]:
    """Critical points with ramification multiplicity e_P - 1; total weight 2d - 2."""
    return sets_from_form(wronskian(f))


def image_sets(f: RatMap, S: ConjugateSet) -> list[ConjugateSet]:
    """Forward image of a conjugate set, multiplicities included."""
    if S.is_infinity:
        return [ConjugateSet.point(apply(f, (1, 0)), S.multiplicity)]
    g = S.form()
    img = P.image_form(g, list(f.num), list(f.den))
    out = sets_from_form(img, S.multiplicity)
    if sum(s.degree for s in out) != S.degree:
        raise ArithmeticError("forward image lost points")
    return out


def pushforward_minpoly(f: RatMap, S: ConjugateSet) -> list[ConjugateSet]:
    return image_sets(f, S)


def pushforward_divisor(f: RatMap, D: Sequence[ConjugateSet]) -> list[ConjugateSet]:
    out: list[ConjugateSet] = []
    for S in D:
        out.extend(image_sets(f, S))
    return merge(out)


def branch_divisor(f: RatMap) -> list[ConjugateSet]:
    return pushforward_divisor(f, critical_divisor(f))


def branch_points_quadratic(lam0, lam_inf) -> list[ConjugateSet]:
    """Branch points of the Milnor family member (lam0 z + z^2)/(lam_inf z + 1).

    They are the roots of z^2 - s z + p with s = 2(lam0 lam_inf - 2)/lam_inf^2
    and p = (lam0/lam_inf)^2.
    """
    lam0, lam_inf = Fraction(lam0), Fraction(lam_inf)
    if lam_inf == 0:
        raise ValueError("lambda_inf = 0: infinity is super-attracting, use the super-attracting path")
    if lam0 * lam_inf == 1:
        raise ValueError("degenerate map (degree < d): lambda_0 * lambda_inf = 1")
    s = 2 * (lam0 * lam_inf - 2) / lam_inf**2
    p = (lam0 / lam_inf) ** 2
    return sets_from_form(P.primitive([p, -s, 1]))


def branch_form_quadratic(lam0, lam_inf) -> list[int]:
    """lam_inf^2 X^2 + 2(2 - lam0 lam_inf) XY + lam0^2 Y^2 (zero set = branch points)."""
    lam0, lam_inf = Fraction(lam0), Fraction(lam_inf)
    return P.primitive([lam0**2, 2 * (2 - lam0 * lam_inf), lam_inf**2])
