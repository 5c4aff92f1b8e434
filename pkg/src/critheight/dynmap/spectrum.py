"""Multipliers of fixed points and cycles."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..exactnum import poly as P
from ..exactnum.intpoly import IntPoly
from .ratmap import (
    DEFAULT_DEGREE_CAP,
    PointLike,
    RatMap,
    apply,
    conjugate,
    derivative_at,
    iterate_map,
    to_point,
)


def _translate_flip(t: int):
    """Matrix of z -> t + 1/z; it sends infinity to t and 0 to infinity."""
    return ((t, 1), (1, 0))


def _move_infinity_off(f: RatMap, avoid: Sequence = ()) -> RatMap:
    """A conjugate of f for which infinity is not fixed."""
    for t in range(0, 2 * f.degree + 4 + len(avoid)):
        if apply(f, t) != to_point(t) and to_point(t) not in avoid:
            return conjugate(f, _translate_flip(t))
    raise ArithmeticError("no non-fixed integer point found")


def multiplier_char_poly(f: RatMap, n: int = 1, cap: int = DEFAULT_DEGREE_CAP) -> IntPoly:
    """Primitive polynomial in L whose roots are the multipliers of the fixed points of f^n.

    Roots are counted with multiplicity; the degree is d**n + 1.
    """
    g = iterate_map(f, n, cap)
    h = _move_infinity_off(g)
    D = h.degree
    G1, G2 = list(h.num), list(h.den)
    fix = P.sub(P.mul([0, 1], G2), G1)
    if P.degree(fix) != D + 1:
        raise ArithmeticError("infinity is still fixed")
    # at a fixed point z, h'(z) = (G1'(z) - z G2'(z)) / G2(z)
    top = P.sub(P.derivative(G1), P.mul([0, 1], P.derivative(G2)))
    xs = list(range(D + 2))
    vals = []
    for L in xs:
        b = P.sub(P.scale(G2, L), top)
        vals.append(P.resultant(fix, b + [0] * (D + 1 - len(b)), D + 1, D))
    coeffs = P.interpolate(xs, vals)
    return IntPoly.from_coeffs(coeffs)


def cycle_multiplier(f: RatMap, cycle: Sequence[PointLike]) -> Fraction:
    """Product of derivatives along an n-cycle, points given in orbit order."""
    pts = [to_point(z) for z in cycle]
    if not pts:
        raise ValueError("empty cycle")
    for i, p in enumerate(pts):
        if apply(f, p) != pts[(i + 1) % len(pts)]:
            raise ValueError("the given points are not a cycle of f in orbit order")
    if len(set(pts)) != len(pts):
        raise ValueError("cycle points must be distinct")
    if all(p[1] != 0 for p in pts):
        g, work = f, pts
    else:
        t = next(t for t in range(len(pts) + 1) if to_point(t) not in pts)
        psi = _translate_flip(t)
        g = conjugate(f, psi)
        # psi^{-1}(w) = 1/(w - t), and infinity goes to 0
        work = [to_point(Fraction(0)) if p[1] == 0 else to_point(1 / (Fraction(p[0], p[1]) - t)) for p in pts]
    out = Fraction(1)
    for p in work:
        out *= derivative_at(g, Fraction(p[0], p[1]))
    return out
