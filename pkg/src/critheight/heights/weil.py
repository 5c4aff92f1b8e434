"""Weil heights of rational points and of maps as points of projective space."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from ..dynmap.ratmap import RatMap
from ..exactnum import poly as P
from ..exactnum.rbound import RBound, log_int, working_precision


def primitive_coordinates(coords: Sequence) -> list[int]:
    """Coprime integer coordinates of the projective point with the given entries."""
    ints = P.clear_denominators([Fraction(c) for c in coords])
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g == 0:
        raise ValueError("the zero vector is not a projective point")
    return [c // g for c in ints]


def weil_height(coords: Sequence, prec: int | None = None) -> RBound:
    """log max |x_i| over coprime integer coordinates."""
    ints = primitive_coordinates(coords)
    m = max(abs(c) for c in ints)
    if prec is None:
        return log_int(m)
    with working_precision(prec + 16):
        return log_int(m)


def height(z) -> RBound:
    """Height of a rational number, h(p/q) = log max(|p|, |q|)."""
    z = Fraction(z)
    return weil_height([z.numerator, z.denominator])


def hom_height(f: RatMap) -> RBound:
    """Height of the coefficient vector (a_0, ..., a_d, b_0, ..., b_d)."""
    return weil_height(f.coefficients)
