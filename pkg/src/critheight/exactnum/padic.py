"""Newton polygons and p-adic root counting."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .intpoly import IntPoly
from .places import Place, vint


@dataclass(frozen=True)
class NewtonPolygon:
    """Root valuations of a polynomial over an algebraic closure of Q_p.

    ``segments`` lists ``(valuation, count)`` sorted by valuation; roots equal
    to zero are not a segment but are counted in ``zero_roots``.
    """

    p: int
    segments: tuple[tuple[Fraction, int], ...]
    zero_roots: int = 0

    @property
    def root_count(self) -> int:
        return self.zero_roots + sum(m for _, m in self.segments)

    def count_valuation_at_least(self, s: Fraction, strict: bool = False) -> int:
        """Roots with valuation >= s (> s if strict); zero roots always count."""
        n = self.zero_roots
        for v, m in self.segments:
            if v > s or (v == s and not strict):
                n += m
        return n

    def min_valuation(self) -> Fraction | None:
        return self.segments[0][0] if self.segments else None


def _prime(p) -> int:
    if isinstance(p, Place):
        if p.p is None:
            raise ValueError("Newton polygons need a finite place")
        return p.p
    Place.prime(p)
    return int(p)


def newton_polygon(P: IntPoly | list, p) -> NewtonPolygon:
    p = _prime(p)
    coeffs = list(P.coeffs if isinstance(P, IntPoly) else P)
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial has no Newton polygon")
    zeros = 0
    while coeffs[zeros] == 0:
        zeros += 1
    pts = []
    for i in range(zeros, len(coeffs)):
        c = coeffs[i]
        if c != 0:
            v = vint(c.numerator, p) - vint(c.denominator, p)
            pts.append((i, Fraction(v)))
    hull = [pts[0]]
    for pt in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = (y2 - y1) / (x2 - x1)
        segments.append((-slope, x2 - x1))
    segments.sort()
    return NewtonPolygon(p, tuple(segments), zeros)


def count_roots_in_disk(P: IntPoly, p, center, radius_logp, closed: bool = True) -> int:
    """Roots of P (with multiplicity) in the disk ``|z - center|_p <= p**radius_logp``.

    ``closed=False`` gives the open disk ``< p**radius_logp``.
    """
    p = _prime(p)
    if P.is_zero:
        raise ValueError("zero polynomial")
    shifted = P.shift(Fraction(center)) if Fraction(center) != 0 else P
    npoly = newton_polygon(shifted, p)
    # |w|_p = p**(-val(w)) <= p**r  <=>  val(w) >= -r
    return npoly.count_valuation_at_least(-Fraction(radius_logp), strict=not closed)
