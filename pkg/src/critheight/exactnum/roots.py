"""Certified complex root enclosures for integer polynomials.

Approximations come from mpmath; each squarefree factor's roots are then
certified with the Weierstrass (Braess-Hadeler) inclusion theorem evaluated
in exact rational arithmetic: for distinct approximations z_i of the roots of
a degree-n polynomial with leading coefficient c,

    W_i = p(z_i) / (c * prod_{j != i} (z_i - z_j)),

every root lies in the union of the disks |z - z_i| <= n |W_i|, and a
connected component made of m disks holds exactly m roots. When the disks are
pairwise disjoint, each one isolates a single root.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath

from .intpoly import IntPoly
from .rbound import RBound, working_precision, working_prec

MAX_ROOT_PREC = 1 << 15


@dataclass(frozen=True)
class RootBox:
    """Closed disk ``|z - center| <= radius`` holding ``multiplicity`` roots."""

    re: Fraction
    im: Fraction
    radius: Fraction
    multiplicity: int = 1

    @property
    def is_exact(self) -> bool:
        return self.radius == 0

    def real(self) -> RBound:
        return RBound.hull(self.re - self.radius, self.re + self.radius)

    def imag(self) -> RBound:
        return RBound.hull(self.im - self.radius, self.im + self.radius)

    def abs2(self) -> RBound:
        """Enclosure of ``|z|**2`` over the disk."""
        r2 = self.re * self.re + self.im * self.im
        if self.radius == 0:
            return RBound.exact(r2)
        mod = RBound.exact(r2).sqrt()
        lo = mod - self.radius
        hi = mod + self.radius
        lo_b = RBound.zero() if lo.hi <= 0 else RBound(max(lo.lo, 0 * lo.lo), lo.hi)
        return RBound(lo_b.square().lo, hi.square().hi)

    def abs(self) -> RBound:
        a2 = self.abs2()
        return a2.sqrt()

    def log_abs(self) -> RBound:
        return self.abs2().log() * Fraction(1, 2)

    def log_plus_abs(self) -> RBound:
        a2 = self.abs2()
        return a2.log_plus() * Fraction(1, 2)

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return abs(complex(float(self.re), float(self.im)) - z) <= float(self.radius) + slack


def _dyadic(x: mpmath.mpf, bits: int) -> Fraction:
    """Exact value of x rounded to at most ``bits`` significant bits."""
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)
    extra = man.bit_length() - bits if man else 0
    if extra > 0:
        man = (man + (1 << (extra - 1))) >> extra
        exp += extra
    if sign:
        man = -man
    return Fraction(man * (1 << exp)) if exp >= 0 else Fraction(man, 1 << -exp)


def _sqrt_upper(q: Fraction, bits: int) -> Fraction:
    """Rational upper bound for sqrt(q) with roughly ``bits`` relative accuracy."""
    if q == 0:
        return Fraction(0)
    half = bits + max(0, q.denominator.bit_length() - q.numerator.bit_length()) // 2 + 1
    r = isqrt((q.numerator << (2 * half)) // q.denominator) + 1
    return Fraction(r, 1 << half)


def _approx_roots(coeffs: list[int], dps: int) -> list:
    with mpmath.workdps(dps):
        desc = [mpmath.mpf(c) for c in reversed(coeffs)]
        for attempt in range(4):
            try:
                roots = mpmath.polyroots(desc, maxsteps=200 * (attempt + 1), extraprec=2 * dps * (attempt + 1))
                return [mpmath.mpc(r) for r in roots]
            except mpmath.libmp.NoConvergence:
                continue
        raise ArithmeticError("root approximation did not converge")


def _certify(coeffs: list[int], approx: list, bits: int) -> list[RootBox] | None:
    n = len(coeffs) - 1
    lead = coeffs[-1]
    zs = [(_dyadic(z.real, bits + 8), _dyadic(z.imag, bits + 8)) for z in approx]
    boxes = []
    for i, (a, b) in enumerate(zs):
        # p(z_i) in exact Gaussian rationals
        pr, pi = Fraction(0), Fraction(0)
        for c in reversed(coeffs):
            pr, pi = pr * a - pi * b + c, pr * b + pi * a
        dr, di = Fraction(lead), Fraction(0)
        for j, (c, d) in enumerate(zs):
            if j == i:
                continue
            er, ei = a - c, b - d
            dr, di = dr * er - di * ei, dr * ei + di * er
        den2 = dr * dr + di * di
        if den2 == 0:
            return None
        w2 = (pr * pr + pi * pi) / den2
        radius = n * _sqrt_upper(w2, bits + 8)
        boxes.append(RootBox(a, b, radius))
    for i in range(n):
        for j in range(i + 1, n):
            (a, b), (c, d) = zs[i], zs[j]
            dist2 = (a - c) ** 2 + (b - d) ** 2
            if dist2 <= (boxes[i].radius + boxes[j].radius) ** 2:
                return None
    return boxes


def _isolate_squarefree(coeffs: list[int], bits: int) -> list[RootBox]:
    n = len(coeffs) - 1
    if n == 1:
        return [RootBox(Fraction(-coeffs[0], coeffs[1]), Fraction(0), Fraction(0))]
    height_bits = max(abs(c) for c in coeffs).bit_length()
    work = bits + 2 * height_bits + 4 * n + 32
    while work <= MAX_ROOT_PREC:
        dps = int(work * 0.30103) + 10
        approx = _approx_roots(coeffs, dps)
        boxes = _certify(coeffs, approx, work)
        if boxes is not None and all(b.radius <= _target(b, bits) for b in boxes):
            return sorted(boxes, key=lambda b: (b.re * b.re + b.im * b.im, b.re, b.im))
        work *= 2
    raise ArithmeticError("could not certify root enclosures at the requested precision")


def _target(box: RootBox, bits: int) -> Fraction:
    scale = max(Fraction(1), abs(box.re) + abs(box.im))
    return scale / (1 << bits)


def archimedean_root_enclosures(P: IntPoly, prec: int | None = None) -> list[RootBox]:
    """Certified disks around every complex root of P, multiplicities attached.

    Each squarefree factor is isolated separately, so every disk holds the
    roots of one irreducible factor; ``multiplicity`` is that factor's
    exponent. Disk radii are at most ``2**-prec`` times ``max(1, |center|)``.
    """
    if P.is_zero:
        raise ValueError("zero polynomial")
    bits = prec if prec is not None else working_prec()
    out: list[RootBox] = []
    for fac, mult in P.factor():
        for b in _isolate_squarefree(list(fac.coeffs), bits):
            out.append(RootBox(b.re, b.im, b.radius, mult))
    out.sort(key=lambda b: (b.re * b.re + b.im * b.im, b.re, b.im))
    return out


def finite_root_heights(P: IntPoly) -> dict[int, Fraction]:
    """Non-archimedean part of the root height sum, as ``{p: c}`` meaning ``sum c log p``.

    Read off the Newton polygon at each prime dividing the leading coefficient;
    at every other prime all roots are p-adic integers and contribute nothing.
    """
    from .padic import newton_polygon
    from .places import prime_factors

    out: dict[int, Fraction] = {}
    for p in prime_factors(P.lead):
        npoly = newton_polygon(P, p)
        c = sum((-v * m for v, m in npoly.segments if v < 0), Fraction(0))
        if c:
            out[p] = c
    return out


def roots_height_sum(P: IntPoly, prec: int | None = None) -> RBound:
    """Enclosure of the sum of Weil heights of the roots of P, with multiplicity.

    For primitive P this equals the logarithmic Mahler measure.
    """
    from .rbound import log_int

    if P.is_zero:
        raise ValueError("zero polynomial")
    if P.degree <= 0:
        return RBound.zero()
    bits = prec if prec is not None else working_prec()
    with working_precision(bits + 40):
        total = RBound.zero()
        for p, c in sorted(finite_root_heights(P).items()):
            total = total + log_int(p) * c
        boxes = archimedean_root_enclosures(P, bits + P.degree.bit_length() + 8)
        for b in boxes:
            total = total + b.log_plus_abs() * b.multiplicity
    if total.width() > Fraction(1, 1 << bits):
        raise ArithmeticError("root height sum did not reach the requested width")
    return total
