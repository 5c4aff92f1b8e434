"""Reference computations that share no code path with the package.

They are slow or crude on purpose: each one follows the textbook definition
directly so the package's faster routines can be checked against it.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

import mpmath
import sympy


# --- naive canonical height ---------------------------------------------------------

def _eval_hom(coeffs, x, y):
    d = len(coeffs) - 1
    return sum(c * x**i * y ** (d - i) for i, c in enumerate(coeffs))


def _l1(cs) -> Fraction:
    return sum((abs(Fraction(c)) for c in cs), Fraction(0))


def bezout_bound(num, den) -> Fraction:
    """l1 size of cofactors S, T with S F1 + T F2 = Res * (x or y)^(2d-1), from sympy's gcdex."""
    d = len(num) - 1
    z = sympy.Symbol("z")
    res = homogeneous_resultant(num, den)
    best = Fraction(0)
    for flip in (False, True):
        a = list(reversed(num)) if flip else list(num)
        b = list(reversed(den)) if flip else list(den)
        pa = sympy.Poly(list(reversed(a)), z, domain="QQ")
        pb = sympy.Poly(list(reversed(b)), z, domain="QQ")
        s, t, g = sympy.gcdex(pa, pb)
        if g.degree() != 0:
            raise ValueError("forms share a root")
        scale = Fraction(res) / Fraction(str(g.LC()))
        if s.degree() > d - 1 or t.degree() > d - 1:
            raise ValueError("cofactor degree too large")
        cs = [Fraction(str(c)) * scale for c in s.all_coeffs()]
        ct = [Fraction(str(c)) * scale for c in t.all_coeffs()]
        best = max(best, _l1(cs) + _l1(ct))
    return best


def homogeneous_resultant(num, den) -> int:
    """Res(F1, F2) of two binary forms of degree d, via sympy on the Sylvester matrix."""
    d = len(num) - 1
    rows = []
    for i in range(d):
        rows.append([0] * i + list(reversed(num)) + [0] * (d - 1 - i))
    for i in range(d):
        rows.append([0] * i + list(reversed(den)) + [0] * (d - 1 - i))
    return int(sympy.Matrix(rows).det())


def naive_canonical_height(num, den, x: int, y: int, bit_cap: int = 60000, max_steps: int = 64):
    """(d^-n h(f^n P), n, tail bound) with exact coprime iteration until the coordinates reach bit_cap.

    Bounded orbits (preperiodic points) stop after max_steps.
    """
    d = len(num) - 1
    n = 0
    while True:
        hx = mpmath.log(max(abs(x), abs(y)))
        val = hx / mpmath.mpf(d) ** n
        if max(abs(x), abs(y)).bit_length() * d > bit_cap or n >= max_steps:
            break
        x, y = _eval_hom(num, x, y), _eval_hom(den, x, y)
        g = gcd(x, y)
        x, y = x // g, y // g
        n += 1
    res = abs(homogeneous_resultant(num, den))
    B = max(mpmath.log(float(bezout_bound(num, den))) if res else mpmath.inf,
            mpmath.log(max(float(_l1(num)), float(_l1(den)))))
    tail = B / (mpmath.mpf(d) ** n * (d - 1))
    return val, n, tail


# --- Mahler measure by quadrature -----------------------------------------------------------

def mahler_quadrature(coeffs, dps: int = 20, pieces: int = 16):
    """log M(P) = integral over [0, 1] of log |P(e^(2 pi i t))| dt (Jensen's formula).

    The interval is cut at 'pieces' equal points and at the arguments of any
    root near the unit circle, where the integrand has a log singularity.
    """
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(c) for c in coeffs]
        cuts = {mpmath.mpf(j) / pieces for j in range(pieces + 1)}
        approx = mpmath.polyroots(list(reversed(cs)), maxsteps=200, extraprec=200) if len(cs) > 2 else (
            [-cs[0] / cs[1]] if len(cs) == 2 else [])
        for r in approx:
            if abs(abs(r) - 1) < mpmath.mpf("0.05"):
                t = mpmath.arg(r) / (2 * mpmath.pi)
                cuts.add(t % 1)
        cuts = sorted(cuts)

        def integrand(t):
            z = mpmath.expjpi(2 * t)
            return mpmath.log(abs(mpmath.polyval(list(reversed(cs)), z)))

        return mpmath.quad(integrand, cuts)


# --- Newton polygon by brute force -------------------------------------------------------------

def _vp(c: Fraction, p: int) -> int:
    c = Fraction(c)
    v = 0
    a, b = c.numerator, c.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def brute_root_valuations(coeffs, p: int) -> list[Fraction]:
    """Sorted valuations of the nonzero roots, one entry per root, from the lower hull.

    A segment between points i < j belongs to the lower hull iff every point
    lies on or above the line through them; only maximal such segments count.
    """
    pts = [(i, _vp(c, p)) for i, c in enumerate(coeffs) if c != 0]
    out: list[Fraction] = []
    k = 0
    while k < len(pts) - 1:
        i, vi = pts[k]
        best = None
        for m in range(k + 1, len(pts)):
            j, vj = pts[m]
            slope = Fraction(vj - vi, j - i)
            if all(v - vi >= slope * (x - i) for x, v in pts):
                best = (m, slope)  # keep the farthest hull point along this edge
        m, slope = best
        out.extend([-slope] * (pts[m][0] - i))
        k = m
    return sorted(out)


# --- samplers ---------------------------------------------------------------------------------

def random_primitive_poly(rng: random.Random, max_deg: int = 8, max_height: int = 1000) -> list[int]:
    while True:
        deg = rng.randint(1, max_deg)
        cs = [rng.randint(-max_height, max_height) for _ in range(deg + 1)]
        if cs[-1] == 0 or cs[0] == 0:
            continue
        g = 0
        for c in cs:
            g = gcd(g, c)
        cs = [c // g for c in cs]
        if cs[-1] < 0:
            cs = [-c for c in cs]
        return cs


def random_rational(rng: random.Random, h: int, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-h, h), rng.randint(1, h))
        if q or not nonzero:
            return q
