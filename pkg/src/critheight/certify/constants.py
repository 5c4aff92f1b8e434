"""Explicit constants of the local and global height inequalities.

Integers such as lcm(1..d) and factorials are formed exactly; logarithms are
taken only at the end, as enclosures.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import sympy

from ..exactnum.places import ARCH, Place, abs_v, lcm_upto, log_plus_abs
from ..exactnum.rbound import RBound, log_int, log_rational

FIBRATION_DEGREE_CAP = 10**6
QUAD_THEOREM_CONSTANT = Fraction(12, 1000)
QUAD_THEOREM_K = 10


def _log2() -> RBound:
    return log_int(2)


def _log3() -> RBound:
    return log_int(3)


def log_silver() -> RBound:
    """log(sqrt(2) + 1)."""
    return (RBound.exact(2).sqrt() + 1).log()


def log_lcm(n: int) -> RBound:
    """log lcm(1, ..., n), summed over prime powers so large n stays cheap."""
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 4096:
        return log_int(lcm_upto(n))
    total = RBound.zero()
    for p in sympy.primerange(2, n + 1):
        e, q = 0, 1
        while q * p <= n:
            q *= p
            e += 1
        total = total + log_int(int(p)) * e
    return total


# --- Green's function and attraction constants -----------------------------------

def eps_v(d: int, v: Place = ARCH) -> Fraction:
    """Attraction threshold: 1/8 (d = 2) or 3^-(d-1) at infinity, min_{m<=d} |m|_p^d otherwise."""
    _check_degree(d)
    if v.is_archimedean:
        return Fraction(1, 8) if d == 2 else Fraction(1, 3 ** (d - 1))
    return min(abs_v(m, v) for m in range(1, d + 1)) ** d


def C_v(d: int, v: Place = ARCH) -> Fraction:
    """Contraction factor: 3^(d-1) at infinity, 1 at finite places."""
    _check_degree(d)
    return Fraction(3 ** (d - 1)) if v.is_archimedean else Fraction(1)


def log_plus_int(n: int, v: Place = ARCH) -> RBound:
    """log+ |n|_v for a nonzero integer: log n at infinity, 0 at finite places."""
    return log_plus_abs(n, v)


def greens_factorial(d: int) -> int:
    """2d (2d-1)!, the count bounding the Bezout cofactors."""
    return 2 * d * factorial(2 * d - 1)


def sa_factorial(d: int) -> int:
    """2 (2d-1)!, the factor used in the super-attracting estimate."""
    return 2 * factorial(2 * d - 1)


def sa_C_v(d: int, e: int, v: Place = ARCH) -> RBound:
    """Super-attracting threshold.

    (2e+1)/(e-1) log 2 + (d-e)/(e-1) log 3 at infinity, and
    d/(e-1) log max_{m<=d} |1/m|_p at a finite place.
    """
    _check_sa(d, e)
    if v.is_archimedean:
        return _log2() * Fraction(2 * e + 1, e - 1) + _log3() * Fraction(d - e, e - 1)
    worst = max(abs_v(Fraction(1, m), v) for m in range(1, d + 1))
    return log_rational(worst) * Fraction(d, e - 1) if worst != 1 else RBound.zero()


def sa_decay_constant(d: int, e: int, v: Place = ARCH) -> RBound:
    """log+ |2^(e-1) 3^(d-e)|_v."""
    return log_plus_int(2 ** (e - 1) * 3 ** (d - e), v)


def quad_eps(v: Place = ARCH) -> RBound:
    """Quadratic-family threshold: sqrt(2) - 1, 1/4 at p = 2, 1 elsewhere."""
    if v.is_archimedean:
        return RBound.exact(2).sqrt() - 1
    if v.p == 2:
        return RBound.exact(Fraction(1, 4))
    return RBound.exact(1)


# --- global constants ------------------------------------------------------------

def epsilon_sum(d: int) -> RBound:
    """Sum over all places of log eps_v: -(d log lcm(1..d) + log max(8, 3^(d-1)))."""
    _check_degree(d)
    return -(log_lcm(d) * d + log_int(max(8, 3 ** (d - 1))))


def c2(d: int) -> RBound:
    """(d-1) log 3 + d log lcm(1, ..., d)."""
    _check_degree(d)
    return _log3() * (d - 1) + log_lcm(d) * d


def c2_epsilonsum(d: int) -> RBound:
    """d log lcm(1..d) + log max(8, 3^(d-1)), i.e. minus the epsilon sum.

    Agrees with c2 for d >= 3; at d = 2 it is 5 log 2 rather than log 3 + 2 log 2.
    """
    return -epsilon_sum(d)


def fixedzero_constant(d: int, k: int) -> RBound:
    """2 log(2d(2d-1)!) + log 2 + k (d log lcm(1..d) + log max(8, 3^(d-1)))."""
    _check_degree(d)
    return log_int(greens_factorial(d)) * 2 + _log2() + c2_epsilonsum(d) * k


def goodconj_constant(d: int) -> RBound:
    """(d+1)^2 log 2 + log((d+1)(d+2)), the additive term in the conjugation bound."""
    return _log2() * ((d + 1) ** 2) + log_int((d + 1) * (d + 2))


def c0(d: int) -> RBound:
    """Per-k constant of the general global bound.

    Absorbs the k-free terms of the fixed-zero bound and the conjugation
    bound into the coefficient of k, which is valid for every k >= 1.
    """
    return fixedzero_constant(d, 1) + goodconj_constant(d) * (4 * d - 1)


def geom_base(d: int, e: int) -> int:
    """4d^2 - 2(e+2)d + e + 2."""
    return 4 * d * d - 2 * (e + 2) * d + e + 2


def _geom_power(d: int, e: int, shift: int = 0) -> RBound:
    """(4d^2 - 2(e+2)d + e + 2)^(log d / log e - shift)."""
    q = geom_base(d, e)
    if d == e:
        return RBound.exact(Fraction(q) ** (1 - shift))
    t = log_int(d) / log_int(e) - shift
    return (log_int(q) * t).exp()


def geom_coefficient(d: int, e: int) -> RBound:
    """1 / ((d-1) d^2 (4d^2 - 2(e+2)d + e + 2)^(log d / log e))."""
    _check_sa(d, e)
    return RBound.exact(1) / (_geom_power(d, e) * ((d - 1) * d * d))


def constant_Cde(d: int, e: int) -> RBound:
    """Additive constant of the super-attracting lower bound, with exact lcm(1..d)."""
    _check_sa(d, e)
    first = log_int(sa_factorial(d)) * (2 * d - e - 1) / (_geom_power(d, e) * (d * d * (d - 1)))
    inner = (_log3() * Fraction(2 * (d - e), e - 1) + _log2() * Fraction(4 * e - 1, e - 1)
             + log_lcm(d) * Fraction(d, e - 1))
    second = inner * e / (_geom_power(d, e, 1) * (d * d * (d - 1)))
    return first + second


def quad_bound_constants(k: int = QUAD_THEOREM_K) -> tuple[Fraction, RBound]:
    """Coefficient (k-8)/2^(k+2) and constant (4 log 2 + 2k(2 log 2 + log(sqrt2+1)))/2^(k+2)."""
    if k <= 8:
        raise ValueError("need k > 8 for a positive coefficient")
    scale = 2 ** (k + 2)
    const = (_log2() * 4 + (_log2() * 2 + log_silver()) * (2 * k)) / scale
    return Fraction(k - 8, scale), const


def corollary_threshold() -> RBound:
    """log 12."""
    return log_int(12)


# --- fibration bound ---------------------------------------------------------------

@dataclass(frozen=True)
class FibrationConstants:
    """Bounds on h(lambda) for Per_n(lambda) slices with small critical height.

    ``exact`` is c2(d^(nm)) / m with the exact lcm; ``bounded`` replaces log
    lcm by 1.04 D, giving (1.04 D^2 + (D-1) log 3) / m; ``bounded_display``
    is the same with 1/n in front.
    """

    d: int
    n: int
    m: int
    exact: RBound
    bounded: RBound
    bounded_display: RBound

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.n, "m": self.m, "exact": self.exact.to_json(),
                "bounded": self.bounded.to_json(), "bounded_display": self.bounded_display.to_json()}


def fibration_constants(d: int, n: int, m: int) -> FibrationConstants:
    _check_degree(d)
    if n < 1 or m < 1:
        raise ValueError("n and m must be at least 1")
    D = d ** (n * m)
    if D > FIBRATION_DEGREE_CAP:
        raise ValueError(f"d^(nm) = {d}^{n * m} exceeds the cap {FIBRATION_DEGREE_CAP}")
    exact = c2(D) / m
    body = RBound.exact(Fraction(104, 100) * D * D) + _log3() * (D - 1)
    bounded = body / m
    if exact.hi > bounded.lo:
        raise ArithmeticError(f"log lcm(1..{D}) < 1.04 * {D} failed to certify")
    return FibrationConstants(d, n, m, exact, bounded, body / n)


# --- bundle --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExplicitConstants:
    """Every constant attached to degree d (and super-attracting order e)."""

    d: int
    e: int | None = None

    def eps(self, v: Place = ARCH) -> Fraction:
        return eps_v(self.d, v)

    def C(self, v: Place = ARCH) -> Fraction:
        return C_v(self.d, v)

    def sa_C(self, v: Place = ARCH) -> RBound:
        return sa_C_v(self.d, self._e(), v)

    def c2(self) -> RBound:
        return c2(self.d)

    def c2_epsilonsum(self) -> RBound:
        return c2_epsilonsum(self.d)

    def c0(self) -> RBound:
        return c0(self.d)

    def Cde(self) -> RBound:
        return constant_Cde(self.d, self._e())

    def _e(self) -> int:
        if self.e is None:
            raise ValueError("no super-attracting order e given")
        return self.e

    def to_json(self, places: tuple[Place, ...] = (ARCH,)) -> dict:
        out = {
            "d": self.d,
            "eps": {str(v): str(self.eps(v)) for v in places},
            "C": {str(v): str(self.C(v)) for v in places},
            "c2": self.c2().to_json(),
            "c2_epsilonsum": self.c2_epsilonsum().to_json(),
            "c0": self.c0().to_json(),
        }
        if self.e is not None:
            out["e"] = self.e
            out["sa_C"] = {str(v): self.sa_C(v).to_json() for v in places}
            out["Cde"] = self.Cde().to_json()
        return out


def _check_degree(d: int) -> None:
    if d < 2:
        raise ValueError("degree must be at least 2")


def _check_sa(d: int, e: int) -> None:
    _check_degree(d)
    if not 2 <= e <= d:
        raise ValueError("need 2 <= e <= d")


__all__ = [
    "ExplicitConstants", "FibrationConstants", "C_v", "c0", "c2", "c2_epsilonsum", "constant_Cde",
    "corollary_threshold", "eps_v", "epsilon_sum", "fibration_constants", "fixedzero_constant",
    "geom_base", "geom_coefficient", "goodconj_constant", "greens_factorial", "log_lcm",
    "log_plus_int", "log_silver", "quad_bound_constants", "quad_eps", "sa_C_v", "sa_decay_constant",
    "sa_factorial", "QUAD_THEOREM_CONSTANT", "QUAD_THEOREM_K",
]
