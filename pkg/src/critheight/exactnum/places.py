"""Places of Q and exact valuations."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from .rbound import RBound, log_int, log_rational

Rational = Fraction


@dataclass(frozen=True, order=True)
class Place:
    """Either the archimedean place (``p is None``) or the p-adic place for a prime p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def prime(cls, p: int) -> "Place":
        return cls(int(p))

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)


ARCH = Place()


@lru_cache(maxsize=4096)
def _is_prime(p: int) -> bool:
    return p > 1 and bool(sympy.isprime(p))


def val_p(x, p: int | Place) -> int:
    """p-adic valuation of a nonzero rational."""
    if isinstance(p, Place):
        if p.p is None:
            raise ValueError("val_p needs a finite place")
        p = p.p
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    return _vint(x.numerator, p) - _vint(x.denominator, p)


def _vint(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vint(n: int, p: int) -> int:
    """Valuation of an integer, with ``vint(0, p)`` raising."""
    if n == 0:
        raise ValueError("valuation of zero")
    return _vint(n, p)


def log_p(p: int) -> RBound:
    return log_int(p)


def log_abs(x, v: Place = ARCH, prec: int | None = None) -> RBound:
    """Enclosure of ``log |x|_v`` for a nonzero rational x.

    At a finite place the result is ``-val_p(x) * log p``, exact up to the
    enclosure of ``log p``.
    """
    from .rbound import working_precision, working_prec

    x = Fraction(x)
    if x == 0:
        raise ValueError("log of zero")
    bits = prec if prec is not None else working_prec()
    with working_precision(bits + 16 + max(x.numerator.bit_length(), x.denominator.bit_length()).bit_length()):
        if v.is_archimedean:
            return log_rational(x)
        k = val_p(x, v.p)
        if k == 0:
            return RBound.zero()
        return log_int(v.p) * (-k)


def log_plus_abs(x, v: Place = ARCH) -> RBound:
    """``log max(1, |x|_v)``; zero is allowed and gives 0."""
    x = Fraction(x)
    if x == 0:
        return RBound.zero()
    if v.is_archimedean:
        return RBound.exact(abs(x)).log_plus() if abs(x) > 1 else RBound.zero()
    k = val_p(x, v.p)
    return log_int(v.p) * (-k) if k < 0 else RBound.zero()


def abs_v(x, v: Place) -> Fraction:
    """Exact ``|x|_v`` for a rational x (p-adic absolute values are rational)."""
    x = Fraction(x)
    if v.is_archimedean:
        return abs(x)
    if x == 0:
        return Fraction(0)
    k = val_p(x, v.p)
    return Fraction(1, v.p**k) if k >= 0 else Fraction(v.p ** (-k))


def prime_factors(n: int) -> list[int]:
    n = abs(int(n))
    if n <= 1:
        return []
    return sorted(int(q) for q in sympy.factorint(n))


def lcm_upto(d: int) -> int:
    out = 1
    for m in range(2, d + 1):
        out = out * m // _gcd(out, m)
    return out


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)
