"""Closed real intervals with dyadic (binary floating) endpoints.

Endpoints are MPFR numbers; every operation rounds the lower endpoint
toward -inf and the upper endpoint toward +inf, so the exact result of the
operation on any members of the operands is contained in the result.
"""
from __future__ import annotations

import contextlib
import contextvars
from fractions import Fraction
from typing import Iterable, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

Number = Union[int, Fraction]

DEFAULT_WORKING_PREC = 160

_prec_var: contextvars.ContextVar[int] = contextvars.ContextVar(
    "critheight_working_prec", default=DEFAULT_WORKING_PREC
)
_ctx_cache: dict[int, tuple[gmpy2.context, gmpy2.context]] = {}


def _contexts(prec: int | None = None) -> tuple[gmpy2.context, gmpy2.context]:
    p = _prec_var.get() if prec is None else prec
    pair = _ctx_cache.get(p)
    if pair is None:
        pair = (
            gmpy2.context(precision=p, round=gmpy2.RoundDown),
            gmpy2.context(precision=p, round=gmpy2.RoundUp),
        )
        _ctx_cache[p] = pair
    return pair


def working_prec() -> int:
    return _prec_var.get()


@contextlib.contextmanager
def working_precision(bits: int):
    """Temporarily set the mantissa size used for rounded RBound operations."""
    if bits < 8:
        raise ValueError("working precision must be at least 8 bits")
    token = _prec_var.set(int(bits))
    try:
        yield
    finally:
        _prec_var.reset(token)


def _negate(x):
    # the bare unary minus rounds to gmpy2's global context; keep every bit
    return _contexts(max(x.precision, 8))[0].minus(x)


def _to_mpq(x: Number) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class RBound:
    """A closed interval ``[lo, hi]`` with binary floating endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        if not isinstance(lo, type(mpfr(0))):
            raise TypeError("RBound endpoints must be mpfr; use RBound.exact()")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- construction -------------------------------------------------------
    @classmethod
    def exact(cls, x: Number | "RBound") -> "RBound":
        """Smallest working-precision interval containing the rational ``x``."""
        if isinstance(x, RBound):
            return x
        down, up = _contexts()
        q = _to_mpq(x)
        return cls(mpfr(q, 0, down), mpfr(q, 0, up))

    @classmethod
    def hull(cls, a: Number, b: Number) -> "RBound":
        a, b = (a, b) if a <= b else (b, a)
        down, up = _contexts()
        return cls(mpfr(_to_mpq(a), 0, down), mpfr(_to_mpq(b), 0, up))

    @classmethod
    def zero(cls) -> "RBound":
        return cls(mpfr(0))

    @classmethod
    def from_json(cls, obj: dict) -> "RBound":
        def load(e):
            m, ex = int(e["mantissa"]), int(e["exponent"])
            bits = max(m.bit_length(), 8)
            return _contexts(bits)[0].mul_2exp(mpfr(mpz(m), bits), ex)
        return cls(load(obj["lo"]), load(obj["hi"]))

    # -- inspection ---------------------------------------------------------
    @property
    def lo_q(self) -> Fraction:
        q = mpq(self.lo)
        return Fraction(int(q.numerator), int(q.denominator))

    @property
    def hi_q(self) -> Fraction:
        q = mpq(self.hi)
        return Fraction(int(q.numerator), int(q.denominator))

    def width(self) -> Fraction:
        return self.hi_q - self.lo_q

    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def contains(self, x: Number | "RBound") -> bool:
        if isinstance(x, RBound):
            return self.lo <= x.lo and x.hi <= self.hi
        q = _to_mpq(x)
        return self.lo <= q <= self.hi

    def overlaps(self, other: "RBound") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def to_json(self) -> dict:
        return {"lo": _dyadic_json(self.lo), "hi": _dyadic_json(self.hi)}

    def __repr__(self) -> str:
        return f"RBound([{float(self.lo):.12g}, {float(self.hi):.12g}])"

    def __eq__(self, other) -> bool:
        return isinstance(other, RBound) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((mpq(self.lo), mpq(self.hi)))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "RBound":
        o = RBound.exact(other)
        down, up = _contexts()
        return RBound(down.add(self.lo, o.lo), up.add(self.hi, o.hi))

    __radd__ = __add__

    def __neg__(self) -> "RBound":
        return RBound(_negate(self.hi), _negate(self.lo))

    def __sub__(self, other) -> "RBound":
        o = RBound.exact(other)
        down, up = _contexts()
        return RBound(down.sub(self.lo, o.hi), up.sub(self.hi, o.lo))

    def __rsub__(self, other) -> "RBound":
        return RBound.exact(other) - self

    def __mul__(self, other) -> "RBound":
        o = RBound.exact(other)
        down, up = _contexts()
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        if a >= 0 and c >= 0:
            return RBound(down.mul(a, c), up.mul(b, d))
        if a == b and c == d:
            return RBound(down.mul(a, c), up.mul(a, c))
        los = [down.mul(a, c), down.mul(a, d), down.mul(b, c), down.mul(b, d)]
        his = [up.mul(a, c), up.mul(a, d), up.mul(b, c), up.mul(b, d)]
        return RBound(min(los), max(his))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RBound":
        o = RBound.exact(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        down, up = _contexts()
        inv = RBound(down.div(1, o.hi), up.div(1, o.lo))
        return self * inv

    def __rtruediv__(self, other) -> "RBound":
        return RBound.exact(other) / self

    def square(self) -> "RBound":
        down, up = _contexts()
        a, b = self.lo, self.hi
        if a >= 0:
            return RBound(down.mul(a, a), up.mul(b, b))
        if b <= 0:
            return RBound(down.mul(b, b), up.mul(a, a))
        return RBound(mpfr(0), max(up.mul(a, a), up.mul(b, b)))

    def scale2(self, k: int) -> "RBound":
        """Multiplication by ``2**k``; exact unless the exponent range is left."""
        down, _ = _contexts(max(self.lo.precision, 8))
        _, up = _contexts(max(self.hi.precision, 8))
        return RBound(down.mul_2exp(self.lo, k), up.mul_2exp(self.hi, k))

    def sqrt(self) -> "RBound":
        if self.lo < 0:
            raise ValueError("sqrt of an interval with negative part")
        down, up = _contexts()
        return RBound(down.sqrt(self.lo), up.sqrt(self.hi))

    def log(self) -> "RBound":
        if self.lo <= 0:
            raise ValueError("log of an interval that is not strictly positive")
        down, up = _contexts()
        return RBound(down.log(self.lo), up.log(self.hi))

    def log_plus(self) -> "RBound":
        """Enclosure of ``log max(1, x)`` over the interval."""
        if self.hi <= 1:
            return RBound.zero()
        down, up = _contexts()
        hi = up.log(self.hi)
        if self.lo >= 1:
            return RBound(down.log(self.lo), hi)
        return RBound(mpfr(0), hi)

    def exp(self) -> "RBound":
        down, up = _contexts()
        return RBound(down.exp(self.lo), up.exp(self.hi))

    def abs(self) -> "RBound":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RBound(mpfr(0), max(_negate(self.lo), self.hi))

    def intersect(self, other: "RBound") -> "RBound":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError(f"disjoint enclosures {self} and {other}")
        return RBound(lo, hi)

    def union(self, other: "RBound") -> "RBound":
        return RBound(min(self.lo, other.lo), max(self.hi, other.hi))


def rmax(bounds: Iterable[RBound]) -> RBound:
    bounds = list(bounds)
    return RBound(max(b.lo for b in bounds), max(b.hi for b in bounds))


def rmin(bounds: Iterable[RBound]) -> RBound:
    bounds = list(bounds)
    return RBound(min(b.lo for b in bounds), min(b.hi for b in bounds))


def rsum(bounds: Iterable[RBound]) -> RBound:
    total = RBound.zero()
    for b in bounds:
        total = total + b
    return total


def log_int(n: int) -> RBound:
    """Enclosure of ``log |n|`` for a nonzero integer (exactly zero for +-1)."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("log of zero")
    if n == 1:
        return RBound.zero()
    return RBound.exact(n).log()


def log_rational(x: Number) -> RBound:
    x = Fraction(x)
    if x == 0:
        raise ValueError("log of zero")
    return log_int(x.numerator) - log_int(x.denominator)


def _dyadic_json(x) -> dict:
    if x == 0:
        return {"mantissa": 0, "exponent": 0}
    m, e = x.as_mantissa_exp()
    m, e = int(m), int(e)
    tz = (m & -m).bit_length() - 1
    return {"mantissa": m >> tz, "exponent": e + tz}
