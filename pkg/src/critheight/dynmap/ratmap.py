"""Rational self-maps of P^1 over Q stored as primitive integer lifts."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

from ..exactnum import poly as P
from ..exactnum.places import Place, log_abs
from ..exactnum.rbound import RBound

DEFAULT_DEGREE_CAP = 256

Point = tuple[int, int]
PointLike = Union[Point, Fraction, int, str, None]


# --- normal-form tags ---------------------------------------------------------

@dataclass(frozen=True)
class General:
    def __str__(self) -> str:
        return "general"


@dataclass(frozen=True)
class FixedZeroInfty:
    """f(0) = 0 with multiplier ``lam``, f(inf) = inf, no pole at 0."""

    lam: Fraction

    def __str__(self) -> str:
        return f"fixed-zero-infty(lambda={self.lam})"


@dataclass(frozen=True)
class SuperAttracting:
    """f(z) = z^e + O(z^(e+1)) at 0 and f(inf) = inf."""

    e: int

    def __str__(self) -> str:
        return f"super-attracting(e={self.e})"


@dataclass(frozen=True)
class Milnor2:
    """(lam0 z + z^2) / (lam_inf z + 1)."""

    lam0: Fraction
    lam_inf: Fraction

    def __str__(self) -> str:
        return f"milnor2({self.lam0}, {self.lam_inf})"


NormalFormTag = Union[General, FixedZeroInfty, SuperAttracting, Milnor2]


class DegenerateMapError(ValueError):
    pass


# --- projective points --------------------------------------------------------

def normalize_point(x: int, y: int) -> Point:
    """Coprime integer pair with y > 0, or (1, 0) for infinity."""
    x, y = int(x), int(y)
    if x == 0 and y == 0:
        raise ValueError("[0:0] is not a point of P^1")
    g = gcd(x, y)
    x, y = x // g, y // g
    if y < 0 or (y == 0 and x < 0):
        x, y = -x, -y
    return x, y


def to_point(z: PointLike) -> Point:
    """Accept a rational, 'inf'/None, a 'p/q' string or an integer pair."""
    if z is None or (isinstance(z, str) and z.strip().lower() in ("inf", "infinity", "oo")):
        return (1, 0)
    if isinstance(z, tuple):
        a, b = Fraction(z[0]), Fraction(z[1])
        den = a.denominator * b.denominator
        return normalize_point(int(a * den), int(b * den))
    q = Fraction(z)
    return normalize_point(q.numerator, q.denominator)


def point_value(pt: Point) -> Fraction | None:
    """Affine coordinate of a point, None for infinity."""
    return None if pt[1] == 0 else Fraction(pt[0], pt[1])


def flip(z: PointLike) -> Point:
    """Image of a point under z -> 1/z."""
    x, y = to_point(z)
    return normalize_point(y, x)


# --- the map ------------------------------------------------------------------

def _canonical_lift(num: Sequence, den: Sequence) -> tuple[tuple[int, ...], tuple[int, ...]]:
    d1 = len(num)
    ints = P.clear_denominators(list(num) + list(den))
    g = P.content(ints)
    if g == 0:
        raise DegenerateMapError("zero map")
    ints = [c // g for c in ints]
    # sign convention: first nonzero of (a_d, ..., a_0, b_d, ..., b_0) is positive
    order = list(reversed(ints[:d1])) + list(reversed(ints[d1:]))
    first = next(c for c in order if c != 0)
    if first < 0:
        ints = [-c for c in ints]
    return tuple(ints[:d1]), tuple(ints[d1:])


def _rescaled_resultant(num: Sequence, den: Sequence, res: int) -> int:
    """Resultant of the canonical lift, given ``res`` for the integer lift (num, den); 0 if unusable."""
    ints = list(num) + list(den)
    if not all(isinstance(c, int) for c in ints):
        return 0
    g = P.content(ints)
    if g == 0:
        return 0
    # Res is homogeneous of degree d in each form, so dividing both by g divides it by g^(2d)
    q, rem = divmod(int(res), g ** (2 * (len(num) - 1)))
    return q if rem == 0 else 0


@dataclass(frozen=True)
class RatMap:
    """Degree-d map [x:y] -> [F1(x,y) : F2(x,y)].

    ``num[i]`` and ``den[i]`` are the coefficients of ``x**i * y**(d-i)``, so
    dehomogenizing at y = 1 gives the usual numerator and denominator in z.
    """

    num: tuple[int, ...]
    den: tuple[int, ...]
    tag: NormalFormTag = field(default_factory=General, compare=False)
    res: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        if len(self.num) != len(self.den) or len(self.num) < 3:
            raise ValueError("numerator and denominator need d+1 coefficients each, d >= 2")
        r = _rescaled_resultant(self.num, self.den, self.res) if self.res else 0
        num, den = _canonical_lift(self.num, self.den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        if not r:
            r = P.resultant(list(num), list(den), len(num) - 1, len(den) - 1)
        if r == 0:
            raise DegenerateMapError("degenerate map (degree < d)")
        object.__setattr__(self, "res", int(r))

    @property
    def degree(self) -> int:
        return len(self.num) - 1

    @property
    def coefficients(self) -> tuple[int, ...]:
        return self.num + self.den

    def __call__(self, z: PointLike) -> Point:
        return apply(self, z)

    def __str__(self) -> str:
        return f"({_poly_str(self.num)}) / ({_poly_str(self.den)})"

    def with_tag(self, tag: NormalFormTag) -> "RatMap":
        return RatMap(self.num, self.den, tag)

    # dehomogenized pieces, z = x/y
    def numerator_poly(self) -> list[int]:
        return list(self.num)

    def denominator_poly(self) -> list[int]:
        return list(self.den)

    def fixed_zero_multiplier(self) -> Fraction | None:
        """lambda if f(0)=0, f(inf)=inf and 0 is not a pole; else None."""
        if self.num[0] != 0 or self.den[0] == 0 or self.den[-1] != 0 or self.num[-1] == 0:
            return None
        return Fraction(self.num[1], self.den[0])

    def sa_order(self) -> int | None:
        """e when f(z) = z^e + O(z^(e+1)) with e >= 2 and f(inf) = inf; else None."""
        if self.den[0] == 0 or self.den[-1] != 0 or self.num[-1] == 0:
            return None
        e = next(i for i, c in enumerate(self.num) if c != 0)
        if e < 2 or self.num[e] != self.den[0]:
            return None
        return e

    def normal_form_coefficients(self) -> tuple[list[Fraction], list[Fraction]]:
        """Coefficients scaled so the denominator's constant term is 1."""
        if self.den[0] == 0:
            raise ValueError("0 is a pole; no normalization with b_0 = 1")
        c = Fraction(self.den[0])
        return [Fraction(a) / c for a in self.num], [Fraction(b) / c for b in self.den]


def _poly_str(c: Sequence[int]) -> str:
    terms = []
    for i in range(len(c) - 1, -1, -1):
        if c[i] == 0:
            continue
        mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
        coef = str(c[i])
        if mono and c[i] == 1:
            coef = ""
        elif mono and c[i] == -1:
            coef = "-"
        terms.append(coef + ("*" if coef not in ("", "-") and mono else "") + mono)
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def make_map(num: Sequence, den: Sequence, tag: NormalFormTag | None = None) -> RatMap:
    """Map from numerator and denominator coefficients (low degree first, rationals).

    Both lists have length d+1. A supplied tag is checked against the map.
    """
    num = [Fraction(c) for c in num]
    den = [Fraction(c) for c in den]
    ints = P.clear_denominators(num + den)
    f = RatMap(tuple(ints[: len(num)]), tuple(ints[len(num):]))
    if tag is None:
        return f
    _check_tag(f, tag)
    return f.with_tag(tag)


def _check_tag(f: RatMap, tag: NormalFormTag) -> None:
    if isinstance(tag, FixedZeroInfty):
        lam = f.fixed_zero_multiplier()
        if lam is None or lam != tag.lam:
            raise ValueError(f"map is not in fixed-zero-infty form with multiplier {tag.lam}")
    elif isinstance(tag, SuperAttracting):
        if f.sa_order() != tag.e:
            raise ValueError(f"map is not in super-attracting form with e = {tag.e}")
    elif isinstance(tag, Milnor2):
        if f != milnor2(tag.lam0, tag.lam_inf):
            raise ValueError("map is not the stated Milnor family member")


def milnor2(lam0, lam_inf) -> RatMap:
    """(lam0 z + z^2) / (lam_inf z + 1); the two marked fixed points are 0 and inf."""
    lam0, lam_inf = Fraction(lam0), Fraction(lam_inf)
    if lam0 * lam_inf == 1:
        raise DegenerateMapError("degenerate map (degree < d): lambda_0 * lambda_inf = 1")
    num = [Fraction(0), lam0, Fraction(1)]
    den = [Fraction(1), lam_inf, Fraction(0)]
    ints = P.clear_denominators(num + den)
    return RatMap(tuple(ints[:3]), tuple(ints[3:]), Milnor2(lam0, lam_inf))


def fixed_zero_map(lam, a: Sequence, b: Sequence) -> RatMap:
    """(lam z + a_2 z^2 + ... + a_d z^d) / (1 + b_1 z + ... + b_{d-1} z^{d-1})."""
    lam = Fraction(lam)
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    d = len(a) + 1
    if len(b) != d - 1:
        raise ValueError("need a_2..a_d and b_1..b_{d-1}")
    num = [Fraction(0), lam] + a
    den = [Fraction(1)] + b + [Fraction(0)]
    f = make_map(num, den)
    if f.fixed_zero_multiplier() is None:
        raise DegenerateMapError("a_d must be nonzero")
    return f.with_tag(FixedZeroInfty(lam))


def sa_map(e: int, a: Sequence, b: Sequence) -> RatMap:
    """(z^e + a_{e+1} z^{e+1} + ... + a_d z^d) / (1 + b_1 z + ... + b_{d-1} z^{d-1})."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    d = e + len(a)
    if len(b) != d - 1:
        raise ValueError("need a_{e+1}..a_d and b_1..b_{d-1}")
    num = [Fraction(0)] * e + [Fraction(1)] + a
    den = [Fraction(1)] + b + [Fraction(0)]
    f = make_map(num, den)
    if f.sa_order() != e:
        raise DegenerateMapError("a_d must be nonzero")
    return f.with_tag(SuperAttracting(e))


def polynomial_map(coeffs: Sequence) -> RatMap:
    """Polynomial c_0 + c_1 z + ... + c_d z^d."""
    coeffs = [Fraction(c) for c in coeffs]
    d = len(coeffs) - 1
    return make_map(coeffs, [Fraction(1)] + [Fraction(0)] * d)


# --- basic operations ---------------------------------------------------------

def resultant(f: RatMap) -> int:
    return f.res


def r_local(f: RatMap, v: Place, prec: int | None = None) -> RBound:
    """(1 / (d(d-1))) log |Res(F1, F2)|_v for the canonical lift."""
    d = f.degree
    return log_abs(f.res, v, prec) / (d * (d - 1))


def apply(f: RatMap, z: PointLike) -> Point:
    x, y = to_point(z)
    return normalize_point(P.eval_form(f.num, x, y), P.eval_form(f.den, x, y))


def orbit(f: RatMap, z: PointLike, n: int) -> list[Point]:
    out = [to_point(z)]
    for _ in range(n):
        out.append(apply(f, out[-1]))
    return out


def compose(f: RatMap, g: RatMap) -> RatMap:
    """f o g."""
    num = P.form_compose(list(f.num), list(g.num), list(g.den))
    den = P.form_compose(list(f.den), list(g.num), list(g.den))
    # Res(F o G) = Res(F)^e Res(G)^(d^2) for deg F = d, deg G = e
    res = f.res ** g.degree * g.res ** (f.degree ** 2)
    return RatMap(tuple(num), tuple(den), res=res)


def iterate_map(f: RatMap, n: int, cap: int = DEFAULT_DEGREE_CAP) -> RatMap:
    """The n-th iterate, with degree d**n limited by ``cap``."""
    if n < 1:
        raise ValueError("iterate count must be at least 1")
    if f.degree**n > cap:
        raise ValueError(f"degree {f.degree}**{n} = {f.degree**n} exceeds the cap {cap}; "
                         f"raise the cap to at least {f.degree**n}")
    if n == 1:
        return f
    out = f
    for _ in range(n - 1):
        out = compose(f, out)
    return out


Matrix = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def as_matrix(m) -> Matrix:
    (a, b), (c, d) = m
    return (Fraction(a), Fraction(b)), (Fraction(c), Fraction(d))


def mobius_apply(m, z: PointLike) -> Point:
    (a, b), (c, d) = as_matrix(m)
    x, y = to_point(z)
    return to_point((a * x + b * y, c * x + d * y))


def matmul(m1, m2) -> Matrix:
    (a, b), (c, d) = as_matrix(m1)
    (e, f), (g, h) = as_matrix(m2)
    return (a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)


def conjugate(f: RatMap, psi) -> RatMap:
    """psi^{-1} o f o psi for psi = [[a, b], [c, d]] acting by z -> (az + b)/(cz + d)."""
    (a, b), (c, d) = as_matrix(psi)
    det = a * d - b * c
    if det == 0:
        raise ValueError("singular conjugating matrix")
    a, b, c, d = P.clear_denominators([a, b, c, d])
    lx = [b, a]
    ly = [d, c]
    g1 = P.form_compose(list(f.num), lx, ly)
    g2 = P.form_compose(list(f.den), lx, ly)
    num = P.sub(P.scale(g1, d), P.scale(g2, b))
    den = P.sub(P.scale(g2, a), P.scale(g1, c))
    n = f.degree
    # for the integer matrix, Res of this lift is det^(d^2 + d) Res(F)
    return RatMap(tuple(num), tuple(den), res=(a * d - b * c) ** (n * n + n) * f.res)


def derivative_at(f: RatMap, z: Fraction) -> Fraction:
    """f'(z) at a finite point that is not a pole."""
    z = Fraction(z)
    N, D = list(f.num), list(f.den)
    dv = P.evaluate(D, z)
    if dv == 0:
        raise ValueError("derivative requested at a pole")
    return (P.evaluate(P.derivative(N), z) * dv - P.evaluate(N, z) * P.evaluate(P.derivative(D), z)) / (dv * dv)


def _flip_matrix() -> Matrix:
    return (Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))


def fixed_point_multiplier(f: RatMap, z: PointLike) -> Fraction:
    pt = to_point(z)
    if apply(f, pt) != pt:
        raise ValueError(f"{pt} is not a fixed point")
    if pt[1] == 0:
        g = conjugate(f, _flip_matrix())
        return derivative_at(g, Fraction(0))
    return derivative_at(f, Fraction(pt[0], pt[1]))


def normalize_two_fixed(f: RatMap, gamma0: PointLike, gamma_inf: PointLike) -> tuple[RatMap, Matrix]:
    """Conjugate so that gamma0 moves to 0 and gamma_inf to infinity.

    Returns the conjugate ``g = psi^{-1} f psi`` in fixed-zero-infty form and psi.
    """
    p0 = to_point(gamma0)
    pinf = to_point(gamma_inf)
    if p0 == pinf:
        raise ValueError("the two fixed points must be distinct")
    if apply(f, p0) != p0:
        raise ValueError(f"gamma0 = {p0} is not a fixed point")
    if apply(f, pinf) != pinf:
        raise ValueError(f"gamma_inf = {pinf} is not a fixed point")
    lam = fixed_point_multiplier(f, p0)
    if lam == 1:
        raise ValueError("multiplier at gamma0 is 1")
    psi = ((Fraction(pinf[0]), Fraction(p0[0])), (Fraction(pinf[1]), Fraction(p0[1])))
    if psi == ((1, 0), (0, 1)):
        g = f
    else:
        g = conjugate(f, psi)
    if g.fixed_zero_multiplier() != lam:
        raise ArithmeticError("normalization failed")
    return g.with_tag(FixedZeroInfty(lam)), psi


def fixed_points_rational(f: RatMap) -> list[Point]:
    """Rational fixed points, infinity included."""
    from ..exactnum.intpoly import IntPoly

    out = []
    if f.den[-1] == 0:
        out.append((1, 0))
    fix = P.trim(P.sub(P.mul([0, 1], list(f.den)), list(f.num)))
    if len(fix) > 1:
        for fac, _ in IntPoly.from_coeffs(fix).factor():
            if fac.degree == 1:
                out.append(normalize_point(-fac.coeffs[0], fac.coeffs[1]))
    return sorted(set(out))
