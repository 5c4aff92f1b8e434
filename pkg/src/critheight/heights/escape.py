"""Local escape rates of a homogeneous lift, summed over Galois-stable point sets.

For the canonical lift F of a map of degree d and a nonzero vector x,

    H_v(x) = lim d^-n log ||F^n(x)||_v = log ||x||_v + sum_j d^(-j-1) delta_v(F^j x),

where delta_v(x) = log ||F(x)||_v - d log ||x||_v is scale invariant and lies
in a fixed interval [L_v, U_v] (Bezout cofactors give L_v, the triangle
inequality gives U_v). Truncating after N terms leaves a tail inside
[L_v, U_v] d^-N / (d - 1).

For a binary form G = c prod_i (y_i X - x_i Y) of degree k we work with

    Phi_v(G) = log |c|_v + sum_i H_v(x_i, y_i),

which does not depend on how G is factored. Summed over all places of Q,
Phi_v(G) gives the sum of canonical heights of the roots of G. At a prime
not dividing Res(F), Phi_p of a primitive integer form is 0.

Non-archimedean places use Gauss norms: if G_{j+1} is the primitive part of
Res_{x,y}(G_j, Y F1 - X F2), then the j-th term summed over the roots is
-v_p(content of that resultant) log p. Coefficients are only needed modulo a
power of p that drops by at most k v_p(Res) per step.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, log2

import gmpy2

from ..dynmap.ratmap import RatMap
from ..exactnum import poly as P
from ..exactnum.places import Place, vint
from ..exactnum.rbound import RBound, log_int, working_precision
from ..exactnum.roots import archimedean_root_enclosures


# --- one-step bounds ----------------------------------------------------------

def bezout_cofactors(f: RatMap) -> tuple[list[int], list[int], list[int], list[int]]:
    """Integer forms A1, A2, B1, B2 of degree d-1 with

    A1 F1 + A2 F2 = Res x^(2d-1) and B1 F1 + B2 F2 = Res y^(2d-1).
    """
    d = f.degree
    n = 2 * d
    F1, F2 = list(f.num), list(f.den)
    # column c < d multiplies F1 by x^c y^(d-1-c); column d + c does the same for F2
    mat = [[Fraction(0)] * n for _ in range(n)]
    for c in range(d):
        for j in range(d + 1):
            mat[c + j][c] += F1[j]
            mat[c + j][d + c] += F2[j]
    out = []
    for target in (n - 1, 0):
        rhs = [Fraction(0)] * n
        rhs[target] = Fraction(f.res)
        sol = _solve(mat, rhs)
        if any(s.denominator != 1 for s in sol):
            raise ArithmeticError("non-integral Bezout cofactor")
        sol = [int(s) for s in sol]
        out.append(sol[:d])
        out.append(sol[d:])
    return out[0], out[1], out[2], out[3]


def _solve(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            raise ArithmeticError("singular Sylvester system")
        a[k], a[piv] = a[piv], a[k]
        for r in range(n):
            if r != k and a[r][k] != 0:
                q = a[r][k] / a[k][k]
                for c in range(k, n + 1):
                    a[r][c] -= q * a[k][c]
    return [a[i][n] / a[i][i] for i in range(n)]


@dataclass(frozen=True)
class StepBounds:
    """delta_v(x) lies in [lower, upper] for every nonzero x."""

    lower: RBound
    upper: RBound

    def interval(self) -> RBound:
        return RBound(self.lower.lo, self.upper.hi)


@lru_cache(maxsize=512)
def step_bounds(f: RatMap, v: Place) -> StepBounds:
    if v.is_archimedean:
        A1, A2, B1, B2 = bezout_cofactors(f)
        l1 = lambda c: sum(abs(t) for t in c)
        bez = max(l1(A1) + l1(A2), l1(B1) + l1(B2))
        upper = log_int(max(l1(f.num), l1(f.den)))
        lower = log_int(f.res) - log_int(bez)
        return StepBounds(lower, upper)
    k = vint(f.res, v.p)
    return StepBounds(log_int(v.p) * (-k), RBound.zero())


# --- complex boxes -------------------------------------------------------------

class CBox:
    """Rectangle re + i im with RBound sides."""

    __slots__ = ("re", "im")

    def __init__(self, re: RBound, im: RBound | None = None):
        self.re = re
        self.im = RBound.zero() if im is None else im

    def __add__(self, o: "CBox") -> "CBox":
        return CBox(self.re + o.re, self.im + o.im)

    def __mul__(self, o: "CBox") -> "CBox":
        return CBox(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def scale_int(self, c: int) -> "CBox":
        return CBox(self.re * c, self.im * c)

    def scale2(self, k: int) -> "CBox":
        return CBox(self.re.scale2(k), self.im.scale2(k))

    def abs2(self) -> RBound:
        return self.re.square() + self.im.square()

    def conj(self) -> "CBox":
        return CBox(self.re, -self.im)

    def __truediv__(self, o: "CBox") -> "CBox":
        den = o.abs2()
        if den.lo <= 0:
            raise ZeroDivisionError("divisor box meets zero")
        num = self * o.conj()
        return CBox(num.re / den, num.im / den)


def _eval_form(F: list[int], x: CBox, y: CBox) -> CBox:
    d = len(F) - 1
    xp = [CBox(RBound.exact(1))]
    yp = [CBox(RBound.exact(1))]
    for _ in range(d):
        xp.append(xp[-1] * x)
        yp.append(yp[-1] * y)
    acc = CBox(RBound.zero())
    for i, c in enumerate(F):
        if c:
            acc = acc + (xp[i] * yp[d - i]).scale_int(c)
    return acc


def _half_log_max(a2: RBound, b2: RBound) -> RBound | None:
    m = RBound(max(a2.lo, b2.lo), max(a2.hi, b2.hi))
    if m.lo <= 0:
        return None
    return m.log() * Fraction(1, 2)


def _exponent(m) -> int:
    return int(gmpy2.get_exp(m)) if m > 0 else 0


def arch_escape_tail_sum(f: RatMap, x: CBox, y: CBox, steps: int) -> RBound:
    """Enclosure of sum_{j >= 0} d^(-j-1) delta(F^j(x, y)) at the archimedean place."""
    d = f.degree
    F1, F2 = list(f.num), list(f.den)
    bounds = step_bounds(f, Place()).interval()
    lnorm = _half_log_max(x.abs2(), y.abs2())
    if lnorm is None:
        raise ArithmeticError("starting vector is not separated from zero")
    total = RBound.zero()
    weight = Fraction(1, d)
    j = 0
    while j < steps:
        u = _eval_form(F1, x, y)
        w = _eval_form(F2, x, y)
        new = _half_log_max(u.abs2(), w.abs2())
        if new is None:
            break
        delta = (new - lnorm * d)
        try:
            delta = delta.intersect(bounds)
        except ValueError:
            raise ArithmeticError("escape increment outside its proven range")
        if delta.width() >= bounds.width():
            break
        total = total + delta * weight
        # rescale by a power of two so the vector stays near unit size
        k = _exponent(rmax_hi(u.abs2(), w.abs2())) // 2
        x, y = u.scale2(-k), w.scale2(-k)
        lnorm = new - log_int(2) * k if k else new
        weight /= d
        j += 1
    tail = bounds * (weight * d / (d - 1))
    return total + tail


def rmax_hi(a: RBound, b: RBound):
    return max(a.hi, b.hi)


def _box_from_root(b) -> CBox:
    return CBox(RBound.hull(b.re - b.radius, b.re + b.radius), RBound.hull(b.im - b.radius, b.im + b.radius))


def _steps_for(width_per_unit: float, d: int, target: float) -> int:
    """Smallest N with width_per_unit * d^-N / (d-1) <= target."""
    if width_per_unit <= 0:
        return 0
    return max(1, ceil(log2(width_per_unit / ((d - 1) * target)) / log2(d)) + 1)


def arch_phi(f: RatMap, form: list[int], target: float, bits: int | None = None) -> RBound:
    """Enclosure of Phi_inf(G) for an integer form G whose finite part is squarefree."""
    d = f.degree
    form = list(form)
    k = len(form) - 1
    inf_mult = 0
    while inf_mult < k and form[k - inf_mult] == 0:
        inf_mult += 1
    finite = P.trim(form)
    bnd = step_bounds(f, Place()).interval()
    steps = _steps_for(float(bnd.width()) * max(k, 1), d, target / 2)
    coeff_bits = max(1, max(sum(abs(c) for c in f.num), sum(abs(c) for c in f.den)).bit_length())
    work = bits or (64 + steps * (coeff_bits + 2 * d + 2) + int(log2(1 / target)))
    for _ in range(6):
        with working_precision(work):
            val = _arch_phi_once(f, finite, inf_mult, steps, work)
        if float(val.width()) <= target:
            return val
        work *= 2
    return val


def _arch_phi_once(f: RatMap, finite: list[int], inf_mult: int, steps: int, work: int) -> RBound:
    from ..exactnum.intpoly import IntPoly

    total = RBound.zero()
    one = CBox(RBound.exact(1))
    zero = CBox(RBound.zero())
    if inf_mult:
        total = total + arch_escape_tail_sum(f, one, zero, steps) * inf_mult
    if len(finite) >= 2:
        lead = finite[-1]
        total = total + log_int(lead)
        if len(finite) == 2:
            # rational root -c0/c1 with exact integer lift (-c0, c1)
            x = CBox(RBound.exact(-finite[0]))
            y = CBox(RBound.exact(finite[1]))
            h = arch_escape_tail_sum(f, x, y, steps)
            lnorm = log_int(max(abs(finite[0]), abs(finite[1])))
            total = total + h + lnorm - log_int(finite[1])
        else:
            boxes = archimedean_root_enclosures(IntPoly(tuple(finite)), work)
            for b in boxes:
                x = _box_from_root(b)
                h = arch_escape_tail_sum(f, x, one, steps)
                total = total + (h + b.log_plus_abs()) * b.multiplicity
    return total


def padic_phi(f: RatMap, form: list[int], p: int, target: float) -> RBound:
    """Enclosure of Phi_p(G) for a primitive integer form G."""

    form = [int(c) for c in form]
    d = f.degree
    k = len(form) - 1
    v = vint(f.res, p) if f.res % p == 0 else 0
    if P.content(form) % p == 0:
        raise ValueError("form must be primitive at p")
    if v == 0 or k == 0:
        return RBound.zero()
    logp = float(log_int(p).hi)
    steps = _steps_for(k * v * logp, d, target)
    coeffs, total_v = padic_increments(f, form, p, steps)
    # sum_j d^(-j-1) t_j with t_j = -v_j log p, plus tail in [-k v log p, 0] d^-N/(d-1)
    head = -sum(Fraction(vj, d ** (j + 1)) for j, vj in enumerate(coeffs))
    tail_lo = Fraction(-k * v, d**steps * (d - 1))
    lp = log_int(p)
    return lp * head + RBound.hull(tail_lo, 0) * lp


def padic_increments(f: RatMap, form: list[int], p: int, steps: int) -> tuple[list[int], int]:
    """Valuations v_j of the contents of the successive image resultants."""
    k = len(form) - 1
    v = vint(f.res, p)
    prec = steps * k * v + 1
    mod = p**prec
    g = [_sym(c % mod, mod) for c in form]
    out = []
    num, den = list(f.num), list(f.den)
    for _ in range(steps):
        img = P.image_form(g, num, den)
        mod = p**prec
        red = [c % mod for c in img]
        nz = [c for c in red if c]
        if not nz:
            raise ArithmeticError("p-adic precision exhausted")
        vj = min(vint(c, p) for c in nz)
        if vj > k * v:
            raise ArithmeticError("escape increment outside its proven range")
        out.append(vj)
        prec -= vj
        mod = p**prec
        g = [_sym((c // p**vj) % mod, mod) for c in red]
    return out, sum(out)


def _sym(c: int, mod: int) -> int:
    return c - mod if c > mod // 2 else c
