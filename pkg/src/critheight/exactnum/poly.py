"""Dense polynomial helpers on coefficient tuples.

Coefficients are stored low degree first. The same list doubles as a binary
form of a given formal degree ``n``: entry ``i`` multiplies ``x**i * y**(n-i)``.
Works over int or Fraction entries.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Coeffs = Sequence


def trim(a: Coeffs) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Coeffs) -> int:
    """Degree of a univariate polynomial; -1 for zero."""
    return len(trim(a)) - 1


def add(a: Coeffs, b: Coeffs) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def sub(a: Coeffs, b: Coeffs) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def scale(a: Coeffs, c) -> list:
    return [c * x for x in a]


def mul(a: Coeffs, b: Coeffs) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def power(a: Coeffs, n: int) -> list:
    out = [1]
    base = list(a)
    while n:
        if n & 1:
            out = mul(out, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return out


def evaluate(a: Coeffs, z):
    acc = 0
    for c in reversed(a):
        acc = acc * z + c
    return acc


def eval_form(a: Coeffs, x, y):
    """Evaluate a binary form of formal degree ``len(a) - 1`` at ``(x, y)``."""
    n = len(a) - 1
    acc = 0
    ypow = 1
    # Horner in x with y powers accumulated from the top
    xs = [1]
    for _ in range(n):
        xs.append(xs[-1] * x)
    for i in range(n, -1, -1):
        acc = acc + a[i] * xs[i] * ypow
        ypow = ypow * y
    return acc


def derivative(a: Coeffs) -> list:
    return [i * a[i] for i in range(1, len(a))]


def compose(a: Coeffs, b: Coeffs) -> list:
    """``a(b(z))``."""
    out: list = []
    for c in reversed(a):
        out = add(mul(out, b), [c])
    return out


def shift(a: Coeffs, t) -> list:
    """``a(z + t)``."""
    return compose(a, [t, 1])


def content(a: Coeffs) -> int:
    g = 0
    for c in a:
        g = gcd(g, int(c))
    return g


def clear_denominators(a: Coeffs) -> list[int]:
    den = 1
    for c in a:
        c = Fraction(c)
        den = den * c.denominator // gcd(den, c.denominator)
    return [int(Fraction(c) * den) for c in a]


def primitive(a: Coeffs, *, positive_top: bool = True) -> list[int]:
    """Integer primitive multiple of a rational coefficient list.

    The last nonzero coefficient is made positive when ``positive_top``.
    """
    ints = clear_denominators(a)
    g = content(ints)
    if g == 0:
        return ints
    ints = [c // g for c in ints]
    if positive_top:
        for c in reversed(ints):
            if c != 0:
                if c < 0:
                    ints = [-x for x in ints]
                break
    return ints


def homogenize(a: Coeffs, n: int) -> list:
    a = trim(a)
    if len(a) > n + 1:
        raise ValueError("formal degree smaller than actual degree")
    return list(a) + [0] * (n + 1 - len(a))


def form_mul(a: Coeffs, b: Coeffs) -> list:
    """Product of forms of formal degrees len-1; result has formal degree sum."""
    return mul(a, b) if a and b else [0] * (len(a) + len(b) - 1)


def form_power(a: Coeffs, n: int) -> list:
    if n == 0:
        return [1]
    out = power(a, n)
    return out + [0] * (n * (len(a) - 1) + 1 - len(out))


def form_compose(a: Coeffs, p: Coeffs, q: Coeffs) -> list:
    """``A(P(x, y), Q(x, y))`` for a form A and forms P, Q of a common degree."""
    n = len(a) - 1
    m = len(p) - 1
    out = [0] * (n * m + 1)
    ppow = [[1]]
    qpow = [[1]]
    for _ in range(n):
        ppow.append(form_mul(ppow[-1], p))
        qpow.append(form_mul(qpow[-1], q))
    for i, c in enumerate(a):
        if c == 0:
            continue
        term = form_mul(ppow[i], qpow[n - i])
        for j, t in enumerate(term):
            out[j] += c * t
    return out


def bareiss_det(mat: list[list[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def sylvester(a: Coeffs, b: Coeffs, na: int | None = None, nb: int | None = None) -> list[list]:
    """Sylvester matrix for formal degrees ``na`` and ``nb``."""
    na = len(a) - 1 if na is None else na
    nb = len(b) - 1 if nb is None else nb
    a = homogenize(a, na)
    b = homogenize(b, nb)
    size = na + nb
    rows = []
    ra = list(reversed(a))
    rb = list(reversed(b))
    for i in range(nb):
        rows.append([0] * i + ra + [0] * (size - na - 1 - i))
    for i in range(na):
        rows.append([0] * i + rb + [0] * (size - nb - 1 - i))
    return rows


def resultant(a: Coeffs, b: Coeffs, na: int | None = None, nb: int | None = None) -> int:
    """Resultant with formal degrees; equals the homogeneous resultant of the forms."""
    na = len(a) - 1 if na is None else na
    nb = len(b) - 1 if nb is None else nb
    if na == 0 and nb == 0:
        return 1
    if na == 0:
        return homogenize(a, 0)[0] ** nb
    if nb == 0:
        return homogenize(b, 0)[0] ** na
    mat = sylvester(a, b, na, nb)
    if all(isinstance(x, int) for row in mat for x in row):
        return bareiss_det(mat)
    return _fraction_det(mat)


def _fraction_det(mat: list[list]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in mat]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if m[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return det


def interpolate(xs: Sequence[int], ys: Sequence) -> list[Fraction]:
    """Coefficients of the interpolating polynomial (Newton divided differences)."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out: list = [Fraction(0)]
    for i in range(n - 1, -1, -1):
        out = add(mul(out, [-xs[i], 1]), [coef[i]])
    out = out + [Fraction(0)] * (n - len(out))
    return out[:n]


def image_form(g: Coeffs, num: Coeffs, den: Coeffs) -> list[int]:
    """``Res_{x,y}(G(x,y), Y*N(x,y) - X*D(x,y))`` as a form in (X, Y).

    ``num`` and ``den`` are forms of one common formal degree ``e``; ``g`` has
    formal degree ``k``. The result has formal degree ``k`` and vanishes exactly
    at the images of the roots of G under ``[x:y] -> [N:D]``.
    """
    k = len(g) - 1
    e = len(num) - 1
    if len(den) - 1 != e:
        raise ValueError("numerator and denominator forms need equal formal degree")
    xs = list(range(k + 1))
    vals = []
    for t in xs:
        b = [n - t * dd for n, dd in zip(num, den)]
        vals.append(resultant(g, b, k, e))
    coeffs = interpolate(xs, vals)
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("non-integral image form coefficient")
        out.append(int(c))
    return out
