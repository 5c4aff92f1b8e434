"""Canonical heights, critical heights and local Green's functions with certified error."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpfr

from ..dynmap.conjugates import ConjugateSet, critical_divisor, image_sets
from ..dynmap.ratmap import DEFAULT_DEGREE_CAP, PointLike, RatMap, apply, iterate_map, to_point
from ..exactnum.places import ARCH, Place, log_abs, prime_factors
from ..exactnum.rbound import RBound, log_int
from .escape import arch_phi, padic_phi

DEFAULT_TOL = 1e-6
ORBIT_BUDGET = 12
ORBIT_BIT_CAP = 4096


class ToleranceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class HeightValue:
    """An enclosure tagged with what it measures and how it was computed."""

    value: RBound
    kind: str
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "value": self.value.to_json(), "provenance": self.provenance}


def _nonneg(b: RBound) -> RBound:
    zero = mpfr(0)
    return RBound(max(b.lo, zero), max(b.hi, zero))


# --- preperiodicity ------------------------------------------------------------

def _coeff_bits(S: ConjugateSet) -> int:
    return 0 if S.minpoly is None else max(abs(c) for c in S.minpoly.coeffs).bit_length()


def is_preperiodic_set(f: RatMap, S: ConjugateSet, budget: int = ORBIT_BUDGET) -> bool | None:
    """True if the forward orbit of the point set S is finite (detected exactly).

    None means undecided within the budget.
    """
    seen = {_set_key(S)}
    cur = ConjugateSet(S.minpoly, 1)
    for _ in range(budget):
        imgs = image_sets(f, cur)
        if len(imgs) != 1:
            raise ArithmeticError("image of an irreducible set split")
        cur = ConjugateSet(imgs[0].minpoly, 1)
        key = _set_key(cur)
        if key in seen:
            return True
        seen.add(key)
        if _coeff_bits(cur) > ORBIT_BIT_CAP:
            return None
    return None


def _set_key(S: ConjugateSet) -> tuple:
    return () if S.minpoly is None else S.minpoly.coeffs


def relevant_primes(f: RatMap) -> list[int]:
    """Primes at which a primitive integer form can have nonzero Phi_p."""
    return prime_factors(f.res)


# --- canonical heights ---------------------------------------------------------

def _set_sum(f: RatMap, S: ConjugateSet, tol: float) -> RBound:
    """Sum of canonical heights over the points of S, each counted once."""
    if is_preperiodic_set(f, S):
        return RBound.zero()
    form = S.form()
    primes = relevant_primes(f)
    target = tol / (1 + len(primes))
    total = arch_phi(f, form, target)
    for p in primes:
        total = total + padic_phi(f, form, p, target)
    return _nonneg(total)


def canonical_height_set(f: RatMap, S: ConjugateSet, tol: float = DEFAULT_TOL) -> RBound:
    """Enclosure of the sum of canonical heights over S, multiplicities included."""
    val = _set_sum(f, S, tol / S.multiplicity) * S.multiplicity
    if float(val.width()) > tol:
        raise ToleranceError(f"achieved width {float(val.width()):.3g} exceeds tol {tol:.3g}")
    return val


def canonical_height_divisor(f: RatMap, D: Sequence[ConjugateSet], tol: float = DEFAULT_TOL) -> RBound:
    total = RBound.zero()
    weight = sum(S.multiplicity for S in D) or 1
    for S in D:
        total = total + canonical_height_set(f, S, tol * S.multiplicity / weight)
    return total


def canonical_height(f: RatMap, z: PointLike, tol: float = DEFAULT_TOL) -> RBound:
    """Enclosure of the canonical height of a rational point, width at most tol."""
    pt = to_point(z)
    seen = {pt}
    cur = pt
    for _ in range(ORBIT_BUDGET):
        cur = apply(f, cur)
        if cur in seen:
            return RBound.zero()
        seen.add(cur)
        if max(abs(cur[0]), abs(cur[1])).bit_length() > ORBIT_BIT_CAP:
            break
    return canonical_height_set(f, ConjugateSet.point(pt), tol)


def critical_height(f: RatMap, tol: float = DEFAULT_TOL) -> RBound:
    """Sum of canonical heights of the critical points, with multiplicity."""
    return canonical_height_divisor(f, critical_divisor(f), tol)


def is_pcf(f: RatMap, budget: int = ORBIT_BUDGET) -> bool | None:
    """Exact post-critical finiteness test; None when undecided within the budget."""
    verdicts = [is_preperiodic_set(f, S, budget) for S in critical_divisor(f)]
    return True if all(v is True for v in verdicts) else None


# --- local Green's function ----------------------------------------------------

def phi_local(f: RatMap, form: list[int], v: Place, tol: float = DEFAULT_TOL) -> RBound:
    """Phi_v(G) for a primitive integer form G."""
    if v.is_archimedean:
        return arch_phi(f, form, tol)
    return padic_phi(f, form, v.p, tol)


def escape_at_zero(f: RatMap, v: Place, tol: float = DEFAULT_TOL) -> RBound:
    """H_v(0, 1) for the canonical lift; exact when 0 is fixed."""
    if f.num[0] == 0:
        # F(0, 1) = (0, b_0), so F^n(0, 1) = (0, b_0^(1 + d + ... + d^(n-1)))
        return log_abs(f.den[0], v) / (f.degree - 1)
    return phi_local(f, [0, 1], v, tol)


def green_local(f: RatMap, z, v: Place = ARCH, tol: float = DEFAULT_TOL) -> RBound:
    """Enclosure of g_f(D, 0) at the place v, for a point or conjugate set D.

    Uses g_f(D, 0) = Phi_v(G) - log |G(0, 1)|_v + deg(G) (H_v(0, 1) - r_v), which
    does not depend on the lift of f.
    """
    if isinstance(z, ConjugateSet):
        S = z
    else:
        pt = to_point(z)
        if pt == (0, 1):
            raise ValueError("pairing at its pole: z = 0")
        S = ConjugateSet.point(pt)
    form = S.form()
    if form[0] == 0:
        raise ValueError("pairing at its pole: the set contains 0")
    k = len(form) - 1
    d = f.degree
    r = log_abs(f.res, v) / (d * (d - 1))
    target = tol / (2 * S.multiplicity)
    val = phi_local(f, form, v, target) - log_abs(form[0], v) + (escape_at_zero(f, v, target) - r) * k
    return val * S.multiplicity


def local_places(f: RatMap, extra: Sequence[int] = ()) -> list[Place]:
    """Archimedean place plus every prime that can carry a nonzero local term."""
    ps = set(prime_factors(f.res)) | set(prime_factors(f.den[0]) if f.den[0] else [])
    for e in extra:
        ps |= set(prime_factors(e))
    return [ARCH] + [Place(p) for p in sorted(ps)]


# --- iterate identity ------------------------------------------------------------

def crit_height_iterate_identity_check(f: RatMap, n: int, tol: float = DEFAULT_TOL,
                                       cap: int = DEFAULT_DEGREE_CAP):
    """Certificate that the critical height of f^n matches n times that of f.

    Encoded as ``width budget >= |difference|``: it passes exactly when the two
    enclosures overlap.
    """
    from ..certify.certificate import Certificate

    g = iterate_map(f, n, cap)
    a = critical_height(g, tol)
    b = critical_height(f, tol / n) * n
    diff = (a - b).abs()
    budget = RBound.exact(a.width() + b.width())
    inputs = {"map": str(f), "n": n, "tol": tol}
    return Certificate("crit-height-iterate", "iterate identity for the critical height",
                       inputs, budget, diff, {"hcrit_iterate": a.to_json(), "n_hcrit": b.to_json()})
