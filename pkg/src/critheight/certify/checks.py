"""Certificates for the explicit local and global height inequalities.

Each check evaluates both sides as enclosures and returns a Certificate for
``lhs >= rhs``. Local checks work with the normalization in which the
denominator's constant term is 1: there ``||f||_v`` is the max of 1 and the
coefficients, and ``r_v(f) = log |Res|_v / (d(d-1))`` for that lift.
"""
from __future__ import annotations

from contextlib import nullcontext
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from ..dynmap.conjugates import ConjugateSet, critical_divisor, image_sets, pushforward_divisor
from ..dynmap.ratmap import (
    RatMap,
    conjugate,
    fixed_point_multiplier,
    fixed_points_rational,
    milnor2,
    normalize_two_fixed,
    to_point,
)
from ..exactnum import poly as P
from ..exactnum.intpoly import IntPoly
from ..exactnum.padic import count_roots_in_disk, newton_polygon
from ..exactnum.places import ARCH, Place, abs_v, log_abs, log_plus_abs, val_p
from ..exactnum.rbound import RBound, log_int, log_rational, rmax, working_prec, working_precision
from ..exactnum.roots import archimedean_root_enclosures
from ..heights.canonical import DEFAULT_TOL, ORBIT_BIT_CAP, critical_height, green_local
from ..heights.escape import CBox, _box_from_root, _eval_form
from ..heights.weil import height, hom_height, weil_height
from . import constants as K
from .certificate import Certificate

ZERO_ORBIT_BUDGET = 16


def _precision(prec: int | None):
    return working_precision(prec) if prec else nullcontext()


def _map_inputs(f: RatMap) -> dict:
    return {"num": list(f.num), "den": list(f.den)}


def _undecided(statement: str, anchor: str, inputs: dict, note: str, witness=None) -> Certificate:
    """Inconclusive certificate carrying no numeric evidence."""
    return Certificate(statement, anchor, inputs, RBound.zero(), RBound.hull(-1, 1), witness,
                       working_prec(), False, note)


# --- normal-form data ----------------------------------------------------------------

def log_norm(f: RatMap, v: Place = ARCH) -> RBound:
    """log ||f||_v = log max(1, |coefficients|_v) with the denominator's constant term 1."""
    num, den = f.normal_form_coefficients()
    top = max([Fraction(1)] + [abs_v(c, v) for c in num + den if c])
    return log_rational(top)


def r_normalized(f: RatMap, v: Place = ARCH) -> RBound:
    """r_v(f) for the lift whose denominator has constant term 1."""
    d = f.degree
    res = Fraction(f.res, f.den[0] ** (2 * d))
    return log_abs(res, v) / (d * (d - 1))


def root_polys(f: RatMap, e: int = 1) -> tuple[IntPoly | None, IntPoly]:
    """Polynomials whose roots are the alpha_i and beta_j.

    With the numerator z^e (a_e + a_(e+1) z + ...) and denominator 1 + b_1 z + ...,
    alpha_i are the inverse roots of a_e + ... + a_d z^(d-e) and beta_j those of
    1 + b_1 z + ... + b_(d-1) z^(d-1).
    """
    d = f.degree
    if f.den[d] != 0:
        raise ValueError("need f(inf) = inf (b_d = 0)")
    num = list(f.num[e:])
    den = list(f.den[:d])
    alpha = IntPoly.from_coeffs(list(reversed(num))) if len(num) > 1 else None
    beta = IntPoly.from_coeffs(list(reversed(den)))
    return alpha, beta


def _nonzero_polys(f: RatMap, e: int) -> list[IntPoly]:
    out = []
    for Q in root_polys(f, e):
        if Q is None:
            continue
        c = list(Q.coeffs)
        while c and c[0] == 0:
            c.pop(0)
        if len(c) > 1:
            out.append(IntPoly.from_coeffs(c))
    return out


def log_root_norm(f: RatMap, e: int = 1, v: Place = ARCH) -> RBound | None:
    """log max(|alpha_i|_v, |beta_j|_v); None when every alpha_i and beta_j vanishes."""
    polys = _nonzero_polys(f, e)
    if not polys:
        return None
    if v.is_archimedean:
        boxes = [b for Q in polys for b in archimedean_root_enclosures(Q, working_prec())]
        return rmax(b.abs2() for b in boxes).log() * Fraction(1, 2)
    m = min(newton_polygon(Q, v.p).min_valuation() for Q in polys)
    return log_int(v.p) * (-m)


def _min_root_valuation(f: RatMap, e: int, p: int) -> Fraction | None:
    polys = _nonzero_polys(f, e)
    if not polys:
        return None
    return min(newton_polygon(Q, p).min_valuation() for Q in polys)


# --- branch divisors -------------------------------------------------------------------

def reaches_zero(f: RatMap, S: ConjugateSet, budget: int = ZERO_ORBIT_BUDGET) -> bool:
    """True if the forward orbit of S lands on the fixed point 0.

    The search stops at a cycle, after ``budget`` steps, or once the minimal
    polynomial outgrows ORBIT_BIT_CAP bits; orbits through 0 are preperiodic
    and keep bounded height, so a growing orbit is treated as wandering.
    """
    zero = (0, 1)
    cur = ConjugateSet(S.minpoly, 1)
    seen = set()
    for _ in range(budget + 1):
        if cur.rational_point() == zero:
            return True
        key = cur.key()
        if key in seen:
            return False
        seen.add(key)
        if cur.minpoly is not None and max(abs(c) for c in cur.minpoly.coeffs).bit_length() > ORBIT_BIT_CAP:
            return False
        cur = ConjugateSet(image_sets(f, cur)[0].minpoly, 1)
    return False


def primed_branch_divisor(f: RatMap) -> list[ConjugateSet]:
    """Branch divisor with the points whose orbit reaches 0 removed."""
    kept = [S for S in critical_divisor(f) if not reaches_zero(f, S)]
    return pushforward_divisor(f, kept) if kept else []


def pushforward_k(f: RatMap, D: Sequence[ConjugateSet], k: int) -> list[ConjugateSet]:
    for _ in range(k):
        D = pushforward_divisor(f, D) if D else []
    return list(D)


def divisor_degree(D: Sequence[ConjugateSet]) -> int:
    return sum(S.degree for S in D)


def green_divisor(f: RatMap, D: Sequence[ConjugateSet], v: Place, tol: float) -> RBound:
    """g_f(D, 0) at the place v."""
    total = RBound.zero()
    if not D:
        return total
    share = tol / len(D)
    for S in D:
        total = total + green_local(f, S, v, share)
    return total


# --- root/coefficient bounds --------------------------------------------------------------

def _clip_below_zero(b: RBound) -> RBound:
    """Enclosure of max(x, 0) for x in b."""
    zero = RBound.zero()
    return RBound(max(b.lo, zero.lo), max(b.hi, zero.hi))


class CertificatePair(NamedTuple):
    first: Certificate
    second: Certificate


def check_root_coeff_bounds(Pz: IntPoly, v: Place = ARCH, prec: int | None = None) -> CertificatePair:
    """Root size against coefficient size for the monic polynomial P / lead(P).

    First: log+ ||c|| + log+ |2| >= log ||roots||. Second: k log+ ||roots|| +
    k log+ |2| >= log ||c||, with c the non-leading coefficients.
    """
    with _precision(prec):
        coeffs = [Fraction(c, Pz.lead) for c in Pz.coeffs]
        k = Pz.degree
        if k < 1:
            raise ValueError("need a polynomial of degree >= 1")
        inputs = {"poly": list(Pz.coeffs), "place": str(v)}
        lower_cs = [c for c in coeffs[:-1] if c]
        log_c = log_rational(max(abs_v(c, v) for c in lower_cs)) if lower_cs else None
        log_plus_c = RBound.zero() if log_c is None else _clip_below_zero(log_c)
        log2p = log_plus_abs(2, v)
        trimmed = list(Pz.coeffs)
        while trimmed[0] == 0:
            trimmed.pop(0)
        if not v.is_archimedean:
            return _root_coeff_padic(Pz, coeffs, trimmed, v, inputs)
        if len(trimmed) == 1:
            log_e = None
        else:
            boxes = archimedean_root_enclosures(IntPoly.from_coeffs(trimmed), working_prec())
            log_e = rmax(b.abs2() for b in boxes).log() * Fraction(1, 2)
        if log_e is None:
            upper = Certificate.vacuous_pass("roots-upper", "root size bound", inputs, "all roots are zero")
        else:
            upper = Certificate("roots-upper", "root size bound", inputs, log_plus_c + log2p, log_e,
                                None, working_prec())
        if log_c is None:
            lower = Certificate.vacuous_pass("roots-lower", "coefficient size bound", inputs,
                                             "all non-leading coefficients vanish")
        else:
            log_plus_e = RBound.zero() if log_e is None else _clip_below_zero(log_e)
            lower = Certificate("roots-lower", "coefficient size bound", inputs,
                                (log_plus_e + log2p) * k, log_c, None, working_prec())
        return CertificatePair(upper, lower)


def _root_coeff_padic(Pz: IntPoly, coeffs: list[Fraction], trimmed: list[int], v: Place,
                      inputs: dict) -> CertificatePair:
    # both sides are rational multiples of log p: compare the multiples exactly
    # and certify (lhs - rhs) log p >= 0, so equality cases still pass
    p, k = v.p, Pz.degree
    lp = log_int(p)
    lower_cs = [c for c in coeffs[:-1] if c]
    c_exp = -min(val_p(c, p) for c in lower_cs) if lower_cs else None
    e_exp = -newton_polygon(Pz, p).min_valuation() if len(trimmed) > 1 else None

    def cert(name, anchor, a, b):
        witness = {"lhs_over_log_p": str(a), "rhs_over_log_p": str(b)}
        return Certificate(name, anchor, inputs, lp * (a - b), RBound.zero(), witness, working_prec(),
                           note="compared as exact multiples of log p")

    if e_exp is None:
        upper = Certificate.vacuous_pass("roots-upper", "root size bound", inputs, "all roots are zero")
    else:
        upper = cert("roots-upper", "root size bound", Fraction(max(c_exp or 0, 0)), Fraction(e_exp))
    if c_exp is None:
        lower = Certificate.vacuous_pass("roots-lower", "coefficient size bound", inputs,
                                         "all non-leading coefficients vanish")
    else:
        lower = cert("roots-lower", "coefficient size bound", k * max(Fraction(e_exp or 0), Fraction(0)),
                     Fraction(c_exp))
    return CertificatePair(upper, lower)


# --- Green's function lower bound ------------------------------------------------------

def greens_rhs(f: RatMap, v: Place) -> RBound:
    """-(1/(d-1)) log+ |2d(2d-1)!| - ((2d-1)/(d-1)) log ||f|| + (d-1) r(f)."""
    d = f.degree
    return (-K.log_plus_int(K.greens_factorial(d), v) / (d - 1)
            - log_norm(f, v) * Fraction(2 * d - 1, d - 1) + r_normalized(f, v) * (d - 1))


def check_greens_lower(f: RatMap, z, v: Place = ARCH, tol: float = DEFAULT_TOL,
                       prec: int | None = None) -> Certificate:
    """g_f(z, 0) >= log+ |1/z| - (1/(d-1)) log+ |2d(2d-1)!| - ((2d-1)/(d-1)) log ||f|| + (d-1) r(f)."""
    if f.num[0] != 0 or f.den[0] == 0:
        raise ValueError("need f(0) = 0 with 0 not a pole")
    pt = to_point(z)
    if pt == (0, 1):
        raise ValueError("z must be nonzero")
    with _precision(prec):
        inputs = {**_map_inputs(f), "z": f"{pt[0]}/{pt[1]}" if pt[1] else "inf", "place": str(v), "tol": tol}
        exact = None if v.is_archimedean else greens_padic_coefficients(f, pt, v.p)
        if exact is not None:
            a, b = exact
            witness = {"lhs_over_log_p": str(a), "rhs_over_log_p": str(b)}
            return Certificate("greens-lower", "Green's function lower bound at the fixed point 0", inputs,
                               log_int(v.p) * (a - b), RBound.zero(), witness, working_prec(),
                               note="compared as exact multiples of log p")
        lhs = green_local(f, pt, v, tol)
        inv = Fraction(0) if pt[1] == 0 else Fraction(pt[1], pt[0])
        rhs = log_plus_abs(inv, v) + greens_rhs(f, v)
        return Certificate("greens-lower", "Green's function lower bound at the fixed point 0",
                           inputs, lhs, rhs, None, working_prec())


def greens_padic_coefficients(f: RatMap, z, p: int) -> tuple[Fraction, Fraction] | None:
    """Both sides of the Green's function bound at p as exact multiples of log p.

    Available when f has good reduction at p, where the escape term vanishes
    and every remaining term is a valuation; None otherwise.
    """
    if f.res % p == 0:
        return None
    pt = to_point(z)
    form = ConjugateSet.point(pt).form()
    if form[0] == 0:
        return None
    d, k = f.degree, len(form) - 1

    def lplus(x) -> Fraction:
        # log+ |x|_p / log p
        return Fraction(max(0, -val_p(x, p))) if x else Fraction(0)

    # g = -log |G(0,1)| + k (log |b_0| / (d-1) - r), all valuations
    lhs = Fraction(val_p(form[0], p)) + k * Fraction(-val_p(f.den[0], p), d - 1)
    num, den = f.normal_form_coefficients()
    norm = max([Fraction(0)] + [lplus(c) for c in num + den if c])
    r = Fraction(-val_p(Fraction(f.res, f.den[0] ** (2 * d)), p), d * (d - 1))
    inv = Fraction(0) if pt[1] == 0 else Fraction(pt[1], pt[0])
    rhs = (lplus(inv) - lplus(K.greens_factorial(d)) / (d - 1) - norm * Fraction(2 * d - 1, d - 1)
           + r * (d - 1))
    return lhs, rhs


# --- attraction --------------------------------------------------------------------------

def _eval_box(f: RatMap, z: CBox) -> CBox:
    one = CBox(RBound.exact(1))
    return _eval_form(list(f.num), z, one) / _eval_form(list(f.den), z, one)


@dataclass
class _Trial:
    worst: RBound | None
    k_worst: int
    lhs: RBound | None
    rhs: RBound | None
    ok: bool


def _orbit_trial(f: RatMap, z: CBox, kmax: int, bound) -> _Trial:
    """Iterate a box and compare log |f^k z| with bound(k) for k = 1..kmax."""
    worst = None
    best = _Trial(None, 0, None, None, False)
    for k in range(1, kmax + 1):
        try:
            z = _eval_box(f, z)
        except ZeroDivisionError:
            return best
        a2 = z.abs2()
        if a2.lo <= 0:
            return best
        log_abs_z = a2.log() * Fraction(1, 2)
        lhs_k, rhs_k = bound(k, log_abs_z)
        slack = lhs_k - rhs_k
        if worst is None or slack.lo < worst.lo:
            worst = slack
            best = _Trial(slack, k, lhs_k, rhs_k, False)
    best.ok = worst is not None and worst.lo >= 0
    return best


def _branch_candidates(f: RatMap) -> list[tuple[ConjugateSet, CBox, float]]:
    """Finite nonzero branch points not mapping to 0, with boxes, smallest modulus first."""
    out = []
    for S in primed_branch_divisor(f):
        if S.is_infinity:
            continue
        for b in archimedean_root_enclosures(S.minpoly, working_prec()):
            out.append((S, _box_from_root(b), float(b.re) ** 2 + float(b.im) ** 2))
    out.sort(key=lambda t: t[2])
    return out


def _branch_form_finite(f: RatMap) -> list[ConjugateSet]:
    return [S for S in primed_branch_divisor(f) if not S.is_infinity]


def check_attraction(f: RatMap, v: Place = ARCH, kmax: int = 6, prec: int | None = None) -> Certificate:
    """A branch point with 0 < |f^k(beta)| max(|alpha_i|, |beta_j|) <= (C_v |lambda|)^k for k <= kmax."""
    lam = f.fixed_zero_multiplier()
    if lam is None or lam == 0:
        raise ValueError("need fixed-zero-infty form with lambda != 0")
    d = f.degree
    inputs = {**_map_inputs(f), "place": str(v), "kmax": kmax}
    statement, anchor = "attraction", "an attracting fixed point attracts a branch point"
    eps = K.eps_v(d, v)
    if not abs_v(lam, v) < eps:
        return Certificate.vacuous_pass(statement, anchor, inputs,
                                        f"precondition not met: |lambda|_v >= eps_v = {eps}")
    with _precision(prec):
        if v.is_archimedean:
            return _attraction_arch(f, lam, kmax, inputs, statement, anchor)
        return _attraction_padic(f, lam, v.p, kmax, inputs, statement, anchor)


def _attraction_arch(f, lam, kmax, inputs, statement, anchor) -> Certificate:
    d = f.degree
    log_m = log_root_norm(f, 1, ARCH)
    log_c = log_rational(K.C_v(d, ARCH) * abs(lam))

    def bound(k, log_abs_z):
        return log_c * k, log_abs_z + log_m

    best = None
    for S, box, _ in _branch_candidates(f):
        trial = _orbit_trial(f, box, kmax, bound)
        witness = {"branch_minpoly": list(S.minpoly.coeffs), "re": str(box.re.mid()),
                   "im": str(box.im.mid()), "k_tightest": trial.k_worst}
        if trial.ok:
            return Certificate(statement, anchor, inputs, trial.lhs, trial.rhs, witness, working_prec())
        if trial.worst is not None and (best is None or trial.worst.hi > best[0].worst.hi):
            best = (trial, witness)
    if best is None:
        return _undecided(statement, anchor, inputs, "no branch point orbit could be enclosed")
    trial, witness = best
    return Certificate(statement, anchor, inputs, trial.lhs, trial.rhs, witness, working_prec(), False,
                       "no witness certified at this precision")


def _attraction_padic(f, lam, p, kmax, inputs, statement, anchor) -> Certificate:
    m = _min_root_valuation(f, 1, p)
    vlam = val_p(lam, p)
    lp = log_int(p)
    best = None
    for S in _branch_form_finite(f):
        inside = count_roots_in_disk(S.minpoly, p, 0, m, closed=False) - _zero_roots(S)
        if inside <= 0:
            continue
        npoly = newton_polygon(S.minpoly, p)
        vals = [w for w, _ in npoly.segments if w > -m]
        for w in vals:
            if _valuation_shift_holds(f, S, p, w, vlam, kmax):
                # log |f^k beta| = -(w + k v(lambda)) log p and log M = -m log p
                lhs = lp * (-kmax * vlam)
                rhs = lp * (-(w + kmax * vlam) - m)
                witness = {"branch_minpoly": list(S.minpoly.coeffs), "valuation": str(w),
                           "count_in_disk": inside, "radius_valuation": str(-m)}
                return Certificate(statement, anchor, inputs, lhs, rhs, witness, working_prec())
            best = S
    note = "no nonzero branch point in the disk" if best is None else "valuation shift not confirmed"
    return _undecided(statement, anchor, inputs, note)


def _zero_roots(S: ConjugateSet) -> int:
    return 1 if S.rational_point() == (0, 1) else 0


def _valuation_shift_holds(f: RatMap, S: ConjugateSet, p: int, w: Fraction, shift, kmax: int,
                           power: int = 1) -> bool:
    """Check that the images of the roots of S of valuation w have valuation
    power^k w + (k) shift (linear case) for k = 1..kmax, via Newton polygons."""
    want = sum(m for val, m in newton_polygon(S.minpoly, p).segments if val == w) * S.multiplicity
    cur = [S]
    for k in range(1, kmax + 1):
        nxt = []
        for T in cur:
            nxt.extend(image_sets(f, T))
        cur = [T for T in nxt if not T.is_infinity]
        target = w * power**k + k * shift if power == 1 else w * power**k
        have = 0
        for T in cur:
            if T.rational_point() == (0, 1):
                continue
            for val, mult in newton_polygon(T.minpoly, p).segments:
                if val == target:
                    have += mult * T.multiplicity
        if have < want:
            return False
    return True


# --- per-k local bounds --------------------------------------------------------------------

def _fixed_zero_lambda(f: RatMap) -> Fraction:
    lam = f.fixed_zero_multiplier()
    if lam is None or lam == 0:
        raise ValueError("need fixed-zero-infty form with lambda != 0 and b_d = 0")
    return lam


def _key_parts(f: RatMap, k: int, v: Place, tol: float):
    d = f.degree
    Bp = primed_branch_divisor(f)
    D = pushforward_k(f, Bp, k)
    lhs = green_divisor(f, D, v, tol)
    per_point = (log_norm(f, v) * Fraction(2 * d - 1, d - 1)
                 + K.log_plus_int(K.greens_factorial(d), v) / (d - 1) - r_normalized(f, v) * (d - 1))
    return lhs, per_point * divisor_degree(Bp), divisor_degree(Bp)


def check_key(f: RatMap, k: int, v: Place = ARCH, tol: float = DEFAULT_TOL,
              prec: int | None = None) -> Certificate:
    """g_f(f_*^k B', 0) >= (k-1) log+ |1/lambda| + k log eps_v + log ||alpha, beta||
    - log ||f|| - log+ |2| - deg(B') (correction)."""
    lam = _fixed_zero_lambda(f)
    if k < 1:
        raise ValueError("k must be at least 1")
    with _precision(prec):
        d = f.degree
        lhs, corr, deg = _key_parts(f, k, v, tol)
        rhs = (log_plus_abs(1 / lam, v) * (k - 1) + log_rational(K.eps_v(d, v)) * k
               + log_root_norm(f, 1, v) - log_norm(f, v) - log_plus_abs(2, v) - corr)
        inputs = {**_map_inputs(f), "k": k, "place": str(v), "tol": tol}
        return Certificate("key", "forward branch orbit bound", inputs, lhs, rhs,
                           {"deg_primed_branch": deg}, working_prec())


def check_maincase(f: RatMap, k: int, v: Place = ARCH, tol: float = DEFAULT_TOL,
                   prec: int | None = None) -> Certificate:
    """The sharper form k log+ |1/lambda| + k log eps_v + log ||alpha, beta|| - deg(B') (correction),
    valid when 0 < |lambda|_v < eps_v."""
    lam = _fixed_zero_lambda(f)
    d = f.degree
    inputs = {**_map_inputs(f), "k": k, "place": str(v), "tol": tol}
    statement, anchor = "key-maincase", "forward branch orbit bound, attracting case"
    eps = K.eps_v(d, v)
    if not abs_v(lam, v) < eps:
        return Certificate.vacuous_pass(statement, anchor, inputs,
                                        f"precondition not met: |lambda|_v >= eps_v = {eps}")
    with _precision(prec):
        lhs, corr, deg = _key_parts(f, k, v, tol)
        rhs = (log_plus_abs(1 / lam, v) * k + log_rational(eps) * k + log_root_norm(f, 1, v) - corr)
        return Certificate(statement, anchor, inputs, lhs, rhs, {"deg_primed_branch": deg}, working_prec())


# --- global bounds ---------------------------------------------------------------------------

def check_fixedzero_global(f: RatMap, k: int, tol: float = DEFAULT_TOL, prec: int | None = None) -> Certificate:
    """d^(k+1) hcrit(f) >= (k-1) h(lambda) - (4d-1) h_Hom(f) - 2 log(2d(2d-1)!) - log 2
    - k d log lcm(1..d) - k log max(8, 3^(d-1))."""
    lam = _fixed_zero_lambda(f)
    if k < 1:
        raise ValueError("k must be at least 1")
    with _precision(prec):
        d = f.degree
        hc = critical_height(f, tol / d ** (k + 1))
        lhs = hc * d ** (k + 1)
        rhs = height(lam) * (k - 1) - hom_height(f) * (4 * d - 1) - K.fixedzero_constant(d, k)
        inputs = {**_map_inputs(f), "k": k, "tol": tol}
        return Certificate("fixedzero-global", "global bound with fixed points at 0 and infinity",
                           inputs, lhs, rhs, {"lambda": str(lam), "hcrit": hc.to_json()}, working_prec())


def _choose_fixed_pair(f: RatMap, gamma0=None):
    fixed = fixed_points_rational(f)
    if gamma0 is not None:
        g0 = to_point(gamma0)
        if g0 not in fixed:
            raise ValueError(f"{g0} is not a rational fixed point")
        lam = fixed_point_multiplier(f, g0)
        others = [q for q in fixed if q != g0]
        return g0, lam, (others[0] if others else None)
    best = None
    for g0 in fixed:
        lam = fixed_point_multiplier(f, g0)
        others = [q for q in fixed if q != g0]
        if lam == 1:
            continue
        score = (bool(others), float(height(lam).hi) if lam else -1.0)
        if best is None or score > best[0]:
            best = (score, g0, lam, others[0] if others else None)
    if best is None:
        raise ValueError("needs rational fixed pair")
    return best[1], best[2], best[3]


def check_mainglobal(f: RatMap, k: int, tol: float = DEFAULT_TOL, gamma0=None,
                     prec: int | None = None) -> Certificate:
    """d^(k+1) hcrit(f) >= (k-1) h(lambda) - (4d-1)(d+2) h_Hom(f) - c0 k for a rational fixed point."""
    if k < 1:
        raise ValueError("k must be at least 1")
    g0, lam, ginf = _choose_fixed_pair(f, gamma0)
    with _precision(prec):
        d = f.degree
        witness = {"gamma0": list(g0), "lambda": str(lam)}
        if lam not in (0, 1):
            if ginf is None:
                raise ValueError("needs rational fixed pair")
            g, psi = normalize_two_fixed(f, g0, ginf)
            hg = hom_height(g)
            bound = hom_height(f) * (d + 2) + K.goodconj_constant(d)
            witness.update({"gamma_inf": list(ginf), "h_hom_conjugate": hg.to_json(),
                            "conjugation_bound_holds": bool(hg.hi <= bound.lo)})
        hc = critical_height(f, tol / d ** (k + 1))
        lhs = hc * d ** (k + 1)
        rhs = height(lam) * (k - 1) - hom_height(f) * ((4 * d - 1) * (d + 2)) - K.c0(d) * k
        inputs = {**_map_inputs(f), "k": k, "tol": tol}
        return Certificate("mainglobal", "global bound at any fixed point", inputs, lhs, rhs,
                           witness, working_prec())


# --- super-attracting case --------------------------------------------------------------------

def _sa_order(f: RatMap) -> int:
    e = f.sa_order()
    if e is None:
        raise ValueError("map is not in super-attracting normal form z^e + O(z^(e+1)) with f(inf) = inf")
    return e


def check_sabranch(f: RatMap, v: Place = ARCH, kmax: int = 6, prec: int | None = None) -> Certificate:
    """A branch point with log |f^k beta| < e^k log rho_f + e^k/(e-1) log+ |2^(e-1) 3^(d-e)|."""
    e = _sa_order(f)
    d = f.degree
    inputs = {**_map_inputs(f), "place": str(v), "kmax": kmax}
    statement, anchor = "sabranch", "super-attracting point attracts a branch point"
    with _precision(prec):
        log_m = log_root_norm(f, e, v)
        cv = K.sa_C_v(d, e, v)
        if log_m is None or not (cv - log_m).hi < 0:
            if log_m is not None and (cv - log_m).lo < 0:
                return _undecided(statement, anchor, inputs, "precondition undecided at this precision")
            return Certificate.vacuous_pass(statement, anchor, inputs, "precondition not met: log rho_f + C_v >= 0")
        log_rho = -log_m
        if v.is_archimedean:
            return _sabranch_arch(f, e, log_rho, kmax, inputs, statement, anchor)
        return _sabranch_padic(f, e, v.p, kmax, inputs, statement, anchor)


def _sabranch_arch(f, e, log_rho, kmax, inputs, statement, anchor) -> Certificate:
    d = f.degree
    extra = K.sa_decay_constant(d, e, ARCH) / (e - 1)

    def bound(k, log_abs_z):
        return (log_rho + extra) * e**k, log_abs_z

    best = None
    for S, box, _ in _branch_candidates(f):
        trial = _orbit_trial(f, box, kmax, bound)
        witness = {"branch_minpoly": list(S.minpoly.coeffs), "re": str(box.re.mid()),
                   "im": str(box.im.mid()), "k_tightest": trial.k_worst}
        if trial.ok:
            return Certificate(statement, anchor, inputs, trial.lhs, trial.rhs, witness, working_prec())
        if trial.worst is not None and (best is None or trial.worst.hi > best[0].worst.hi):
            best = (trial, witness)
    if best is None:
        return _undecided(statement, anchor, inputs, "no branch point orbit could be enclosed")
    trial, witness = best
    return Certificate(statement, anchor, inputs, trial.lhs, trial.rhs, witness, working_prec(), False,
                       "no witness certified at this precision")


def _sabranch_padic(f, e, p, kmax, inputs, statement, anchor) -> Certificate:
    m = _min_root_valuation(f, e, p)
    lp = log_int(p)
    for S in _branch_form_finite(f):
        inside = count_roots_in_disk(S.minpoly, p, 0, m, closed=False) - _zero_roots(S)
        if inside <= 0:
            continue
        for w, _ in newton_polygon(S.minpoly, p).segments:
            if w > -m and _valuation_shift_holds(f, S, p, w, 0, kmax, power=e):
                # log |f^k beta| = -e^k w log p against e^k log rho_f = e^k m log p
                lhs = lp * (m * e**kmax)
                rhs = lp * (-w * e**kmax)
                witness = {"branch_minpoly": list(S.minpoly.coeffs), "valuation": str(w),
                           "count_in_disk": inside, "radius_valuation": str(-m)}
                return Certificate(statement, anchor, inputs, lhs, rhs, witness, working_prec())
    return _undecided(statement, anchor, inputs, "no nonzero branch point certified in the disk")


def check_saest(f: RatMap, k: int, v: Place = ARCH, tol: float = DEFAULT_TOL,
                prec: int | None = None) -> Certificate:
    """g_f(f_*^k B', 0) + deg(B') ((1/(d-1)) log+ |2(2d-1)!| + ((2d-1)/(d-1)) log ||f|| - (d-1) r(f))
    >= (e^k/(d-1)) log ||f|| - e^k (C_v + 2 log+ |2| + ((d-e)/(e-1)) log+ |3|)."""
    e = _sa_order(f)
    if k < 1:
        raise ValueError("k must be at least 1")
    with _precision(prec):
        d = f.degree
        Bp = primed_branch_divisor(f)
        D = pushforward_k(f, Bp, k)
        g = green_divisor(f, D, v, tol)
        corr = (K.log_plus_int(K.sa_factorial(d), v) / (d - 1) + log_norm(f, v) * Fraction(2 * d - 1, d - 1)
                - r_normalized(f, v) * (d - 1))
        lhs = g + corr * divisor_degree(Bp)
        ek = e**k
        rhs = (log_norm(f, v) * Fraction(ek, d - 1)
               - (K.sa_C_v(d, e, v) + log_plus_abs(2, v) * 2 + log_plus_abs(3, v) * Fraction(d - e, e - 1)) * ek)
        inputs = {**_map_inputs(f), "k": k, "place": str(v), "tol": tol}
        return Certificate("saest", "super-attracting branch orbit bound", inputs, lhs, rhs,
                           {"deg_primed_branch": divisor_degree(Bp)}, working_prec())


def check_theorem_geom(f: RatMap, tol: float = DEFAULT_TOL, prec: int | None = None) -> Certificate:
    """hcrit(f) >= h_Hom(f) / ((d-1) d^2 (4d^2 - 2(e+2)d + e + 2)^(log d/log e)) - C_(d,e)."""
    e = _sa_order(f)
    with _precision(prec):
        d = f.degree
        lhs = critical_height(f, tol)
        rhs = K.geom_coefficient(d, e) * hom_height(f) - K.constant_Cde(d, e)
        inputs = {**_map_inputs(f), "e": e, "tol": tol}
        return Certificate("theorem-geom", "super-attracting lower bound", inputs, lhs, rhs,
                           {"Cde": K.constant_Cde(d, e).to_json()}, working_prec())


# --- quadratic family ------------------------------------------------------------------------

def h_p2(lam0, lam_inf) -> RBound:
    """Height of [1 : lam0 : lam_inf]."""
    return weil_height([1, Fraction(lam0), Fraction(lam_inf)])


def check_theorem_quad(lam0, lam_inf, tol: float = DEFAULT_TOL, prec: int | None = None) -> Certificate:
    """hcrit(f_(lam0, lam_inf)) >= h_P2(lam0, lam_inf)/2048 - 0.012."""
    lam0, lam_inf = Fraction(lam0), Fraction(lam_inf)
    f = milnor2(lam0, lam_inf)
    with _precision(prec):
        lhs = critical_height(f, tol)
        hp = h_p2(lam0, lam_inf)
        rhs = hp / 2048 - K.QUAD_THEOREM_CONSTANT
        inputs = {"lambda0": str(lam0), "lambda_inf": str(lam_inf), "tol": tol}
        return Certificate("theorem-quad", "quadratic critical height lower bound", inputs, lhs, rhs,
                           {"h_p2": hp.to_json()}, working_prec())


class QuadKCertificates(NamedTuple):
    quad: Certificate
    quadbound: Certificate
    swap: Certificate


def check_quad_k(lam0, lam_inf, k: int, tol: float = DEFAULT_TOL, prec: int | None = None) -> QuadKCertificates:
    """The k-parametrized quadratic bounds and the lam0 <-> lam_inf symmetry.

    quad: 2^(k+1) hcrit >= k h(lam_inf) - k(2 log 2 + log(sqrt2+1)) - 4 h_P2 - 2 log 2.
    quadbound: 2^(k+2) hcrit >= (k-8) h_P2 - 4 log 2 - 2k(2 log 2 + log(sqrt2+1)).
    swap: the map conjugated by 1/z equals the swapped family member, and the
    critical heights computed separately for both overlap.
    """
    lam0, lam_inf = Fraction(lam0), Fraction(lam_inf)
    if k < 1:
        raise ValueError("k must be at least 1")
    f = milnor2(lam0, lam_inf)
    g = milnor2(lam_inf, lam0)
    inputs = {"lambda0": str(lam0), "lambda_inf": str(lam_inf), "k": k, "tol": tol}
    with _precision(prec):
        hc = critical_height(f, tol / 2 ** (k + 2))
        hp = h_p2(lam0, lam_inf)
        log2 = log_int(2)
        eps_sum = log2 * 2 + K.log_silver()
        quad = Certificate("quad", "quadratic bound at the fixed point infinity", inputs, hc * 2 ** (k + 1),
                           height(lam_inf) * k - eps_sum * k - hp * 4 - log2 * 2, None, working_prec())
        quadbound = Certificate("quadbound", "symmetrized quadratic bound", inputs, hc * 2 ** (k + 2),
                                hp * (k - 8) - log2 * 4 - eps_sum * (2 * k), None, working_prec())
        hs = critical_height(g, tol)
        same_map = conjugate(f, ((0, 1), (1, 0))) == g
        budget = RBound.exact(hc.width() + hs.width())
        diff = (hc - hs).abs()
        swap = Certificate("quad-swap", "conjugation by 1/z swaps the multipliers", inputs,
                           budget if same_map else RBound.exact(-1), diff,
                           {"conjugate_equals_swapped": same_map, "hcrit": hc.to_json(),
                            "hcrit_swapped": hs.to_json()}, working_prec())
        return QuadKCertificates(quad, quadbound, swap)


def kbound_rhs(k: int, hcrit: RBound) -> RBound:
    """2^(k+1) (1 + 2/(k-8)) hcrit + (6k-12)/(k-8) log 2 + 2k/(k-8) log(sqrt2+1)."""
    if k == 8:
        raise ValueError("k = 8 is a pole of the bound")
    if k < 1:
        raise ValueError("k must be at least 1")
    return (hcrit * (Fraction(2 ** (k + 1)) * (1 + Fraction(2, k - 8)))
            + log_int(2) * Fraction(6 * k - 12, k - 8) + K.log_silver() * Fraction(2 * k, k - 8))


def kbound_height_limit(k: int, hcrit: RBound | None = None) -> RBound:
    """Upper bound on h(lambda) implied for one k: log 12 + kbound_rhs / k."""
    hcrit = RBound.zero() if hcrit is None else hcrit
    return K.corollary_threshold() + kbound_rhs(k, hcrit) / k


def eval_kbound(lam, k: int, hcrit: RBound, prec: int | None = None) -> Certificate:
    """k (h(lambda) - log 12) <= 2^(k+1)(1 + 2/(k-8)) hcrit + (6k-12)/(k-8) log 2 + 2k/(k-8) log(sqrt2+1)."""
    lam = Fraction(lam)
    with _precision(prec):
        lhs = kbound_rhs(k, RBound.exact(hcrit))
        rhs = (height(lam) - K.corollary_threshold()) * k
        inputs = {"lambda": str(lam), "k": k, "hcrit": RBound.exact(hcrit).to_json()}
        return Certificate("kbound", "height bound along a fixed-multiplier slice", inputs, lhs, rhs,
                           {"height_limit": kbound_height_limit(k, RBound.exact(hcrit)).to_json()},
                           working_prec())


def corollary_threshold() -> RBound:
    return K.corollary_threshold()


def constant_Cde(d: int, e: int) -> RBound:
    return K.constant_Cde(d, e)


def fibration_constants(d: int, n: int, m: int) -> K.FibrationConstants:
    return K.fibration_constants(d, n, m)
