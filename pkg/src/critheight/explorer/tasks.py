"""Task bodies: single computations, grid sweeps, PCF search and multiplier spectra.

Every grid point is computed by a top-level function taking plain data, so
points can be farmed out to worker processes and still give identical output.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import sympy

from ..certify import checks as C
from ..certify.certificate import INCONCLUSIVE, PASS, VIOLATION
from ..dynmap.conjugates import critical_divisor
from ..dynmap.ratmap import RatMap, make_map, milnor2
from ..dynmap.spectrum import multiplier_char_poly
from ..exactnum.intpoly import IntPoly
from ..exactnum.rbound import RBound
from ..exactnum.roots import roots_height_sum
from ..heights.canonical import (
    HeightValue,
    canonical_height,
    crit_height_iterate_identity_check,
    critical_height,
    green_local,
    is_preperiodic_set,
)
from ..heights.weil import height, hom_height, weil_height
from .jobs import (
    JobError,
    JobSpec,
    map_from_spec,
    parse_place,
    parse_point,
    parse_poly,
    parse_rational,
    point_to_affine,
)

PCF = "PCF"
NOT_PCF = "not-PCF"
BUDGET_EXHAUSTED = "budget-exhausted"

KBOUND_K = 9
KBOUND_TABLE = range(9, 41)


# --- grids ------------------------------------------------------------------------------

def farey_values(num_cap: int, den_cap: int) -> list[Fraction]:
    """Sorted {p/q : |p| <= num_cap, 1 <= q <= den_cap, gcd(p, q) = 1}."""
    vals = {Fraction(0)}
    for q in range(1, den_cap + 1):
        for p in range(1, num_cap + 1):
            if gcd(p, q) == 1:
                vals.add(Fraction(p, q))
                vals.add(Fraction(-p, q))
    return sorted(vals)


def farey_count(num_cap: int, den_cap: int) -> int:
    """Closed form 1 + 2 sum_e mu(e) floor(P/e) floor(Q/e) for the size of farey_values."""
    m = min(num_cap, den_cap)
    return 1 + 2 * sum(int(sympy.mobius(e)) * (num_cap // e) * (den_cap // e) for e in range(1, m + 1))


def quad_grid(num_cap: int, den_cap: int) -> list[tuple[Fraction, Fraction]]:
    """All pairs from the value grid, minus the degenerate lam0 lam_inf = 1."""
    vals = farey_values(num_cap, den_cap)
    return [(a, b) for a in vals for b in vals if a * b != 1]


def quad_grid_count(num_cap: int, den_cap: int) -> int:
    """N^2 minus the pairs (x, 1/x); x and 1/x both lie in the grid iff |p|, q <= min(P, Q)."""
    m = min(num_cap, den_cap)
    inverses = 2 * sum(int(sympy.mobius(e)) * (m // e) ** 2 for e in range(1, m + 1))
    return farey_count(num_cap, den_cap) ** 2 - inverses


# --- PCF test -------------------------------------------------------------------------

@dataclass(frozen=True)
class PcfVerdict:
    verdict: str
    evidence: dict

    def to_json(self) -> dict:
        return {"verdict": self.verdict, **self.evidence}


def pcf_test_exact(f: RatMap, budget: int = 12, tol: float = 1e-6) -> PcfVerdict:
    """PCF when every critical orbit closes up exactly within the budget.

    not-PCF needs proof: a critical-height enclosure with positive lower
    endpoint. Anything else is reported as budget-exhausted.
    """
    crit = critical_divisor(f)
    verdicts = [is_preperiodic_set(f, S, budget) for S in crit]
    if all(v is True for v in verdicts):
        return PcfVerdict(PCF, {"budget": budget})
    hc = critical_height(f, tol)
    if hc.lo > 0:
        return PcfVerdict(NOT_PCF, {"budget": budget, "hcrit": hc.to_json()})
    return PcfVerdict(BUDGET_EXHAUSTED, {"budget": budget, "hcrit": hc.to_json()})


# --- spectrum -------------------------------------------------------------------------

def spectrum(f: RatMap, n: int = 1) -> dict:
    """Polynomial of the multipliers of the fixed points of f^n and its root height sum."""
    poly = multiplier_char_poly(f, n)
    return {"n": n, "char_poly": list(poly.coeffs), "degree": poly.degree,
            "height_sum": roots_height_sum(poly).to_json()}


# --- per-point workers --------------------------------------------------------------------

def _hv(value: RBound, kind: str, **prov) -> dict:
    return HeightValue(value, kind, prov).to_json()


def quad_point(lam0: Fraction, lam_inf: Fraction, tol: float, budget: int) -> dict:
    cert = C.check_theorem_quad(lam0, lam_inf, tol)
    hc = cert.lhs
    out = {"heights": [_hv(hc, "Critical", family="milnor2"),
                       _hv(C.h_p2(lam0, lam_inf), "Weil", point="P2")],
           "certificates": [cert.to_json()], "extra": {}}
    if hc.lo <= 0:
        out["extra"]["pcf"] = pcf_test_exact(milnor2(lam0, lam_inf), budget, tol).to_json()
    return out


def pcf_point(family: str, params: tuple[Fraction, ...], tol: float, budget: int) -> dict:
    if family == "milnor2":
        f = milnor2(*params)
    else:
        f = make_map([1, params[0], 1], [0, 1, 0])
    return {"extra": {"pcf": pcf_test_exact(f, budget, tol).to_json()}}


def kbound_floor(lam: Fraction) -> RBound:
    """Best lower bound on hcrit along Milnor2(t, lam) from the k-parametrized bound, k = 9..40.

    The bound k (h - log 12) <= A_k hcrit + B_k gives hcrit >= (k (h - log 12) - B_k) / A_k.
    """
    best = RBound.zero()
    h = height(lam) - C.corollary_threshold()
    for k in KBOUND_TABLE:
        B = C.kbound_rhs(k, RBound.zero())
        A = Fraction(2 ** (k + 1)) * (1 + Fraction(2, k - 8))
        cand = (h * k - B) / A
        if cand.lo > best.lo:
            best = cand
    return best


def per1_point(lam: Fraction, t: Fraction, tol: float) -> dict:
    """Milnor2(t, lam): the multiplier at infinity is held at lam."""
    hc = critical_height(milnor2(t, lam), tol)
    hl = height(lam)
    extra: dict = {}
    if hl.lo > 0:
        extra["ratio"] = (hc / hl).to_json()
    cert = C.eval_kbound(lam, KBOUND_K, hc)
    return {"heights": [_hv(hc, "Critical", family="milnor2")], "certificates": [cert.to_json()], "extra": extra}


# --- single tasks -------------------------------------------------------------------------

def _need_map(job: JobSpec) -> RatMap:
    if job.map is None:
        raise JobError(f"task {job.task} needs a map (--map)")
    return map_from_spec(job.map)


def _need_point(job: JobSpec):
    if job.point is None:
        raise JobError(f"task {job.task} needs a point (--point)")
    return parse_point(job.point)


def _need(job: JobSpec, name: str) -> Fraction:
    val = getattr(job, name)
    if val is None:
        raise JobError(f"task {job.task} needs --{name.replace('_', '-')}")
    return parse_rational(val)


def height_task(job: JobSpec) -> dict:
    if job.point is not None:
        pt = _need_point(job)
        if pt == "inf":
            coords = [1, 0]
        elif len(pt) == 1:
            coords = [pt[0].numerator, pt[0].denominator]
        else:
            coords = pt
        return {"heights": [_hv(weil_height(coords), "Weil", point=job.point)]}
    f = _need_map(job)
    return {"heights": [_hv(hom_height(f), "Weil", coefficients=list(f.coefficients))]}


def canonical_task(job: JobSpec) -> dict:
    f = _need_map(job)
    z = point_to_affine(_need_point(job))
    return {"heights": [_hv(canonical_height(f, z, job.tol), "Canonical", map=str(f), point=job.point)]}


def green_task(job: JobSpec) -> dict:
    f = _need_map(job)
    z = point_to_affine(_need_point(job))
    v = parse_place(job.place)
    return {"heights": [_hv(green_local(f, z, v, job.tol), "Green-local", map=str(f), point=job.point,
                            place=str(v))]}


def crit_height_task(job: JobSpec) -> dict:
    f = _need_map(job)
    return {"heights": [_hv(critical_height(f, job.tol), "Critical", map=str(f))]}


def spectrum_task(job: JobSpec) -> dict:
    return {"extra": {"spectrum": spectrum(_need_map(job), job.n)}}


def verify_task(job: JobSpec) -> dict:
    """One certificate family for the statement named by the job."""
    st = job.statement
    v = parse_place(job.place)
    tol = job.tol
    if st == "theorem-quad":
        certs = [C.check_theorem_quad(_need(job, "lam0"), _need(job, "lam_inf"), tol)]
    elif st == "quad-k":
        certs = list(C.check_quad_k(_need(job, "lam0"), _need(job, "lam_inf"), job.k, tol))
    elif st == "kbound":
        hc = critical_height(_need_map(job), tol) if job.map is not None else RBound.zero()
        certs = [C.eval_kbound(_need(job, "lam"), job.k, hc)]
    elif st == "root-coeff":
        if job.poly is None:
            raise JobError("root-coeff needs --poly")
        certs = list(C.check_root_coeff_bounds(IntPoly.from_coeffs(parse_poly(job.poly)), v))
    else:
        f = _need_map(job)
        if st == "greens-lower":
            certs = [C.check_greens_lower(f, point_to_affine(_need_point(job)), v, tol)]
        elif st == "attraction":
            certs = [C.check_attraction(f, v, job.kmax)]
        elif st == "key":
            certs = [C.check_key(f, job.k, v, tol)]
        elif st == "maincase":
            certs = [C.check_maincase(f, job.k, v, tol)]
        elif st == "fixedzero-global":
            certs = [C.check_fixedzero_global(f, job.k, tol)]
        elif st == "mainglobal":
            certs = [C.check_mainglobal(f, job.k, tol)]
        elif st == "theorem-geom":
            certs = [C.check_theorem_geom(f, tol)]
        elif st == "sabranch":
            certs = [C.check_sabranch(f, v, job.kmax)]
        elif st == "saest":
            certs = [C.check_saest(f, job.k, v, tol)]
        elif st == "iterate-identity":
            certs = [crit_height_iterate_identity_check(f, job.n, tol)]
        else:
            raise JobError(f"unknown statement {st!r}")
    return {"certificates": [c.to_json() for c in certs]}


SINGLE_TASKS = {
    "height": height_task,
    "canonical-height": canonical_task,
    "green": green_task,
    "crit-height": crit_height_task,
    "spectrum": spectrum_task,
    "verify": verify_task,
}


def tally(verdicts) -> dict:
    out = {PASS: 0, VIOLATION: 0, INCONCLUSIVE: 0}
    for v in verdicts:
        out[v] += 1
    return out


__all__ = [
    "BUDGET_EXHAUSTED", "NOT_PCF", "PCF", "PcfVerdict", "farey_count", "farey_values", "kbound_floor",
    "pcf_test_exact", "quad_grid", "quad_grid_count", "spectrum",
]
