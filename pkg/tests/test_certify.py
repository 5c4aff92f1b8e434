import json
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from critheight.certify import (
    INCONCLUSIVE,
    PASS,
    VIOLATION,
    Certificate,
    c0,
    c2,
    check_attraction,
    check_fixedzero_global,
    check_greens_lower,
    check_key,
    check_maincase,
    check_mainglobal,
    check_quad_k,
    check_root_coeff_bounds,
    check_sabranch,
    check_saest,
    check_theorem_geom,
    check_theorem_quad,
    constant_Cde,
    corollary_threshold,
    eps_v,
    eval_kbound,
    fibration_constants,
    geom_coefficient,
    greens_padic_coefficients,
    kbound_height_limit,
    quad_bound_constants,
)
from critheight.certify import constants as K
from critheight.certify.checks import greens_rhs
from critheight.dynmap import DegenerateMapError, fixed_zero_map, make_map, milnor2, polynomial_map, sa_map
from critheight.exactnum import ARCH, IntPoly, Place, RBound, log_abs, log_plus_abs
from critheight.heights import green_local
from strategies import milnor_params, small_rationals

SQUARE = make_map([0, 0, 1], [1, 0, 0])

CERT_KEYS = {"statement", "anchor", "inputs", "lhs", "rhs", "slack", "verdict", "witness", "prec"}


def mp(b: RBound) -> mpmath.mpf:
    q = (b.lo_q + b.hi_q) / 2
    return mpmath.mpf(q.numerator) / q.denominator


def encloses(b: RBound, ref, slop=mpmath.mpf(10) ** -40) -> bool:
    lo, hi = b.lo_q, b.hi_q
    return mpmath.mpf(lo.numerator) / lo.denominator - slop <= ref <= mpmath.mpf(hi.numerator) / hi.denominator + slop


# --- certificate semantics -------------------------------------------------------------------

bounds = st.tuples(st.fractions(-10, 10, max_denominator=50), st.fractions(0, 3, max_denominator=50)).map(
    lambda t: RBound.hull(t[0], t[0] + t[1]))


@given(bounds, bounds)
def test_verdict_follows_slack_enclosure(lhs, rhs):
    c = Certificate("t", "t", {}, lhs, rhs)
    assert c.slack.contains(lhs.lo_q - rhs.hi_q) and c.slack.contains(lhs.hi_q - rhs.lo_q)
    if c.verdict == PASS:
        assert lhs.lo_q >= rhs.hi_q
    elif c.verdict == VIOLATION:
        assert lhs.hi_q < rhs.lo_q
    else:
        assert c.verdict == INCONCLUSIVE and c.slack.lo < 0 <= c.slack.hi
    assert c.pass_ == (c.verdict == PASS)


def test_vacuous_pass_shape():
    c = Certificate.vacuous_pass("s", "a", {"x": 1}, "nothing to check")
    assert c.pass_ and c.vacuous and c.witness is None
    out = c.to_json()
    assert out["vacuous"] is True and out["note"] == "nothing to check"


def test_certificate_json_fields_and_digest():
    c = check_theorem_quad(2, 3)
    out = c.to_json()
    assert CERT_KEYS <= set(out)
    assert RBound.from_json(out["slack"]) == c.slack
    json.dumps(out)
    assert c.input_digest == check_theorem_quad(2, 3).input_digest
    assert c.input_digest != check_theorem_quad(3, 2).input_digest


# --- root and coefficient sizes ---------------------------------------------------------------

def test_root_coeff_examples():
    up, low = check_root_coeff_bounds(IntPoly.from_coeffs([-2, 0, 1]))
    assert up.pass_ and low.pass_
    up, low = check_root_coeff_bounds(IntPoly.from_coeffs([0, 0, 0, 1]))
    assert up.vacuous and low.vacuous and up.pass_ and low.pass_
    up, low = check_root_coeff_bounds(IntPoly.from_coeffs([-2, 0, 1]), Place(2))
    assert up.pass_ and low.pass_
    assert up.witness == {"lhs_over_log_p": "0", "rhs_over_log_p": "-1/2"}


@settings(max_examples=40)
@given(st.randoms(use_true_random=False), st.sampled_from([ARCH, Place(2), Place(3), Place(5)]))
def test_root_coeff_bounds_never_violated(rng, v):
    cs = oracles.random_primitive_poly(rng, max_deg=6, max_height=300)
    for c in check_root_coeff_bounds(IntPoly.from_coeffs(cs), v):
        assert c.verdict == PASS, c.summary()


# --- Green's functions and attraction --------------------------------------------------------------

def test_greens_lower_examples():
    assert check_greens_lower(SQUARE, F(3, 7)).pass_
    f = milnor2(2, 3)
    assert check_greens_lower(f, F(1, 5)).pass_
    assert check_greens_lower(f, F(1, 5), Place(5)).pass_
    with pytest.raises(ValueError):
        check_greens_lower(polynomial_map([1, 0, 1]), 2)
    with pytest.raises(ValueError):
        check_greens_lower(SQUARE, 0)


@st.composite
def fixed_zero_maps(draw, h=5):
    lam = draw(small_rationals(h, nonzero=True))
    d = draw(st.sampled_from([2, 3]))
    a = draw(st.lists(small_rationals(h), min_size=d - 1, max_size=d - 1))
    b = draw(st.lists(small_rationals(h), min_size=d - 1, max_size=d - 1))
    assume(a[-1] != 0)
    try:
        return fixed_zero_map(lam, a, b)
    except DegenerateMapError:
        assume(False)


@settings(max_examples=25)
@given(fixed_zero_maps(), small_rationals(8, nonzero=True), st.sampled_from([ARCH, Place(2), Place(3)]))
def test_greens_lower_never_violated(f, z, v):
    assert check_greens_lower(f, z, v).verdict != VIOLATION


@settings(max_examples=40)
@given(fixed_zero_maps(), small_rationals(12, nonzero=True), st.sampled_from([2, 3, 5, 7]))
def test_exact_padic_greens_route_matches_enclosures(f, z, p):
    exact = greens_padic_coefficients(f, z, p)
    assume(exact is not None)
    a, b = exact
    lp = log_abs(p, ARCH)
    assert green_local(f, z, Place(p)).overlaps(lp * a)
    rhs = log_plus_abs(1 / z, Place(p)) + greens_rhs(f, Place(p))
    assert rhs.overlaps(lp * b)


def test_exact_padic_greens_route_resolves_equality():
    f = make_map([0, 4, 5], [-5, 2, 0])
    c = check_greens_lower(f, F(6, 11), Place(2))
    assert c.pass_ and c.witness["lhs_over_log_p"] == c.witness["rhs_over_log_p"]
    assert greens_padic_coefficients(f, F(6, 11), 5) is None  # bad reduction at 5


def test_attraction_examples():
    c = check_attraction(fixed_zero_map(F(1, 100), [1], [2]))
    assert c.pass_ and c.witness is not None
    c = check_attraction(fixed_zero_map(F(1, 2), [1], [3]))
    assert c.pass_ and c.vacuous
    c = check_attraction(fixed_zero_map(7, [1], [2]), Place(7))
    assert c.pass_ and c.witness["count_in_disk"] == 1
    with pytest.raises(ValueError):
        check_attraction(sa_map(2, [1], [0, 0]))


@settings(max_examples=15)
@given(fixed_zero_maps(h=4), st.sampled_from([ARCH, Place(2), Place(3)]))
def test_attraction_never_violated(f, v):
    c = check_attraction(f, v)
    assert c.verdict != VIOLATION
    if c.vacuous:
        assert c.pass_ and c.witness is None


# --- per-k local and global bounds -----------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("v", [ARCH, Place(5)])
def test_key_and_maincase_examples(k, v):
    f = milnor2(F(1, 5), 3)
    assert check_key(f, k, v).pass_
    assert check_maincase(f, k, v).pass_


def test_key_rejects_wrong_form():
    with pytest.raises(ValueError):
        check_key(polynomial_map([1, 0, 1]), 1)


@pytest.mark.parametrize("lam", [2, -1])
def test_fixedzero_global_examples(lam):
    assert check_fixedzero_global(fixed_zero_map(lam, [1], [0]), 1).pass_


def test_mainglobal_examples():
    assert check_mainglobal(polynomial_map([0, 3, 1]), 1).pass_
    c = check_mainglobal(polynomial_map([1, 0, 1]), 1)
    assert c.pass_ and c.witness == {"gamma0": [1, 0], "lambda": "0"}
    with pytest.raises(ValueError, match="fixed pair"):
        check_mainglobal(make_map([1, 0, 1], [0, 1, 0]), 1)  # z + 1/z: only a parabolic fixed point
    with pytest.raises(ValueError, match="not a rational fixed point"):
        check_mainglobal(polynomial_map([0, 3, 1]), 1, gamma0=5)


# --- super-attracting family ----------------------------------------------------------------------

def test_theorem_geom_examples():
    assert check_theorem_geom(SQUARE).pass_
    assert check_theorem_geom(sa_map(2, [1], [0, 0])).pass_
    with pytest.raises(ValueError, match="normal form"):
        check_theorem_geom(milnor2(2, 3))


def test_sabranch_examples():
    assert check_sabranch(sa_map(2, [200], [0, 0])).pass_
    c = check_sabranch(sa_map(2, [1], [0, 0]))
    assert c.pass_ and c.vacuous
    assert check_sabranch(sa_map(2, [F(1, 5)], [0, 0]), Place(5)).pass_


@pytest.mark.parametrize("k", [1, 2])
def test_saest_examples(k):
    assert check_saest(sa_map(2, [200], [0, 0]), k).pass_


# --- quadratic family --------------------------------------------------------------------------------

@pytest.mark.parametrize("lam", [(0, 0), (2, 3), (F(1, 2), -4)])
def test_theorem_quad_examples(lam):
    assert check_theorem_quad(*lam).pass_


@settings(max_examples=20)
@given(milnor_params(h=6))
def test_theorem_quad_never_violated(lam):
    assert check_theorem_quad(*lam).verdict != VIOLATION


@pytest.mark.parametrize("lam, k", [((2, 3), 10), ((0, 0), 9), ((F(1, 3), 5), 12)])
def test_quad_k_certificates(lam, k):
    q = check_quad_k(*lam, k)
    assert q.quad.pass_ and q.quadbound.pass_ and q.swap.pass_
    assert q.swap.witness["conjugate_equals_swapped"] is True


@pytest.mark.parametrize("lam", [(3, F(1, 7)), (2, 3), (-5, 0)])
def test_higher_precision_never_flips_a_pass(lam):
    low = check_theorem_quad(*lam, prec=64)
    high = check_theorem_quad(*lam, prec=256)
    assert low.slack.overlaps(high.slack)
    if low.pass_:
        assert high.verdict != VIOLATION
    assert high.slack.width() <= low.slack.width()


def test_eval_kbound_examples():
    c = eval_kbound(13, 9, 0)
    with mpmath.workdps(50):
        ref = 42 * mpmath.log(2) + 18 * mpmath.log(1 + mpmath.sqrt(2))
        assert encloses(c.lhs, ref)
    assert c.pass_
    assert eval_kbound(10**6, 9, 0).verdict == VIOLATION
    with pytest.raises(ValueError, match="pole"):
        eval_kbound(13, 8, 0)


def test_kbound_limit_decreases_toward_threshold():
    prev = None
    for k in range(9, 41):
        lim = kbound_height_limit(k)
        assert lim.lo > corollary_threshold().hi
        if prev is not None and k > 12:
            assert lim.hi < prev.lo
        prev = lim


# --- explicit constants ----------------------------------------------------------------------------

def _cde_reference(d, e):
    # direct evaluation of the two-term constant, independent of the package
    D, E = mpmath.mpf(d), mpmath.mpf(e)
    base = 4 * D**2 - 2 * (E + 2) * D + E + 2
    t = mpmath.log(D) / mpmath.log(E)
    lcm = mpmath.log(oracles_lcm(d))
    first = (2 * D - E - 1) * mpmath.log(2 * mpmath.factorial(2 * d - 1)) / (D**2 * (D - 1) * base**t)
    inner = (2 * (D - E) / (E - 1)) * mpmath.log(3) + ((4 * E - 1) / (E - 1)) * mpmath.log(2) + (D / (E - 1)) * lcm
    second = E * inner / (D**2 * (D - 1) * base ** (t - 1))
    return first + second


def oracles_lcm(n):
    from math import lcm
    out = 1
    for m in range(1, n + 1):
        out = lcm(out, m)
    return out


@pytest.mark.parametrize("d, e", [(2, 2), (3, 2), (3, 3), (4, 3), (5, 2)])
def test_constant_Cde_matches_direct_formula(d, e):
    with mpmath.workdps(60):
        assert encloses(constant_Cde(d, e), _cde_reference(d, e))
        base = 4 * d * d - 2 * (e + 2) * d + e + 2
        ref = 1 / ((d - 1) * d * d * mpmath.power(base, mpmath.log(d) / mpmath.log(e)))
        assert encloses(geom_coefficient(d, e), ref)


def test_constant_values():
    assert abs(float(mp(constant_Cde(2, 2))) - 3.27446897813) < 1e-10
    assert geom_coefficient(2, 2) == RBound.exact(F(1, 16))
    assert abs(float(mp(c0(2))) - 71.5776096678) < 1e-9
    coef, const = quad_bound_constants()
    assert coef == F(1, 2048)
    assert F(1, 100) < const.lo_q and const.hi_q <= F(12, 1000)
    assert abs(float(mp(const)) - 0.0117494989465) < 1e-12
    assert c2(2).overlaps(log_abs(12, ARCH))
    assert corollary_threshold().overlaps(log_abs(12, ARCH))
    with pytest.raises(ValueError):
        quad_bound_constants(8)


def test_constants_against_direct_formulas():
    with mpmath.workdps(60):
        L2, L3 = mpmath.log(2), mpmath.log(3)
        silver = mpmath.log(1 + mpmath.sqrt(2))
        assert encloses(quad_bound_constants()[1], (4 * L2 + 20 * (2 * L2 + silver)) / 4096)
        for d in (2, 3, 4, 6):
            assert encloses(c2(d), (d - 1) * L3 + d * mpmath.log(oracles_lcm(d)))
        # c0(2): 2 log 24 + log 2 + 5 log 2 + 7 (9 log 2 + log 12)
        assert encloses(c0(2), 2 * mpmath.log(24) + 6 * L2 + 7 * (9 * L2 + mpmath.log(12)))


def test_eps_and_C_tables():
    assert eps_v(2) == F(1, 8) and eps_v(3) == F(1, 9) and eps_v(4) == F(1, 27)
    assert eps_v(2, Place(2)) == F(1, 4)
    assert eps_v(3, Place(3)) == F(1, 27)
    assert eps_v(2, Place(7)) == 1
    assert K.C_v(3) == 9 and K.C_v(3, Place(2)) == 1
    assert K.sa_C_v(3, 2, Place(5)) == RBound.zero()


# frozen at 160 bits: any change to the constant formulas shows up here bit for bit
FROZEN = {
    "c2_2": (c2, (2,), {"lo": {"mantissa": 907923784319902754558954857534126039180236468809, "exponent": -158},
                        "hi": {"mantissa": 453961892159951377279477428767063019590118234405, "exponent": -157}}),
    "c0_2": (c0, (2,), {"lo": {"mantissa": 408635912991376145370144437056059510051299346609, "exponent": -152},
                        "hi": {"mantissa": 408635912991376145370144437056059510051299346611, "exponent": -152}}),
    "Cde_2_2": (constant_Cde, (2, 2),
                {"lo": {"mantissa": 598205221616055188593797805086765623991809395543, "exponent": -157},
                 "hi": {"mantissa": 598205221616055188593797805086765623991809395545, "exponent": -157}}),
    "Cde_3_2": (constant_Cde, (3, 2),
                {"lo": {"mantissa": 415021337616590640988499999227747103951095971811, "exponent": -160},
                 "hi": {"mantissa": 415021337616590640988499999227747103951095971823, "exponent": -160}}),
    "quad": (lambda: quad_bound_constants()[1], (),
             {"lo": {"mantissa": 1099002364683913478387607471503447579878589325995, "exponent": -166},
              "hi": {"mantissa": 1099002364683913478387607471503447579878589325999, "exponent": -166}}),
}


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_constants_match_frozen_values(name):
    fn, args, frozen = FROZEN[name]
    assert fn(*args).to_json() == frozen


def test_fibration_constants():
    fc = fibration_constants(2, 1, 1)
    assert abs(float(mp(fc.exact)) - 2.48490664979) < 1e-10
    assert abs(float(mp(fc.bounded)) - 5.25861228867) < 1e-10
    fc3 = fibration_constants(3, 1, 2)
    assert fc3.exact.hi < fc3.bounded.lo
    assert fc3.bounded_display.overlaps(fc3.bounded * 2)
    with pytest.raises(ValueError, match="cap"):
        fibration_constants(2, 5, 5)


@settings(max_examples=20)
@given(st.integers(2, 4), st.integers(1, 3), st.integers(1, 3))
def test_fibration_exact_below_bounded(d, n, m):
    assume(d ** (n * m) <= 2000)
    fc = fibration_constants(d, n, m)
    assert fc.exact.hi < fc.bounded.lo
