from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from critheight.dynmap import (
    ConjugateSet,
    DegenerateMapError,
    apply,
    branch_divisor,
    conjugate,
    fixed_zero_map,
    make_map,
    milnor2,
    polynomial_map,
    pushforward_divisor,
)
from critheight.exactnum import ARCH, IntPoly, Place, RBound, log_abs, prime_factors
from critheight.heights import (
    canonical_height,
    canonical_height_divisor,
    canonical_height_set,
    crit_height_iterate_identity_check,
    critical_height,
    green_local,
    hom_height,
    is_pcf,
    is_preperiodic_set,
    local_places,
    padic_phi,
    step_bounds,
    weil_height,
)
from strategies import mobius, rat_maps, small_rationals

SQUARE = make_map([0, 0, 1], [1, 0, 0])
LOG2 = log_abs(2, ARCH)


def test_weil_height_examples():
    assert weil_height([1, 1]) == RBound.zero()
    assert weil_height([3, 6]).overlaps(LOG2)
    assert weil_height([F(2, 3), -5, 1]).overlaps(log_abs(15, ARCH))
    with pytest.raises(ValueError):
        weil_height([0, 0])


def test_hom_height_examples():
    assert hom_height(SQUARE) == RBound.zero()
    assert hom_height(polynomial_map([2, 0, 1])).overlaps(LOG2)
    assert hom_height(milnor2(2, 3)).overlaps(log_abs(3, ARCH))


def test_green_local_examples():
    assert green_local(SQUARE, 2, ARCH).contains(0)
    assert green_local(SQUARE, F(1, 2), ARCH).overlaps(LOG2)
    with pytest.raises(ValueError, match="pole"):
        green_local(SQUARE, 0, ARCH)


def test_canonical_height_examples():
    cube = make_map([0, 0, 0, 1], [1, 0, 0, 0])
    assert canonical_height(cube, 2).overlaps(LOG2)
    assert canonical_height(polynomial_map([-1, 0, 1]), 0) == RBound.zero()


@pytest.mark.parametrize("c, z", [(2, 0), (1, 0), (-3, 1), (F(1, 2), 3)])
def test_canonical_height_matches_naive_iteration(c, z):
    f = polynomial_map([c, 0, 1])
    b = canonical_height(f, z, 1e-9)
    x, y = F(z).numerator, F(z).denominator
    val, n, tail = oracles.naive_canonical_height(list(f.num), list(f.den), x, y)
    assert n >= 10
    assert float(b.lo) - float(tail) - 1e-12 <= val <= float(b.hi) + float(tail) + 1e-12
    assert float(b.width()) <= 1e-9


def test_canonical_height_set_examples():
    two = ConjugateSet(IntPoly.from_coeffs([-2, 0, 1]))
    assert canonical_height_set(SQUARE, two).overlaps(LOG2)
    golden = ConjugateSet(IntPoly.from_coeffs([-1, -1, 1]))  # fixed points of z^2 - 1
    assert canonical_height_set(polynomial_map([-1, 0, 1]), golden).contains(0)
    f = polynomial_map([2, 0, 1])
    assert canonical_height_set(f, ConjugateSet.point((3, 1))).overlaps(canonical_height(f, 3))


def test_critical_height_examples():
    for c in (0, -1, -2):
        b = critical_height(polynomial_map([c, 0, 1]))
        assert b.contains(0) and b.width() <= F(1, 10**6)
        assert is_pcf(polynomial_map([c, 0, 1])) is True
    f = polynomial_map([2, 0, 1])
    assert critical_height(f).overlaps(canonical_height(f, 0))
    assert is_pcf(f) is None


@pytest.mark.parametrize("f, n", [(SQUARE, 3), (polynomial_map([2, 0, 1]), 2), (milnor2(2, 3), 2)])
def test_iterate_identity_examples(f, n):
    assert crit_height_iterate_identity_check(f, n).pass_


def test_preperiodic_detection():
    f = polynomial_map([-1, 0, 1])
    assert is_preperiodic_set(f, ConjugateSet.point((0, 1))) is True
    assert is_preperiodic_set(polynomial_map([2, 0, 1]), ConjugateSet.point((0, 1)), budget=6) is None


# --- properties ---------------------------------------------------------------------------------

@settings(max_examples=40)
@given(rat_maps(h=10), small_rationals(10))
def test_functional_equation(f, z):
    a = canonical_height(f, apply(f, z), 1e-6)
    b = canonical_height(f, z, 1e-6) * f.degree
    assert a.overlaps(b)


def _global_step(f):
    lo, hi = RBound.zero(), RBound.zero()
    for v in [ARCH] + [Place(p) for p in prime_factors(f.res)]:
        sb = step_bounds(f, v)
        lo, hi = lo + sb.lower, hi + sb.upper
    return lo, hi


@settings(max_examples=40)
@given(rat_maps(h=10), small_rationals(20))
def test_bounded_difference(f, z):
    diff = canonical_height(f, z) - weil_height([F(z).numerator, F(z).denominator])
    lo, hi = _global_step(f)
    d1 = f.degree - 1
    assert diff.hi >= (lo / d1).lo
    assert diff.lo <= (hi / d1).hi


@settings(max_examples=30)
@given(rat_maps(h=10), small_rationals(10))
def test_canonical_heights_are_nonnegative(f, z):
    assert canonical_height(f, z).hi >= 0
    assert critical_height(f).hi >= 0


@st.composite
def fixed_zero_maps(draw, h=6):
    lam = draw(small_rationals(h, nonzero=True))
    d = draw(st.sampled_from([2, 3]))
    a = draw(st.lists(small_rationals(h), min_size=d - 1, max_size=d - 1))
    b = draw(st.lists(small_rationals(h), min_size=d - 1, max_size=d - 1))
    assume(a[-1] != 0)
    try:
        return fixed_zero_map(lam, a, b)
    except DegenerateMapError:
        assume(False)


@settings(max_examples=30)
@given(fixed_zero_maps(), small_rationals(8, nonzero=True))
def test_local_greens_functions_sum_to_canonical_height(f, z):
    z = F(z)
    total = RBound.zero()
    for v in local_places(f, extra=[z.numerator, z.denominator]):
        total = total + green_local(f, z, v)
    assert total.overlaps(canonical_height(f, z))


@settings(max_examples=30)
@given(rat_maps(h=8), st.sampled_from([2, 3, 5, 7, 11, 13]), small_rationals(8))
def test_phi_vanishes_at_primes_of_good_reduction(f, p, z):
    assume(f.res % p != 0)
    z = F(z)
    assert padic_phi(f, [-z.numerator, z.denominator], p, 1e-6) == RBound.zero()


@settings(max_examples=20)
@given(rat_maps(degrees=(2,), h=6), st.integers(0, 2))
def test_branch_divisor_scaling(f, k):
    D = branch_divisor(f)
    for _ in range(k):
        D = pushforward_divisor(f, D)
    lhs = canonical_height_divisor(f, D, 1e-6)
    rhs = critical_height(f, 1e-6 / f.degree ** (k + 1)) * f.degree ** (k + 1)
    assert lhs.overlaps(rhs)


@settings(max_examples=25)
@given(rat_maps(degrees=(2,), h=6), mobius(h=3))
def test_critical_height_is_conjugation_invariant(f, psi):
    assert critical_height(conjugate(f, psi)).overlaps(critical_height(f))


def test_naive_oracle_self_consistency():
    with mpmath.workdps(30):
        val, n, tail = oracles.naive_canonical_height([0, 0, 1], [1, 0, 0], 2, 1)
        assert abs(val - mpmath.log(2)) < 1e-25 and n > 5
