"""Rational maps of P^1 over Q: lifts, normal forms, iteration, critical data, multipliers."""
from .conjugates import (
    ConjugateSet,
    branch_divisor,
    branch_form_quadratic,
    branch_points_quadratic,
    critical_divisor,
    image_sets,
    merge,
    pushforward_divisor,
    pushforward_minpoly,
    sets_from_form,
    wronskian,
)
from .ratmap import (
    DEFAULT_DEGREE_CAP,
    DegenerateMapError,
    FixedZeroInfty,
    General,
    Milnor2,
    NormalFormTag,
    RatMap,
    SuperAttracting,
    apply,
    as_matrix,
    compose,
    conjugate,
    derivative_at,
    fixed_point_multiplier,
    fixed_points_rational,
    fixed_zero_map,
    flip,
    iterate_map,
    make_map,
    matmul,
    milnor2,
    mobius_apply,
    normalize_point,
    normalize_two_fixed,
    orbit,
    point_value,
    polynomial_map,
    r_local,
    resultant,
    sa_map,
    to_point,
)
from .spectrum import cycle_multiplier, multiplier_char_poly
