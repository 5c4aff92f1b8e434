"""Exact rationals, polynomials, valuations, Newton polygons and certified intervals."""
from fractions import Fraction as Rational

from .intpoly import IntPoly
from .padic import NewtonPolygon, count_roots_in_disk, newton_polygon
from .places import ARCH, Place, abs_v, lcm_upto, log_abs, log_plus_abs, prime_factors, val_p
from .rbound import (
    RBound,
    log_int,
    log_rational,
    rmax,
    rmin,
    rsum,
    working_prec,
    working_precision,
)
from .roots import RootBox, archimedean_root_enclosures, finite_root_heights, roots_height_sum

__all__ = [
    "ARCH",
    "IntPoly",
    "NewtonPolygon",
    "Place",
    "RBound",
    "Rational",
    "RootBox",
    "abs_v",
    "archimedean_root_enclosures",
    "count_roots_in_disk",
    "finite_root_heights",
    "lcm_upto",
    "log_abs",
    "log_int",
    "log_plus_abs",
    "log_rational",
    "newton_polygon",
    "prime_factors",
    "rmax",
    "rmin",
    "roots_height_sum",
    "rsum",
    "val_p",
    "working_prec",
    "working_precision",
]
