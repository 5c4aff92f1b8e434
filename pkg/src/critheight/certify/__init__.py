"""Certified verdicts on the explicit local and global height inequalities."""
from .certificate import INCONCLUSIVE, PASS, VIOLATION, Certificate, digest
from .checks import (
    CertificatePair,
    QuadKCertificates,
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
    eval_kbound,
    greens_padic_coefficients,
    kbound_height_limit,
    kbound_rhs,
    primed_branch_divisor,
    pushforward_k,
)
from .constants import (
    ExplicitConstants,
    FibrationConstants,
    c0,
    c2,
    constant_Cde,
    corollary_threshold,
    eps_v,
    fibration_constants,
    geom_coefficient,
    quad_bound_constants,
)

__all__ = [
    "Certificate", "CertificatePair", "ExplicitConstants", "FibrationConstants", "INCONCLUSIVE", "PASS",
    "QuadKCertificates", "VIOLATION", "c0", "c2", "check_attraction", "check_fixedzero_global",
    "check_greens_lower", "check_key", "check_maincase", "check_mainglobal", "check_quad_k",
    "check_root_coeff_bounds", "check_sabranch", "check_saest", "check_theorem_geom",
    "check_theorem_quad", "constant_Cde", "corollary_threshold", "digest", "eps_v", "eval_kbound",
    "fibration_constants", "geom_coefficient", "greens_padic_coefficients", "kbound_height_limit", "kbound_rhs",
    "primed_branch_divisor", "pushforward_k", "quad_bound_constants",
]
