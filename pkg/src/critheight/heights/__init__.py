"""Weil heights, local Green's functions, canonical and critical heights."""
from .canonical import (
    DEFAULT_TOL,
    HeightValue,
    ToleranceError,
    canonical_height,
    canonical_height_divisor,
    canonical_height_set,
    crit_height_iterate_identity_check,
    critical_height,
    escape_at_zero,
    green_local,
    is_pcf,
    is_preperiodic_set,
    local_places,
    phi_local,
)
from .escape import StepBounds, arch_phi, bezout_cofactors, padic_phi, step_bounds
from .weil import height, hom_height, primitive_coordinates, weil_height

__all__ = [
    "DEFAULT_TOL", "HeightValue", "StepBounds", "ToleranceError", "arch_phi", "bezout_cofactors",
    "canonical_height", "canonical_height_divisor", "canonical_height_set",
    "crit_height_iterate_identity_check", "critical_height", "escape_at_zero", "green_local", "height",
    "hom_height", "is_pcf", "is_preperiodic_set", "local_places", "padic_phi", "phi_local",
    "primitive_coordinates", "step_bounds", "weil_height",
]
