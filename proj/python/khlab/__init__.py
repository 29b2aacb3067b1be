"""Kelvin-Helmholtz vortex-sheet verification toolkit."""

from ._core import (
    AliasingError,
    ArgumentError,
    DimensionError,
    DomainError,
    NumericalError,
    SolvabilityError,
    StabilityError,
    boundary_dispersion,
    check_syrovatskij,
    evaluate_stability,
    evolve_boundary_mode,
    gradient_norm_sq,
    growth_run,
    interface_flux_profile,
    mode_exponent,
    run,
    sen_gamma_squared,
    stability_map,
    verify_mode,
    wall_profiles,
)

__all__ = [name for name in dir() if not name.startswith("_")]
