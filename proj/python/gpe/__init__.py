"""Galerkin truncation of the stochastic primitive equations in Gevrey classes."""

from ._core import (
    ConfigError,
    __version__,
    build_mode_set,
    cutoff_theta,
    nonlinear_q,
    norm,
    parse_config,
    project_d0,
    radius_schedule,
    random_field,
    run_ensemble,
    simulate,
)

__all__ = [
    "ConfigError",
    "__version__",
    "build_mode_set",
    "cutoff_theta",
    "nonlinear_q",
    "norm",
    "parse_config",
    "project_d0",
    "radius_schedule",
    "random_field",
    "run_ensemble",
    "simulate",
]
