"""Dirichlet solver for the metric error and radial comparison functions."""

from .bessel import bessel_i0, bessel_i0e, comparison_yk, solve_helmholtz_radial
from .newton import (
    BoundaryData,
    MetricSolution,
    SolveConfig,
    auto_grid_size,
    boundary_from_radial,
    metric_expansion_defect,
    solution_fields,
    solve_dirichlet,
    zero_solution,
)

__all__ = [
    "BoundaryData",
    "MetricSolution",
    "SolveConfig",
    "auto_grid_size",
    "bessel_i0",
    "bessel_i0e",
    "boundary_from_radial",
    "comparison_yk",
    "metric_expansion_defect",
    "solution_fields",
    "solve_dirichlet",
    "solve_helmholtz_radial",
    "zero_solution",
]
