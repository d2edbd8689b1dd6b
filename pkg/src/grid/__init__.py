"""Grids, nodal fields and finite-difference calculus."""

from .calculus import (
    band_widths,
    dz_derivative,
    laplacian,
    laplacian_matrix,
    laplacian_values,
    radial_derivative,
    radial_dz,
    to_banded,
)
from .structures import Grid, PlanarGrid, RadialGrid, ScalarField

__all__ = [
    "Grid",
    "PlanarGrid",
    "RadialGrid",
    "ScalarField",
    "band_widths",
    "dz_derivative",
    "laplacian",
    "laplacian_matrix",
    "laplacian_values",
    "radial_derivative",
    "radial_dz",
    "to_banded",
]
