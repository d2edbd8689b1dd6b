"""Finite-difference operators on radial and planar grids.

All stencils are second order. Operators return values on every node but
only the ``evaluated`` nodes of the result carry meaning.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np
import scipy.sparse as sp

from .structures import Grid, PlanarGrid, RadialGrid, ScalarField


def _radial_laplacian(values: np.ndarray, grid: RadialGrid) -> np.ndarray:
    h = grid.h
    r = grid.r
    out = np.zeros_like(values)
    center = values[1:-1]
    ahead = values[2:]
    behind = values[:-2]
    out[1:-1] = (ahead - 2.0 * center + behind) / h**2 + (ahead - behind) / (
        2.0 * h * r[1:-1]
    )
    # Regular at the origin: u_rr + u_r / r -> 2 u_rr
    out[0] = 4.0 * (values[1] - values[0]) / h**2
    return out


def _planar_laplacian(values: np.ndarray, grid: PlanarGrid) -> np.ndarray:
    h = grid.h
    out = np.zeros_like(values)
    out[1:-1, 1:-1] = (
        values[2:, 1:-1]
        + values[:-2, 1:-1]
        + values[1:-1, 2:]
        + values[1:-1, :-2]
        - 4.0 * values[1:-1, 1:-1]
    ) / h**2
    return out


def laplacian_values(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Apply the grid Laplacian to a raw (possibly complex) node array."""
    if isinstance(grid, RadialGrid):
        return _radial_laplacian(values, grid)
    return _planar_laplacian(values, grid)


def laplacian(field: ScalarField) -> ScalarField:
    """Discrete Laplacian Δ_h of a field; the boundary is left unevaluated.

    Radial grids use the axisymmetric operator u_rr + u_r / r with its
    regular limit at r = 0. Planar grids use the 5-point stencil.
    """
    grid = field.grid
    return ScalarField(grid, laplacian_values(field.values, grid), grid.interior_mask)


@lru_cache(maxsize=32)
def laplacian_matrix(grid: Grid) -> sp.csr_matrix:
    """Sparse matrix of Δ_h on flattened nodes; boundary rows are empty."""
    if isinstance(grid, RadialGrid):
        N, h = grid.N, grid.h
        r = grid.r
        main = np.full(N + 1, -2.0 / h**2)
        upper = np.zeros(N)
        lower = np.zeros(N)
        upper[1:] = 1.0 / h**2 + 1.0 / (2.0 * h * r[1:-1])
        lower[:-1] = 1.0 / h**2 - 1.0 / (2.0 * h * r[1:-1])
        main[0] = -4.0 / h**2
        upper[0] = 4.0 / h**2
        main[-1] = 0.0
        matrix = sp.diags([lower, main, upper], [-1, 0, 1], format="csr")
    else:
        size = grid.N + 1
        second = sp.diags(
            [np.ones(size - 1), np.full(size, -2.0), np.ones(size - 1)],
            [-1, 0, 1],
        ) / grid.h**2
        eye = sp.identity(size)
        full = sp.kron(second, eye) + sp.kron(eye, second)
        rows = sp.diags(grid.interior_mask.ravel().astype(float))
        matrix = (rows @ full).tocsr()
    matrix.eliminate_zeros()
    return matrix


def radial_derivative(values: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """d/dr by central differences, one-sided second order at both ends."""
    return np.gradient(values, grid.h, edge_order=2)


def radial_dz(field: ScalarField, theta: float) -> np.ndarray:
    """∂_z of a radial field along the ray of angle θ: f'(r)·e^{-iθ}/2."""
    if not isinstance(field.grid, RadialGrid):
        raise ValueError("radial_dz needs a field on a RadialGrid")
    return radial_derivative(field.values, field.grid) * np.exp(-1j * theta) / 2.0


def dz_derivative(field: ScalarField) -> np.ndarray:
    """∂_z = (∂_x - i∂_y)/2 on a planar grid; interior nodes are central."""
    grid = field.grid
    if not isinstance(grid, PlanarGrid):
        raise ValueError("dz_derivative needs a field on a PlanarGrid")
    fx, fy = np.gradient(field.values, grid.h, grid.h, edge_order=2)
    return (fx - 1j * fy) / 2.0


def to_banded(matrix: sp.spmatrix, lower: int, upper: int) -> np.ndarray:
    """Pack a sparse band matrix into the (l + u + 1, n) LAPACK layout.

    Raises:
        ValueError: if an entry lies outside the declared band.
    """
    coo = sp.coo_matrix(matrix)
    coo.sum_duplicates()
    offsets = coo.row - coo.col
    if offsets.size and (offsets.max() > lower or -offsets.min() > upper):
        raise ValueError(f"Matrix is not within band ({lower}, {upper})")
    packed = np.zeros((lower + upper + 1, coo.shape[1]), dtype=coo.dtype)
    packed[upper + offsets, coo.col] = coo.data
    return packed


def band_widths(matrix: sp.spmatrix) -> Tuple[int, int]:
    """Lower and upper bandwidths of a sparse matrix."""
    coo = sp.coo_matrix(matrix)
    if coo.nnz == 0:
        return 0, 0
    offsets = coo.row - coo.col
    return int(max(offsets.max(), 0)), int(max(-offsets.min(), 0))
