"""Modified Bessel function I_0 and the radial comparison profiles built on it.

The comparison function y_k(r) = I_0(√k r) / I_0(√k R) solves Δy = k y with
y(R) = 1 and bounds the decay of each Toda mode.
"""

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from ..grid import RadialGrid, ScalarField, laplacian_matrix, to_banded

SERIES_LIMIT = 15.0
_SERIES_TERMS = 120
_ASYMPTOTIC_TERMS = 40


def _series_i0e(x: np.ndarray) -> np.ndarray:
    quarter = (x / 2.0) ** 2
    term = np.ones_like(x)
    total = np.ones_like(x)
    for m in range(1, _SERIES_TERMS):
        term = term * quarter / (m * m)
        total = total + term
        if np.all(term <= 1e-17 * total):
            break
    return total * np.exp(-x)


def _asymptotic_i0e(x: np.ndarray) -> np.ndarray:
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, _ASYMPTOTIC_TERMS):
        following = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        # stop at the smallest term of the divergent series
        if np.any(following >= term):
            break
        term = following
        total = total + term
        if np.all(term <= 1e-17 * total):
            break
    return total / np.sqrt(2.0 * np.pi * x)


def bessel_i0e(x) -> np.ndarray:
    """Exponentially scaled I_0(x)·e^{-|x|}; finite for every real x."""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    small = x <= SERIES_LIMIT
    if np.any(small):
        out[small] = _series_i0e(x[small])
    if np.any(~small):
        out[~small] = _asymptotic_i0e(x[~small])
    return out if out.ndim else float(out)


def bessel_i0(x) -> np.ndarray:
    """I_0(x): power series for x <= 15, asymptotic expansion beyond."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError(f"bessel_i0 needs non-negative arguments, got min {np.min(x)}")
    with np.errstate(over="ignore"):
        out = bessel_i0e(x) * np.exp(np.abs(x))
    return out if np.ndim(out) else float(out)


def comparison_yk(k: float, R: float, r) -> np.ndarray:
    """I_0(√k r) / I_0(√k R) evaluated without overflow."""
    if k <= 0:
        raise ValueError(f"Comparison parameter k must be positive, got {k}")
    if R <= 0:
        raise ValueError(f"Radius must be positive, got {R}")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r > R * (1 + 1e-12)):
        raise ValueError(f"Comparison radius must satisfy 0 <= r <= R = {R}, got [{np.min(r)}, {np.max(r)}]")
    root = np.sqrt(k)
    ratio = bessel_i0e(root * r) / bessel_i0e(root * R) * np.exp(root * (r - R))
    return ratio if np.ndim(ratio) else float(ratio)


def solve_helmholtz_radial(k: float, grid: RadialGrid) -> ScalarField:
    """Discrete solution of Δ_h η = k η on the disk with η(R) = 1."""
    if k <= 0:
        raise ValueError(f"Helmholtz parameter k must be positive, got {k}")
    unknown = grid.unknown_nodes
    lap = laplacian_matrix(grid)
    system = (lap[unknown][:, unknown] - k * sp.identity(unknown.size)).tocsr()
    rhs = -lap[unknown][:, grid.boundary_nodes].toarray().ravel()
    banded = to_banded(system, 1, 1)
    interior = scipy.linalg.solve_banded((1, 1), banded, rhs)
    values = np.ones(grid.node_count)
    values[unknown] = interior
    return ScalarField(grid, values)
