"""Shared solves for the test suite.

Radial solves are cheap but several modules reuse the same ones, so they are
computed once per session.
"""

import pytest

from src.grid import RadialGrid
from src.solver import BoundaryData, auto_grid_size, solve_dirichlet
from src.toda import system_kind


def solve_radial(tag, n, t, alpha=1e-3, profile="graded", R=1.0, N=None):
    """Solve on a radial grid sized by the sizing rule unless N is given."""
    kind = system_kind(tag, n)
    size = N or auto_grid_size(kind, None, t, R)
    boundary = BoundaryData.constant(kind, t, alpha, profile)
    return solve_dirichlet(kind, None, t, RadialGrid(R, size), boundary)


@pytest.fixture(scope="session")
def cyclic3_t125():
    """n = 3 n-cyclic at t = 125 (σ_t = 5), N = 512."""
    return solve_radial("n-cyclic", 3, 125.0)


@pytest.fixture(scope="session")
def cyclic3_t1000():
    """n = 3 n-cyclic at t = 1000 (σ_t = 10), N = 1024."""
    return solve_radial("n-cyclic", 3, 1000.0)


@pytest.fixture(scope="session")
def cyclic3_t100():
    return solve_radial("n-cyclic", 3, 100.0)


@pytest.fixture(scope="session")
def minus1_4_t500():
    """n = 4 (n-1)-cyclic at t = 500 (σ_t = 10), N = 1024."""
    return solve_radial("n-1-cyclic", 4, 500.0)


@pytest.fixture(scope="session")
def cyclic4_t256():
    """n = 4 n-cyclic at t = 256 (σ_t = 4) with both modes excited."""
    return solve_radial("n-cyclic", 4, 256.0)
