"""Cross-check of the transport error matrix against the Toda eigenmodes.

In the diagonal frame each off-diagonal error entry of the n-cyclic
connection is a combination of one mode and its derivatives:

    R_kl = e^{iθ}(w_m)_z / (√n(1 - ζ^m)) + e^{-iθ}ζ^{-k}Δw_m / (4√n σ_t |1 - ζ^m|²)

with m = k - l mod n.
"""

from typing import Optional, Tuple

import numpy as np

from ..grid import laplacian_values, radial_derivative
from ..logging_config import get_logger
from ..solver import MetricSolution
from ..transport.connection import ConnectionAssembler, RayPath
from .dft import root_of_unity
from .eigenmodes import compute_wk
from .fitting import default_window

logger = get_logger(__name__)


def link_constants(n: int, k: int, l: int, theta: float, scale: float) -> Tuple[complex, complex]:
    """Coefficients of (w_m)_z and Δw_m in R_kl (0-based k, l)."""
    m = (k - l) % n
    if m == 0:
        raise ValueError(f"Diagonal entry ({k}, {l}) has no mode link")
    zeta = root_of_unity(n)
    gap = 1.0 - zeta**m
    first = np.exp(1j * theta) / (np.sqrt(n) * gap)
    second = np.exp(-1j * theta) * zeta ** (-k) / (4.0 * np.sqrt(n) * scale * abs(gap) ** 2)
    return first, second


def wk_link_check(
    solution: MetricSolution,
    k: int,
    l: int,
    theta: float = 0.0,
    window: Optional[Tuple[float, float]] = None,
) -> float:
    """Max relative gap between the assembled R_kl and its mode formula.

    Both sides are evaluated on the grid nodes of ``window`` (default
    [0.6R, 0.95R]); the result is max|direct - link| / max|direct|.
    """
    kind = solution.kind
    if not kind.is_ncyclic:
        raise ValueError("The mode link applies to the n-cyclic family")
    n = kind.n
    if not (0 <= k < n and 0 <= l < n):
        raise ValueError(f"Indices must lie in [0, {n}), got ({k}, {l})")
    grid = solution.grid
    r_lo, r_hi = window if window is not None else default_window(grid.R)
    L = min(r_hi, grid.R * (1.0 - 1e-9))
    path = RayPath(L, theta, grid)
    scale = kind.rate_scale(solution.t)
    first, second = link_constants(n, k, l, theta, scale)

    m = (k - l) % n
    mode = np.asarray(compute_wk(solution.state, m).values, dtype=complex)
    dz = radial_derivative(mode, grid) * np.exp(-1j * theta) / 2.0
    lap = laplacian_values(mode, grid)
    linked = first * dz + second * lap

    assembler = ConnectionAssembler(solution, path)
    nodes = grid.window_nodes(r_lo, L)
    direct = np.array([assembler.error(grid.r[i])[k, l] for i in nodes])
    gap = np.max(np.abs(direct - linked[nodes]))
    size = np.max(np.abs(direct))
    if size == 0.0:
        return float(gap)
    defect = float(gap / size)
    logger.debug(f"Mode link R[{k},{l}] over [{r_lo:.3f}, {L:.3f}]: defect {defect:.3e}")
    return defect
