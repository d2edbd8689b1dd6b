"""Exponential decay fits of mode profiles and their predicted rates."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import stats

from ..errors import EmptyWindowError
from ..grid import RadialGrid
from ..logging_config import get_logger
from ..toda import SystemKind, omega_factor
from .eigenmodes import EigenProfile

logger = get_logger(__name__)

DEFAULT_WINDOW = (0.6, 0.95)
NOISE_FACTOR = 100.0
MIN_SAMPLES = 3


@dataclass(frozen=True)
class DecayFit:
    """Least-squares line through (R - r, log|w|)."""

    rate: float
    amplitude: float
    r_squared: float
    window: Tuple[float, float]
    samples: int


def default_window(R: float) -> Tuple[float, float]:
    return (DEFAULT_WINDOW[0] * R, DEFAULT_WINDOW[1] * R)


def fit_decay(
    profile: EigenProfile,
    window: Optional[Tuple[float, float]] = None,
    amplitude: Optional[float] = None,
) -> DecayFit:
    """Fit |w(r)| ≈ A·e^{-rate·(R - r)} over ``window``.

    Samples at or below 100·eps·amplitude are noise; the window shrinks
    from its inner end to the outermost run of samples above that floor.
    ``amplitude`` defaults to the largest |w| on the grid.

    Raises:
        EmptyWindowError: if fewer than three usable samples remain.
    """
    grid = profile.grid
    if not isinstance(grid, RadialGrid):
        raise ValueError("fit_decay needs a radial profile")
    r_lo, r_hi = window if window is not None else default_window(grid.R)
    if not 0 <= r_lo < r_hi <= grid.R:
        raise ValueError(f"Fit window must satisfy 0 <= r_lo < r_hi <= R, got ({r_lo}, {r_hi})")

    magnitude = np.abs(np.asarray(profile.values))
    scale = float(np.max(magnitude)) if amplitude is None else abs(amplitude)
    floor = NOISE_FACTOR * np.finfo(float).eps * scale
    nodes = grid.window_nodes(r_lo, r_hi)

    usable = []
    for node in nodes[::-1]:
        if magnitude[node] <= floor:
            break
        usable.append(node)
    usable = np.array(sorted(usable), dtype=int)
    if usable.size < MIN_SAMPLES:
        raise EmptyWindowError(
            f"Only {usable.size} samples of {profile.label} above noise floor {floor:.2e} "
            f"in [{r_lo:.4f}, {r_hi:.4f}]"
        )
    fitted_window = (float(grid.r[usable[0]]), float(grid.r[usable[-1]]))
    if usable.size < nodes.size:
        logger.info(
            f"Fit window for {profile.label} shrunk to [{fitted_window[0]:.4f}, {fitted_window[1]:.4f}]"
        )

    distance = grid.R - grid.r[usable]
    line = stats.linregress(distance, np.log(magnitude[usable]))
    fit = DecayFit(
        rate=float(-line.slope),
        amplitude=float(np.exp(line.intercept)),
        r_squared=float(line.rvalue**2),
        window=fitted_window,
        samples=int(usable.size),
    )
    logger.debug(f"Decay fit {profile.label}: rate {fit.rate:.4f}, r² {fit.r_squared:.6f}")
    return fit


def rate_prediction(
    kind: SystemKind, t: float, k: Optional[int] = None, source: str = "w"
) -> float:
    """Predicted decay constant.

    Modes and their derivatives: 2·|1 - ζ_m^k|·σ_t. ṽ^1: 2σ_t.
    The perturbation f: 4σ_t.
    """
    scale = kind.rate_scale(t)
    if source in ("w", "dz"):
        if k is None:
            raise ValueError("Mode index is required for mode predictions")
        return 2.0 * omega_factor(kind.toda_order, k) * scale
    if source == "vtilde1":
        return 2.0 * scale
    if source == "perturbation":
        return 4.0 * scale
    raise ValueError(f"Unknown profile source: {source}")


def predicted_rate(profile: EigenProfile) -> float:
    return rate_prediction(profile.kind, profile.t, profile.k, profile.source)
