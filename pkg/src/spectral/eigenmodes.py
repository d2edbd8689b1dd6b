"""Eigenmode transform of the Toda vector and the recursive formula for its modes.

The mode w_k is the discrete Fourier coefficient of the consecutive
differences e^i = d^i - d^{i+1}, ordered as (d^m - d^1, d^1 - d^2, ...):

    w_k = (1/√m) Σ_j ζ_m^{jk} x_j,   x_0 = e^m, x_j = e^j.
"""

import itertools
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from ..grid import Grid, RadialGrid, radial_derivative
from ..logging_config import get_logger
from ..toda import SystemKind, TodaState, omega_factor
from .dft import root_of_unity

logger = get_logger(__name__)

SOURCES = ("w", "dz", "vtilde1", "perturbation")


@dataclass(frozen=True)
class EigenProfile:
    """Nodal profile of one decaying quantity, with its decay fit once made."""

    kind: SystemKind
    t: float
    grid: Grid
    values: np.ndarray
    k: Optional[int] = None
    source: str = "w"
    imag_defect: float = 0.0
    fitted_rate: Optional[float] = None
    fitted_amplitude: Optional[float] = None
    fit_window: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        """Validate source tag and shape."""
        if self.source not in SOURCES:
            raise ValueError(f"Profile source must be one of {SOURCES}, got {self.source}")
        if np.shape(self.values) != self.grid.shape:
            raise ValueError(
                f"Profile shape {np.shape(self.values)} does not match grid {self.grid.shape}"
            )

    @property
    def label(self) -> str:
        if self.source == "w":
            return f"w{self.k}"
        if self.source == "dz":
            return f"dz_w{self.k}"
        return self.source

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    def with_fit(self, rate: float, amplitude: float, window: Tuple[float, float]):
        return replace(
            self, fitted_rate=rate, fitted_amplitude=amplitude, fit_window=window
        )


def mode_transform(state: TodaState) -> np.ndarray:
    """All modes w_0..w_{m-1}, shape (m,) + grid.shape, complex."""
    d = state.kind.toda_vector(state.frame)
    m = d.shape[0]
    differences = d - np.roll(d, -1, axis=0)
    ordered = np.roll(differences, 1, axis=0)
    return np.sqrt(m) * np.fft.ifft(ordered, axis=0)


def reconstruct_differences(modes: np.ndarray) -> np.ndarray:
    """Invert the transform: (e^1, ..., e^m) from all modes."""
    m = modes.shape[0]
    ordered = np.fft.fft(modes, axis=0) / np.sqrt(m)
    return np.roll(ordered, -1, axis=0)


def compute_wk(state: TodaState, k: int) -> EigenProfile:
    """Mode w_k of a state.

    For the n-cyclic family w_k is real; the imaginary part is dropped and
    its size recorded as ``imag_defect``.
    """
    m = state.kind.toda_order
    if not 0 <= k < m:
        raise ValueError(f"Mode index must be in [0, {m}), got {k}")
    values = mode_transform(state)[k]
    imag_defect = 0.0
    if state.kind.is_ncyclic:
        imag_defect = float(np.max(np.abs(values.imag)))
        values = values.real
        if imag_defect > 1e-12:
            logger.warning(f"Mode w{k} has imaginary part {imag_defect:.2e}")
    return EigenProfile(
        kind=state.kind,
        t=state.t,
        grid=state.grid,
        values=values,
        k=k,
        source="w",
        imag_defect=imag_defect,
    )


def all_modes(state: TodaState) -> Tuple[EigenProfile, ...]:
    return tuple(compute_wk(state, k) for k in range(state.kind.toda_order))


def parseval_defect(state: TodaState) -> float:
    """Nodewise max |Σ|w_k|² - Σ|e^i|²|."""
    d = state.kind.toda_vector(state.frame)
    differences = d - np.roll(d, -1, axis=0)
    modes = mode_transform(state)
    gap = np.sum(np.abs(modes) ** 2, axis=0) - np.sum(differences**2, axis=0)
    return float(np.max(np.abs(gap)))


def symmetry_defect(state: TodaState) -> float:
    """Mirror (n-cyclic) or twist ((n-1)-cyclic) relation defect of the modes.

    n-cyclic: w_k = w_{m-k}. (n-1)-cyclic: w_{m-k} = ζ_m^k w_k.
    """
    modes = mode_transform(state)
    m = modes.shape[0]
    zeta = root_of_unity(m)
    defect = 0.0
    for k in range(1, m):
        partner = modes[m - k]
        expected = modes[k] if state.kind.is_ncyclic else zeta**k * modes[k]
        defect = max(defect, float(np.max(np.abs(partner - expected))))
    return defect


def perturbation_values(state: TodaState) -> np.ndarray:
    """f = ½(e^{ṽ¹} + e^{-ṽ¹} - 2)·e^{-d¹} for the (n-1)-cyclic family."""
    if state.kind.is_ncyclic:
        raise ValueError("The perturbation term exists only for the (n-1)-cyclic family")
    vtilde = state.fields[0]
    d_first = state.frame[1]
    return 2.0 * np.sinh(vtilde / 2.0) ** 2 * np.exp(-d_first)


def recursive_rhs(
    profiles: Sequence[EigenProfile],
    k: int,
    s_max: int = 3,
    max_cycles: int = 1,
    state: Optional[TodaState] = None,
) -> np.ndarray:
    """Truncated right-hand side of Δw_k from the modes themselves.

        a·|1-ζ^k|² Σ_{s<=s_max} Σ_{r_1+..+r_s ≡ k} w_{r_1}..w_{r_s} / (s! m^{(s-1)/2})

    over ordered tuples with r_i in 1..m-1 and r_1+..+r_s <= k + max_cycles·m.
    Summing over ordered tuples already counts every arrangement of a
    multiset, so no multinomial coefficient appears beside the 1/s!.
    The (n-1)-cyclic family adds (a/√m) Σ_i ζ^{ik}(p_i - p_{i+1}), which needs
    ``state``.
    """
    if s_max < 1:
        raise ValueError(f"s_max must be at least 1, got {s_max}")
    if max_cycles < 0:
        raise ValueError(f"max_cycles must be non-negative, got {max_cycles}")
    if not profiles:
        raise ValueError("At least one profile is required")
    kind, t = profiles[0].kind, profiles[0].t
    m = kind.toda_order
    if len(profiles) != m:
        raise ValueError(f"Expected {m} mode profiles, got {len(profiles)}")
    if not 0 <= k < m:
        raise ValueError(f"Mode index must be in [0, {m}), got {k}")
    modes = [np.asarray(p.values, dtype=complex) for p in profiles]
    limit = k + max_cycles * m

    series = np.zeros_like(modes[0])
    for s in range(1, s_max + 1):
        coefficient = 1.0 / (math.factorial(s) * m ** ((s - 1) / 2.0))
        for tup in itertools.product(range(1, m), repeat=s):
            total = sum(tup)
            if total > limit or (total - k) % m:
                continue
            term = np.ones_like(series)
            for r in tup:
                term = term * modes[r]
            series += coefficient * term

    a = kind.prefactor(t)
    rhs = a * omega_factor(m, k) ** 2 * series
    if not kind.is_ncyclic:
        if state is None:
            raise ValueError("The (n-1)-cyclic formula needs the state for its perturbation term")
        f = perturbation_values(state)
        p = np.zeros((m,) + f.shape)
        p[0] -= f
        p[m - 2] += f
        zeta = root_of_unity(m)
        shifted = p - np.roll(p, -1, axis=0)
        phases = zeta ** (k * np.arange(1, m + 1))
        rhs = rhs + a / np.sqrt(m) * np.tensordot(phases, shifted, axes=1)
    if kind.is_ncyclic:
        return rhs.real
    return rhs


def vtilde1_profile(state: TodaState) -> EigenProfile:
    """The decoupled field ṽ^1 of the (n-1)-cyclic family."""
    if state.kind.is_ncyclic:
        raise ValueError("ṽ^1 exists only for the (n-1)-cyclic family")
    return EigenProfile(
        kind=state.kind, t=state.t, grid=state.grid, values=state.fields[0], source="vtilde1"
    )


def perturbation_profile(state: TodaState) -> EigenProfile:
    """The perturbation f; it decays at twice the ṽ^1 rate."""
    return EigenProfile(
        kind=state.kind,
        t=state.t,
        grid=state.grid,
        values=perturbation_values(state),
        source="perturbation",
    )


def derivative_profile(profile: EigenProfile, theta: float = 0.0) -> EigenProfile:
    """∂_z of a mode along the ray of angle θ: w'(r)·e^{-iθ}/2."""
    if profile.source != "w":
        raise ValueError(f"Derivative profiles are built from modes, got {profile.label}")
    if not isinstance(profile.grid, RadialGrid):
        raise ValueError("derivative_profile needs a radial profile")
    values = radial_derivative(np.asarray(profile.values), profile.grid)
    values = values * np.exp(-1j * theta) / 2.0
    return EigenProfile(
        kind=profile.kind,
        t=profile.t,
        grid=profile.grid,
        values=values,
        k=profile.k,
        source="dz",
    )
