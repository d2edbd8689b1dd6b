"""Flat connection along a ray in the rescaled unitary frame.

Along γ(s) = s·e^{iθ} the connection is A = e^{iθ}U + e^{-iθ}V with

    U = diag(-δ_z) + κ,    V_ab = κ_ba·e^{δ^a - δ^b},

and the model A_0 = e^{iθ}κ + e^{-iθ}κᵀ is diagonalized by S to
σ_t·diag(μ). The error R = S^{-1}(A - A_0)S is built from the error
parts directly, so vanishing fields give exactly zero.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..grid import RadialGrid, radial_derivative
from ..logging_config import get_logger
from ..solver import MetricSolution
from ..spectral.dft import dft_matrix
from ..toda import CyclicKind, SystemKind, system_kind

logger = get_logger(__name__)


def frame_diagonalizer(kind: Union[SystemKind, CyclicKind, str], n: Optional[int] = None) -> np.ndarray:
    """Unitary S whose columns diagonalize the model connection.

    n-cyclic: S_ac = ζ_n^{-ac}/√n. (n-1)-cyclic: column 0 is (e_1 - e_n)/√2,
    the kernel of κ; the rest is the conjugate DFT of order n-1 over the
    basis ((e_1 + e_n)/√2, e_2, ..., e_{n-1}).
    """
    system = system_kind(kind, n)
    if system.is_ncyclic:
        return dft_matrix(system.n).conj()
    size = system.n
    m = size - 1
    basis = np.zeros((size, m))
    basis[0, 0] = basis[size - 1, 0] = 1.0 / np.sqrt(2.0)
    for a in range(1, m):
        basis[a, a] = 1.0
    S = np.zeros((size, size), dtype=complex)
    S[0, 0] = 1.0 / np.sqrt(2.0)
    S[size - 1, 0] = -1.0 / np.sqrt(2.0)
    S[:, 1:] = basis @ dft_matrix(m).conj()
    return S


def mu_values(kind: Union[SystemKind, CyclicKind, str], n: Optional[int], theta: float) -> np.ndarray:
    """Eigenvalues μ_j(θ) of the model, in the column order of S.

    n-cyclic: 2cos(θ + 2π(j-1)/n). (n-1)-cyclic: μ_1 = 0 and
    μ_j = 2cos(θ + 2π(j-2)/(n-1)) for j >= 2.
    """
    system = system_kind(kind, n)
    if system.is_ncyclic:
        return 2.0 * np.cos(theta + 2.0 * np.pi * np.arange(system.n) / system.n)
    m = system.n - 1
    return np.concatenate(([0.0], 2.0 * np.cos(theta + 2.0 * np.pi * np.arange(m) / m)))


@dataclass(frozen=True)
class RayPath:
    """The ray s ↦ s·e^{iθ}, s in [0, L], inside a radial grid."""

    L: float
    theta: float
    grid: RadialGrid

    def __post_init__(self):
        """Validate length against the grid."""
        if not isinstance(self.grid, RadialGrid):
            raise ValueError("RayPath needs a RadialGrid")
        if self.L < 0:
            raise ValueError(f"Path length must be non-negative, got {self.L}")
        if self.L >= self.grid.R:
            raise ValueError(f"Path length must be below R = {self.grid.R}, got {self.L}")

    @property
    def margin(self) -> float:
        """Distance from the end point to the boundary."""
        return self.grid.R - self.L

    @property
    def satisfies_path_condition(self) -> bool:
        return self.L <= self.grid.R / 2.0

    @property
    def samples(self) -> np.ndarray:
        return self.grid.r[self.grid.r <= self.L + 1e-12 * self.grid.R]


@dataclass(frozen=True)
class ConnectionSample:
    """Connection data at one point of the ray."""

    s: float
    theta: float
    scale: float
    U: np.ndarray
    V: np.ndarray
    M: np.ndarray
    R_err: np.ndarray
    off_grid: bool = False

    @property
    def connection(self) -> np.ndarray:
        return np.exp(1j * self.theta) * self.U + np.exp(-1j * self.theta) * self.V

    @property
    def model(self) -> np.ndarray:
        return self.scale * np.diag(self.M)


class ConnectionAssembler:
    """Evaluates the connection of one solution along one ray."""

    def __init__(self, solution: MetricSolution, path: RayPath):
        """Precompute frame fields, radial derivatives and model data."""
        if not isinstance(solution.grid, RadialGrid):
            raise ValueError("Transport needs a radial metric solution")
        if solution.grid != path.grid:
            raise ValueError("Path and solution live on different grids")
        self.solution = solution
        self.path = path
        self.kind = solution.kind
        self.grid = solution.grid
        self.frame = solution.state.frame
        self.slopes = np.stack([radial_derivative(f, self.grid) for f in self.frame])
        self.kappa = self.kind.rescaled_higgs(solution.t)
        self.scale = self.kind.rate_scale(solution.t)
        self.S = frame_diagonalizer(self.kind)
        self.S_inv = self.S.conj().T
        self.mu = mu_values(self.kind, None, path.theta)
        self._forward = np.exp(1j * path.theta)
        self._backward = np.exp(-1j * path.theta)

    def fields_at(self, s: float) -> Tuple[np.ndarray, np.ndarray, bool]:
        """δ(s) and δ'(s), linearly interpolated between nodes."""
        r = self.grid.r
        values = np.array([np.interp(s, r, f) for f in self.frame])
        slopes = np.array([np.interp(s, r, f) for f in self.slopes])
        position = s / self.grid.h
        off_grid = abs(position - round(position)) > 1e-9
        return values, slopes, off_grid

    def _check(self, s: float) -> None:
        if not -1e-12 <= s <= self.path.L + 1e-12 * max(1.0, self.path.L):
            raise ValueError(f"Sample point must lie in [0, {self.path.L}], got {s}")

    def error(self, s: float) -> np.ndarray:
        """R_err(s) in the diagonal frame."""
        self._check(s)
        values, slopes, _ = self.fields_at(s)
        return self._error(values, slopes)

    def _error(self, values: np.ndarray, slopes: np.ndarray) -> np.ndarray:
        dz = slopes * self._backward / 2.0
        gaps = values[:, None] - values[None, :]
        delta = self._forward * np.diag(-dz) + self._backward * (self.kappa.T * np.expm1(gaps))
        return self.S_inv @ delta @ self.S

    def sample(self, s: float) -> ConnectionSample:
        self._check(s)
        values, slopes, off_grid = self.fields_at(s)
        if off_grid:
            logger.debug(f"Connection sampled off-grid at s={s:.6f}")
        dz = slopes * self._backward / 2.0
        gaps = values[:, None] - values[None, :]
        U = np.diag(-dz) + self.kappa
        V = self.kappa.T * np.exp(gaps)
        return ConnectionSample(
            s=float(s),
            theta=self.path.theta,
            scale=self.scale,
            U=U,
            V=V,
            M=self.mu.copy(),
            R_err=self._error(values, slopes),
            off_grid=off_grid,
        )


def assemble_connection(solution: MetricSolution, path: RayPath, s: float) -> ConnectionSample:
    """Connection, model and error matrix at γ(s)."""
    return ConnectionAssembler(solution, path).sample(s)


def error_envelope(
    solution: MetricSolution, path: RayPath, s_values: Optional[Sequence[float]] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """max_kl |R_kl(s)| along the path; defaults to the grid samples."""
    assembler = ConnectionAssembler(solution, path)
    points = path.samples if s_values is None else np.asarray(s_values, dtype=float)
    envelope = np.array([np.max(np.abs(assembler.error(s))) for s in points])
    return points, envelope
