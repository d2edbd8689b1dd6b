"""Discrete domains on the flat local chart and the fields living on them."""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Tuple, Union

import numpy as np

MIN_CELLS = 16


def _check_cells(N: int) -> None:
    if N < MIN_CELLS:
        raise ValueError(f"Grid must have at least {MIN_CELLS} cells, got {N}")


@dataclass(frozen=True)
class RadialGrid:
    """Radial samples r_i = i·R/N, i = 0..N, of a disk of radius R."""

    R: float
    N: int

    def __post_init__(self):
        """Validate grid parameters."""
        _check_cells(self.N)
        if self.R <= 0:
            raise ValueError(f"Radius must be positive, got {self.R}")

    @property
    def h(self) -> float:
        """Cell width."""
        return self.R / self.N

    @cached_property
    def r(self) -> np.ndarray:
        """Sample radii, r[0] = 0 and r[N] = R."""
        return np.linspace(0.0, self.R, self.N + 1)

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.N + 1,)

    @property
    def node_count(self) -> int:
        return self.N + 1

    @cached_property
    def interior_mask(self) -> np.ndarray:
        """Nodes carrying equations; the origin is interior by symmetry."""
        mask = np.ones(self.N + 1, dtype=bool)
        mask[-1] = False
        return mask

    @cached_property
    def unknown_nodes(self) -> np.ndarray:
        """Flat indices of interior nodes."""
        return np.flatnonzero(self.interior_mask)

    @cached_property
    def boundary_nodes(self) -> np.ndarray:
        return np.flatnonzero(~self.interior_mask)

    def window_nodes(self, r_lo: float, r_hi: float) -> np.ndarray:
        """Indices of samples with r_lo <= r <= r_hi."""
        slack = 1e-12 * self.R
        return np.flatnonzero((self.r >= r_lo - slack) & (self.r <= r_hi + slack))


@dataclass(frozen=True)
class PlanarGrid:
    """Uniform Cartesian nodes (x_a, y_b) on the square [-R, R]²."""

    R: float
    N: int

    def __post_init__(self):
        """Validate grid parameters."""
        _check_cells(self.N)
        if self.N % 2:
            raise ValueError(f"Planar grid needs an even cell count, got {self.N}")
        if self.R <= 0:
            raise ValueError(f"Half-width must be positive, got {self.R}")

    @property
    def h(self) -> float:
        return 2.0 * self.R / self.N

    @cached_property
    def x(self) -> np.ndarray:
        return np.linspace(-self.R, self.R, self.N + 1)

    @property
    def y(self) -> np.ndarray:
        return self.x

    @cached_property
    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        """Node coordinate arrays with ``ij`` indexing (first axis is x)."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    @cached_property
    def radius(self) -> np.ndarray:
        X, Y = self.coordinates
        return np.hypot(X, Y)

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.N + 1, self.N + 1)

    @property
    def node_count(self) -> int:
        return (self.N + 1) ** 2

    @cached_property
    def interior_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[1:-1, 1:-1] = True
        return mask

    @cached_property
    def unknown_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.interior_mask)

    @cached_property
    def boundary_nodes(self) -> np.ndarray:
        return np.flatnonzero(~self.interior_mask)


Grid = Union[RadialGrid, PlanarGrid]


@dataclass(frozen=True)
class ScalarField:
    """Real nodal values on a grid.

    ``evaluated`` marks the nodes where an operator result is meaningful;
    None means every node.
    """

    grid: Grid
    values: np.ndarray
    evaluated: Optional[np.ndarray] = None

    def __post_init__(self):
        """Validate shape and finiteness."""
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValueError(
                f"Field shape {values.shape} does not match grid shape {self.grid.shape}"
            )
        check = values if self.evaluated is None else values[self.evaluated]
        if not np.all(np.isfinite(check)):
            raise ValueError("Field values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[..., np.ndarray]) -> "ScalarField":
        """Sample ``func(r)`` on a radial grid or ``func(x, y)`` on a planar one."""
        if isinstance(grid, RadialGrid):
            return cls(grid, func(grid.r))
        X, Y = grid.coordinates
        return cls(grid, func(X, Y))

    def __add__(self, other: "ScalarField") -> "ScalarField":
        _require_same_grid(self, other)
        return ScalarField(self.grid, self.values + other.values)

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        _require_same_grid(self, other)
        return ScalarField(self.grid, self.values - other.values)

    def __mul__(self, scale: float) -> "ScalarField":
        return ScalarField(self.grid, scale * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarField":
        return ScalarField(self.grid, -self.values)


def _require_same_grid(a: ScalarField, b: ScalarField) -> None:
    if a.grid != b.grid:
        raise ValueError("Fields live on different grids")
