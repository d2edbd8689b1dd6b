"""Metric error state: the independent frame fields on a grid."""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..grid import Grid, ScalarField
from .kinds import SystemKind


@dataclass(frozen=True)
class TodaState:
    """Frame errors δ^1..δ^p of h = h_leading · e^{δ}.

    Only the independent fields are stored, so the anti-symmetry
    δ^{n+1-j} = -δ^j and the vanishing middle field for odd n hold exactly.
    """

    kind: SystemKind
    t: float
    grid: Grid
    fields: Tuple[np.ndarray, ...]

    def __post_init__(self):
        """Validate parameters and freeze field arrays."""
        if not self.t > 0:
            raise ValueError(f"Parameter t must be positive, got {self.t}")
        p = self.kind.independent_count
        if len(self.fields) != p:
            raise ValueError(f"Expected {p} independent fields, got {len(self.fields)}")
        frozen = []
        for values in self.fields:
            array = np.array(values, dtype=float)
            if array.shape != self.grid.shape:
                raise ValueError(
                    f"Field shape {array.shape} does not match grid shape {self.grid.shape}"
                )
            if not np.all(np.isfinite(array)):
                raise ValueError("State fields must be finite")
            array.setflags(write=False)
            frozen.append(array)
        object.__setattr__(self, "fields", tuple(frozen))

    @classmethod
    def zeros(cls, kind: SystemKind, t: float, grid: Grid) -> "TodaState":
        """The exact model: every frame error vanishes."""
        return cls(kind, t, grid, tuple(np.zeros(grid.shape) for _ in range(kind.independent_count)))

    @classmethod
    def from_fields(
        cls,
        kind: SystemKind,
        t: float,
        grid: Grid,
        fields: Sequence[Union[ScalarField, np.ndarray]],
    ) -> "TodaState":
        values = [f.values if isinstance(f, ScalarField) else f for f in fields]
        return cls(kind, t, grid, tuple(values))

    @classmethod
    def from_unknowns(
        cls, kind: SystemKind, t: float, grid: Grid, stacked: np.ndarray
    ) -> "TodaState":
        """Build from a (p, node_count) array of flattened nodal values."""
        fields = tuple(row.reshape(grid.shape) for row in stacked)
        return cls(kind, t, grid, fields)

    @property
    def n(self) -> int:
        return self.kind.n

    def stacked(self) -> np.ndarray:
        """Independent fields as a (p, node_count) array."""
        return np.stack([f.ravel() for f in self.fields])

    @cached_property
    def frame(self) -> np.ndarray:
        """All n frame fields, shape (n,) + grid.shape."""
        return self.kind.full_frame(self.fields)

    def frame_field(self, j: int) -> ScalarField:
        """δ^j for 1-based j."""
        return ScalarField(self.grid, self.frame[j - 1])

    @property
    def dvec(self) -> List[ScalarField]:
        """Affine Toda vector d^1..d^m."""
        return [ScalarField(self.grid, d) for d in self.kind.toda_vector(self.frame)]

    @property
    def vtilde1(self) -> Optional[ScalarField]:
        """The decoupled field ṽ^1 = δ^1 of the (n-1)-cyclic family."""
        if self.kind.is_ncyclic:
            return None
        return ScalarField(self.grid, self.fields[0])

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(f)) for f in self.fields))
