"""The two cyclic Higgs-bundle families and their exact model data.

A ``SystemKind`` fixes the rank and family. Everything that depends only on
(kind, n, t) lives here: rate scale, leading metric, the rescaled Higgs
field and the coupling weights that drive the frame equations.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import List, Optional, Sequence, Union

import numpy as np


class CyclicKind(str, Enum):
    """Family of cyclic Higgs bundles."""

    NCYCLIC = "n-cyclic"
    NMINUS1 = "n-1-cyclic"

    @classmethod
    def parse(cls, text: Union[str, "CyclicKind"]) -> "CyclicKind":
        """Accept the enum value, its name, or a short alias."""
        if isinstance(text, CyclicKind):
            return text
        key = str(text).strip().lower().replace("_", "-")
        aliases = {
            "n-cyclic": cls.NCYCLIC,
            "ncyclic": cls.NCYCLIC,
            "cyclic": cls.NCYCLIC,
            "n-1-cyclic": cls.NMINUS1,
            "nminus1": cls.NMINUS1,
            "n-minus-1": cls.NMINUS1,
            "n-1": cls.NMINUS1,
        }
        if key not in aliases:
            raise ValueError(f"Unknown cyclic kind: {text!r}")
        return aliases[key]


def _check_t(t: float) -> None:
    if not t > 0:
        raise ValueError(f"Parameter t must be positive, got {t}")


def omega_factor(m: int, k: int) -> float:
    """|1 - ζ_m^k| = 2 sin(πk/m) for 0 <= k < m."""
    if m < 1:
        raise ValueError(f"Order must be positive, got {m}")
    if not 0 <= k < m:
        raise ValueError(f"Mode index must be in [0, {m}), got {k}")
    return 2.0 * np.sin(np.pi * k / m)


@dataclass(frozen=True)
class SystemKind:
    """Cyclic family together with its rank n."""

    tag: CyclicKind
    n: int

    def __post_init__(self):
        """Validate rank and normalize the tag."""
        object.__setattr__(self, "tag", CyclicKind.parse(self.tag))
        if self.n < 2:
            raise ValueError(f"Rank n must be at least 2, got {self.n}")
        if self.tag is CyclicKind.NMINUS1 and self.n < 3:
            raise ValueError(f"The (n-1)-cyclic family needs n >= 3, got {self.n}")

    @classmethod
    def of(cls, kind: Union["SystemKind", CyclicKind, str], n: Optional[int] = None):
        """Coerce ``kind`` (plus rank) into a SystemKind."""
        if isinstance(kind, SystemKind):
            if n is not None and n != kind.n:
                raise ValueError(f"Rank mismatch: {kind.n} vs {n}")
            return kind
        if n is None:
            raise ValueError("Rank n is required")
        return cls(CyclicKind.parse(kind), int(n))

    @property
    def is_ncyclic(self) -> bool:
        return self.tag is CyclicKind.NCYCLIC

    @property
    def b(self) -> int:
        """Degree of the defining differential: n or n-1."""
        return self.n if self.is_ncyclic else self.n - 1

    @property
    def toda_order(self) -> int:
        """Length m of the affine Toda vector."""
        return self.b

    @property
    def independent_count(self) -> int:
        """Number p of independent frame fields δ^1..δ^p."""
        return self.n // 2

    @property
    def label(self) -> str:
        return f"{self.tag.value}(n={self.n})"

    def mirror(self, j: int) -> int:
        """0-based index of the field paired with j by δ^{n+1-j} = -δ^j."""
        return self.n - 1 - j

    # Scales -----------------------------------------------------------------

    def rate_scale(self, t: float) -> float:
        """σ_t = t^{1/n} or (2t)^{1/(n-1)}: the model-field magnitude."""
        _check_t(t)
        if self.is_ncyclic:
            return t ** (1.0 / self.n)
        return (2.0 * t) ** (1.0 / (self.n - 1))

    def prefactor(self, t: float) -> float:
        """Coefficient a = 4σ_t² of the Toda nonlinearity."""
        scale = self.rate_scale(t)
        return 4.0 * scale * scale

    def decay_factors(self) -> List[float]:
        """|1 - ζ_m^k| for every Toda mode k = 0..m-1."""
        m = self.toda_order
        return [omega_factor(m, k) for k in range(m)]

    def max_decay_factor(self) -> float:
        """Largest rate / (2σ_t) over all modes, ṽ^1 included."""
        largest = max(self.decay_factors())
        if not self.is_ncyclic:
            largest = max(largest, 1.0)
        return largest

    # Exact model ------------------------------------------------------------

    def leading_logs(self, t: float) -> np.ndarray:
        """ℓ_j = log of the leading metric coefficient, j = 1..n."""
        _check_t(t)
        n = self.n
        j = np.arange(1, n + 1)
        if self.is_ncyclic:
            return (n + 1 - 2 * j) / n * np.log(t)
        logs = (n + 1 - 2 * j) / (n - 1) * np.log(2.0 * t)
        logs[0] = np.log(t)
        logs[-1] = -np.log(t)
        return logs

    def higgs_field(self, t: float) -> np.ndarray:
        """Higgs field in the local chart: unit subdiagonal plus t-corners."""
        _check_t(t)
        n = self.n
        phi = np.zeros((n, n))
        phi[np.arange(1, n), np.arange(n - 1)] = 1.0
        if self.is_ncyclic:
            phi[0, n - 1] = t
        else:
            phi[0, n - 2] = t
            phi[1, n - 1] = t
        return phi

    def _bonds(self) -> List[tuple]:
        """(row, col, is_half) for every nonzero entry of the Higgs field."""
        n = self.n
        bonds = []
        for a in range(n - 1):
            half = not self.is_ncyclic and a in (0, n - 2)
            bonds.append((a + 1, a, half))
        if self.is_ncyclic:
            bonds.append((0, n - 1, False))
        else:
            bonds.append((0, n - 2, True))
            bonds.append((1, n - 1, True))
        return bonds

    def coupling_weights(self, t: float) -> np.ndarray:
        """W = |κ|²; half-weight bonds are exactly W_full / 2."""
        full = self.rate_scale(t) ** 2
        weights = np.zeros((self.n, self.n))
        for row, col, half in self._bonds():
            weights[row, col] = full / 2.0 if half else full
        return weights

    def rescaled_higgs(self, t: float) -> np.ndarray:
        """κ = e^{-ℓ/2} φ e^{ℓ/2}: the Higgs field in the unitary leading frame."""
        scale = self.rate_scale(t)
        kappa = np.zeros((self.n, self.n))
        for row, col, half in self._bonds():
            kappa[row, col] = scale / np.sqrt(2.0) if half else scale
        return kappa

    # Field bookkeeping --------------------------------------------------------

    def full_frame(self, independent: Sequence[np.ndarray]) -> np.ndarray:
        """Stack δ^1..δ^n from the independent fields δ^1..δ^p."""
        p = self.independent_count
        if len(independent) != p:
            raise ValueError(f"Expected {p} independent fields, got {len(independent)}")
        first = np.asarray(independent[0], dtype=float)
        frame = np.zeros((self.n,) + first.shape)
        for j, values in enumerate(independent):
            frame[j] = values
            frame[self.mirror(j)] = -np.asarray(values, dtype=float)
        return frame

    def toda_vector(self, frame: np.ndarray) -> np.ndarray:
        """Affine Toda vector d (length m) from the frame fields."""
        if self.is_ncyclic:
            return np.array(frame, copy=True)
        d = np.zeros((self.n - 1,) + frame.shape[1:])
        d[: self.n - 2] = frame[1 : self.n - 1]
        return d


@lru_cache(maxsize=64)
def _cached_kind(tag: CyclicKind, n: int) -> SystemKind:
    return SystemKind(tag, n)


def system_kind(kind: Union[SystemKind, CyclicKind, str], n: Optional[int] = None) -> SystemKind:
    """Shared SystemKind instance for (kind, n)."""
    if isinstance(kind, SystemKind):
        return SystemKind.of(kind, n)
    if n is None:
        raise ValueError("Rank n is required")
    return _cached_kind(CyclicKind.parse(kind), int(n))


def leading_metric_value(
    kind: Union[SystemKind, CyclicKind, str], n: int, t: float, j: int
) -> float:
    """Leading-order metric coefficient h_j = e^{ℓ_j} for 1 <= j <= n."""
    system = system_kind(kind, n)
    if not 1 <= j <= system.n:
        raise ValueError(f"Index j must be in 1..{system.n}, got {j}")
    return float(np.exp(system.leading_logs(t)[j - 1]))
