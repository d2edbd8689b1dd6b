"""Unitary discrete Fourier matrix on Z_m."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


def root_of_unity(m: int) -> complex:
    """ζ_m = e^{2πi/m}."""
    return np.exp(2j * np.pi / m)


@dataclass(frozen=True)
class DftMatrix:
    """S_{jk} = ζ_m^{jk} / √m."""

    m: int

    def __post_init__(self):
        """Validate order."""
        if self.m < 1:
            raise ValueError(f"DFT order must be positive, got {self.m}")

    @cached_property
    def matrix(self) -> np.ndarray:
        index = np.arange(self.m)
        phase = np.outer(index, index) % self.m
        return np.exp(2j * np.pi * phase / self.m) / np.sqrt(self.m)

    def unitarity_defect(self) -> float:
        """max |S S* - I|."""
        S = self.matrix
        return float(np.max(np.abs(S @ S.conj().T - np.eye(self.m))))


def dft_matrix(m: int) -> np.ndarray:
    return DftMatrix(m).matrix
