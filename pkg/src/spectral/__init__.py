"""Toda eigenmodes, their recursive formula and decay-rate fits.

The mode/transport link check lives in ``src.spectral.link`` and is imported
from there, since it depends on the transport package.
"""

from ..toda import omega_factor
from .dft import DftMatrix, dft_matrix, root_of_unity
from .eigenmodes import (
    EigenProfile,
    all_modes,
    compute_wk,
    derivative_profile,
    mode_transform,
    parseval_defect,
    perturbation_profile,
    perturbation_values,
    reconstruct_differences,
    recursive_rhs,
    symmetry_defect,
    vtilde1_profile,
)
from .fitting import DecayFit, default_window, fit_decay, predicted_rate, rate_prediction

__all__ = [
    "DecayFit",
    "DftMatrix",
    "EigenProfile",
    "all_modes",
    "compute_wk",
    "default_window",
    "derivative_profile",
    "dft_matrix",
    "fit_decay",
    "mode_transform",
    "omega_factor",
    "parseval_defect",
    "perturbation_profile",
    "perturbation_values",
    "predicted_rate",
    "rate_prediction",
    "reconstruct_differences",
    "recursive_rhs",
    "root_of_unity",
    "symmetry_defect",
    "vtilde1_profile",
]
