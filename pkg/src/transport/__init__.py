"""Flat connection along rays, parallel transport and its asymptotic readouts."""

from .connection import (
    ConnectionAssembler,
    ConnectionSample,
    RayPath,
    assemble_connection,
    error_envelope,
    frame_diagonalizer,
    mu_values,
)
from .geometry import pairing_check, vector_distance
from .integrator import StepRule, TransportResult, integrate_transport, wkb_exponent
from .linalg import jacobi_eigenvalues, spectral_norm_log

__all__ = [
    "ConnectionAssembler",
    "ConnectionSample",
    "RayPath",
    "StepRule",
    "TransportResult",
    "assemble_connection",
    "error_envelope",
    "frame_diagonalizer",
    "integrate_transport",
    "jacobi_eigenvalues",
    "mu_values",
    "pairing_check",
    "spectral_norm_log",
    "vector_distance",
    "wkb_exponent",
]
