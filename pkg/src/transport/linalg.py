"""Small dense eigenvalue tools for Hermitian and balanced transport matrices."""

from typing import Optional, Tuple

import numpy as np

from ..config import get_transport_settings
from ..errors import PowerIterationStagnation
from ..logging_config import get_logger

logger = get_logger(__name__)

MAX_SWEEPS = 60


def jacobi_eigenvalues(matrix: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    A pair (p, q) is rotated while |A_pq| > tol·sqrt(|A_pp·A_qq|), a relative
    criterion that keeps small eigenvalues accurate when the spectrum spans
    many orders of magnitude. Returned in descending order.
    """
    tol = get_transport_settings().jacobi_tol if tol is None else tol
    A = np.array(matrix, dtype=complex)
    size = A.shape[0]
    if A.shape != (size, size):
        raise ValueError(f"Expected a square matrix, got shape {A.shape}")
    for sweep in range(MAX_SWEEPS):
        rotated = False
        for p in range(size - 1):
            for q in range(p + 1, size):
                off = A[p, q]
                bound = tol * np.sqrt(abs(A[p, p].real * A[q, q].real))
                if abs(off) <= bound or off == 0:
                    continue
                rotated = True
                phase = np.exp(-1j * np.angle(off))
                angle = 0.5 * np.arctan2(2.0 * abs(off), (A[p, p] - A[q, q]).real)
                c, s = np.cos(angle), np.sin(angle)
                rotation = np.eye(size, dtype=complex)
                rotation[p, p] = c
                rotation[p, q] = -s
                rotation[q, p] = s * phase
                rotation[q, q] = c * phase
                A = rotation.conj().T @ A @ rotation
                A[p, q] = A[q, p] = 0.0
        if not rotated:
            logger.debug(f"Jacobi converged after {sweep} sweeps")
            break
    else:
        logger.warning(f"Jacobi stopped after {MAX_SWEEPS} sweeps")
    return np.sort(np.diag(A).real)[::-1]


def spectral_norm_log(
    matrix: np.ndarray, iterations: Optional[int] = None, strict: bool = False
) -> Tuple[float, bool]:
    """log ||M||_2 by power iteration on M*M with repeated squaring.

    Returns the log-norm and whether the Rayleigh quotient settled to
    1e-12 relative within ``iterations`` squarings.

    Raises:
        PowerIterationStagnation: if ``strict`` and the quotient never settled.
    """
    iterations = get_transport_settings().power_iterations if iterations is None else iterations
    gram = matrix.conj().T @ matrix
    peak = float(np.max(np.abs(gram)))
    if peak == 0.0:
        return float("-inf"), True
    gram = gram / peak
    power = gram.copy()
    vector = np.ones(gram.shape[0], dtype=complex) / np.sqrt(gram.shape[0])
    previous = None
    quotient = 0.0
    converged = False
    for _ in range(iterations):
        candidate = power @ vector
        norm = np.linalg.norm(candidate)
        if norm == 0.0:
            break
        vector = candidate / norm
        quotient = float(np.real(vector.conj() @ gram @ vector))
        if previous is not None and abs(quotient - previous) <= 1e-12 * abs(quotient):
            converged = True
            break
        previous = quotient
        power = power @ power
        power = power / np.max(np.abs(power))
    if strict and not converged:
        raise PowerIterationStagnation(
            f"Rayleigh quotient did not settle within {iterations} squarings"
        )
    return 0.5 * (np.log(quotient) + np.log(peak)), converged
