"""Symmetric-space readouts of a transport result: vector distance and pairing."""

import numpy as np
import scipy.linalg

from ..config import get_transport_settings
from ..errors import AssemblyError
from ..logging_config import get_logger
from ..solver import MetricSolution
from ..toda import SystemKind, system_kind
from .connection import ConnectionAssembler, RayPath
from .integrator import TransportResult
from .linalg import jacobi_eigenvalues

logger = get_logger(__name__)

OVERFLOW_EXPONENT = 600.0


def _graded_log_eigenvalues(core: np.ndarray, log_scales: np.ndarray) -> np.ndarray:
    """log-eigenvalues of D·C·D when the scales D are strongly graded.

    Ordering by decreasing scale, the Cholesky pivots of C give the
    eigenvalues of DCD up to relative corrections of the scale ratios.
    """
    order = np.argsort(-log_scales)
    permuted = core[np.ix_(order, order)]
    factor = scipy.linalg.cholesky(permuted, lower=True)
    pivots = np.abs(np.diag(factor)) ** 2
    return 2.0 * log_scales[order] + np.log(pivots)


def vector_distance(solution: MetricSolution, path: RayPath, result: TransportResult) -> np.ndarray:
    """(1/σ_t)·log-eigenvalues of the harmonic-map metric at γ(L), descending.

    The metric is Ψ(L)^{-T}·diag(e^{-δ(L)})·conj(Ψ(L)^{-1}) in the unitary
    leading frame. It is assembled as D·C·D with D = e^{-Lσ_t μ} so the
    exponential scales never multiply each other.

    Raises:
        AssemblyError: if the assembled core is not Hermitian.
    """
    settings = get_transport_settings()
    values, _, _ = ConnectionAssembler(solution, path).fields_at(path.L)
    metric_diag = np.exp(-values)

    # Sᵀ·metric·S̄ = D·(X H X*)·D with X = G^{-T}Sᵀ and H = diag(e^{-δ(L)})
    inverse_t = np.linalg.inv(result.G_L).T
    X = inverse_t @ result.S.T
    core = X @ np.diag(metric_diag) @ X.conj().T
    scale = np.linalg.norm(core)
    hermitian_defect = np.linalg.norm(core - core.conj().T) / scale
    if hermitian_defect > settings.hermitian_tol:
        raise AssemblyError(f"Metric core is not Hermitian (defect {hermitian_defect:.2e})")
    core = (core + core.conj().T) / 2.0

    log_scales = -result.exponent * result.mu
    spread = 2.0 * np.max(np.abs(log_scales))
    if spread > OVERFLOW_EXPONENT:
        logger.info(f"Graded eigenvalue extraction for exponent spread {spread:.1f}")
        logs = _graded_log_eigenvalues(core, log_scales)
    else:
        scales = np.exp(log_scales)
        metric = core * np.outer(scales, scales)
        logs = np.log(jacobi_eigenvalues(metric, settings.jacobi_tol))
    return np.sort(logs / result.scale)[::-1]


def pairing_check(result: TransportResult, kind, n=None) -> float:
    """Defect of the λ ↔ λ^{-1} pairing of the transport eigenvalues.

    n-cyclic with even n pairs slot j with j + n/2 (where μ flips sign).
    The (n-1)-cyclic family reports |diag_log| at the μ = 0 slot, plus the
    pairing on the remaining slots when n-1 is even.

    Raises:
        ValueError: for odd n in the n-cyclic family, which has no pairing.
    """
    system: SystemKind = system_kind(kind, n if n is not None else len(result.mu))
    logs = np.asarray(result.diag_logs)
    if system.is_ncyclic:
        if system.n % 2:
            raise ValueError(f"No eigenvalue pairing for odd n = {system.n} in the n-cyclic family")
        half = system.n // 2
        return float(max(abs(logs[j] + logs[j + half]) for j in range(half)))
    defect = abs(float(logs[0]))
    m = system.n - 1
    if m % 2 == 0:
        rest = logs[1:]
        half = m // 2
        defect = max(defect, max(abs(float(rest[j] + rest[j + half])) for j in range(half)))
    return defect

