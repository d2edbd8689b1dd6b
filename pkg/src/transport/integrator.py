"""Parallel transport along a ray, integrated in conjugated form.

Φ' = (σ_t·M + R)Φ is never stepped directly. With Φ_0(s) = diag(e^{sσ_t μ})
the remainder G = Φ_0^{-1}Φ solves G' = (Φ_0^{-1} R Φ_0)G, which stays O(1),
and Φ(L) = Φ_0(L)G(L) is rebuilt analytically.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from ..config import get_transport_settings
from ..errors import StepUnderflowError
from ..logging_config import get_logger
from ..solver import MetricSolution
from .connection import ConnectionAssembler, RayPath, frame_diagonalizer, mu_values
from .linalg import spectral_norm_log

logger = get_logger(__name__)

CHECKPOINTS = 10
MIN_STEP_RATIO = 1e-12


@dataclass(frozen=True)
class StepRule:
    """h <= min(step_fraction / σ_t, L / min_steps)."""

    step_fraction: float = field(default_factory=lambda: get_transport_settings().step_fraction)
    min_steps: int = field(default_factory=lambda: get_transport_settings().min_steps)

    def __post_init__(self):
        """Validate step controls."""
        if self.step_fraction <= 0:
            raise ValueError(f"step_fraction must be positive, got {self.step_fraction}")
        if self.min_steps < 1:
            raise ValueError(f"min_steps must be at least 1, got {self.min_steps}")

    def step_count(self, scale: float, L: float) -> int:
        """Number of uniform steps covering [0, L].

        Raises:
            StepUnderflowError: if the resulting step is below 1e-12·L.
        """
        if L == 0:
            return 0
        bound = min(self.step_fraction / scale, L / self.min_steps)
        steps = int(np.ceil(L / bound - 1e-9))
        if L / steps < MIN_STEP_RATIO * L:
            raise StepUnderflowError(f"Step {L / steps:.3e} underflows for L={L}")
        return steps

    def refined(self, factor: int = 2) -> "StepRule":
        return StepRule(self.step_fraction / factor, self.min_steps * factor)


@dataclass
class TransportResult:
    """Transport diagnostics at the end of a ray."""

    L: float
    theta: float
    scale: float
    mu: np.ndarray
    S: np.ndarray
    G_L: np.ndarray
    Phi_L: np.ndarray
    diag_logs: np.ndarray
    offdiag_norm: float
    det_drift: float
    steps: int
    wkb: float = float("nan")
    wkb_converged: bool = True
    det_checkpoints: List[float] = field(default_factory=list)

    @property
    def Psi_L(self) -> np.ndarray:
        """Ψ(L) = S Φ(L) S^{-1}; may overflow for very large L·σ_t."""
        return self.S @ self.Phi_L @ self.S.conj().T

    @property
    def transport_matrix(self) -> np.ndarray:
        """T = Ψ(L)^{-1}."""
        return np.linalg.inv(self.Psi_L)

    @property
    def exponent(self) -> float:
        """L·σ_t."""
        return self.L * self.scale


def _rk4(generator: Callable[[float], np.ndarray], G: np.ndarray, s: float, h: float) -> np.ndarray:
    half = generator(s + h / 2.0)
    k1 = generator(s) @ G
    k2 = half @ (G + h / 2.0 * k1)
    k3 = half @ (G + h / 2.0 * k2)
    k4 = generator(s + h) @ (G + h * k3)
    return G + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_transport(
    solution: MetricSolution,
    path: RayPath,
    step_rule: Optional[StepRule] = None,
    exact_leading: bool = False,
    error_matrix: Optional[Callable[[float], np.ndarray]] = None,
) -> TransportResult:
    """Integrate the conjugated remainder G over [0, L] with classical RK4.

    ``exact_leading`` drops the error term entirely; ``error_matrix``
    replaces the assembled R(s) with a caller-supplied one.
    """
    rule = step_rule or StepRule()
    kind = solution.kind
    scale = kind.rate_scale(solution.t)
    mu = mu_values(kind, None, path.theta)
    S = frame_diagonalizer(kind)
    size = kind.n

    if exact_leading:
        source = None
    elif error_matrix is not None:
        source = error_matrix
    else:
        source = ConnectionAssembler(solution, path).error

    def generator(s: float) -> np.ndarray:
        if source is None:
            return np.zeros((size, size), dtype=complex)
        growth = np.exp(s * scale * (mu[None, :] - mu[:, None]))
        return source(s) * growth

    steps = rule.step_count(scale, path.L)
    G = np.eye(size, dtype=complex)
    checkpoints = []
    marks = set()
    if steps:
        h = path.L / steps
        marks = {int(round(steps * (i + 1) / CHECKPOINTS)) for i in range(CHECKPOINTS)}
        logger.debug(f"Transport over L={path.L} with {steps} steps of {h:.3e}")
        for index in range(steps):
            s = index * h
            if source is not None:
                G = _rk4(generator, G, s, h)
            if index + 1 in marks:
                position = (index + 1) * h
                det = np.exp(position * scale * np.sum(mu)) * np.linalg.det(G)
                checkpoints.append(float(abs(det - 1.0)))
    else:
        checkpoints.append(0.0)

    exponent = path.L * scale
    Phi_L = np.diag(np.exp(exponent * mu)) @ G
    diagonal = np.diag(G)
    if exponent > 0:
        diag_logs = mu + np.log(np.abs(diagonal)) / exponent
    else:
        diag_logs = mu.copy()
    off = G - np.diag(diagonal)
    offdiag_norm = float(np.linalg.norm(off) / np.linalg.norm(diagonal))

    result = TransportResult(
        L=path.L,
        theta=path.theta,
        scale=scale,
        mu=mu,
        S=S,
        G_L=G,
        Phi_L=Phi_L,
        diag_logs=diag_logs,
        offdiag_norm=offdiag_norm,
        det_drift=max(checkpoints),
        steps=steps,
        det_checkpoints=checkpoints,
    )
    if exponent > 0:
        result.wkb, result.wkb_converged = _wkb(result)
    else:
        result.wkb = float(np.max(mu))
    logger.info(
        f"Transport L={path.L}, θ={path.theta:.4f}: offdiag {offdiag_norm:.3e}, "
        f"det drift {result.det_drift:.2e}"
    )
    return result


def _wkb(result: TransportResult, exponent: Optional[float] = None, strict: bool = False):
    exponent = result.exponent if exponent is None else exponent
    top = float(np.max(result.mu))
    balanced = np.diag(np.exp(exponent * (result.mu - top))) @ result.G_L
    log_norm, converged = spectral_norm_log(balanced, strict=strict)
    if not converged:
        logger.warning("Power iteration did not settle; WKB exponent flagged")
    return top + log_norm / exponent, converged


def wkb_exponent(result: TransportResult, Lt: Optional[float] = None, strict: bool = False) -> float:
    """(1/Lσ_t)·log ||Ψ(L)||, computed on the balanced matrix without overflow.

    With ``strict`` an unsettled power iteration raises
    PowerIterationStagnation instead of only being flagged.
    """
    exponent = result.exponent if Lt is None else Lt
    if exponent <= 0:
        return float(np.max(result.mu))
    return _wkb(result, exponent, strict)[0]
