"""Cyclic Higgs families, metric error state and the Toda frame equations."""

from .equations import (
    curvature_profile,
    decoupling_defect,
    frame_residual,
    index_coupling,
    linearize,
    q_orthogonality_defect,
    residual,
    residual_vector,
    toda_vector_defect,
)
from .kinds import CyclicKind, SystemKind, leading_metric_value, omega_factor, system_kind
from .state import TodaState

__all__ = [
    "CyclicKind",
    "SystemKind",
    "TodaState",
    "curvature_profile",
    "decoupling_defect",
    "frame_residual",
    "index_coupling",
    "leading_metric_value",
    "linearize",
    "omega_factor",
    "q_orthogonality_defect",
    "residual",
    "residual_vector",
    "system_kind",
    "toda_vector_defect",
]
