"""Runtime failures raised by the lab.

Parameter validation uses ``ValueError``; the classes here signal numerical
trouble that a sweep may want to record instead of aborting on.
"""

from typing import Any, Optional


class HiggsLabError(Exception):
    """Base class for numerical failures in the lab."""


class NonConvergenceError(HiggsLabError):
    """Newton hit its iteration cap before reaching the residual target."""

    def __init__(self, message: str, best: Optional[Any] = None):
        """Keep the best iterate so callers can still inspect it."""
        super().__init__(message)
        self.best = best


class LinearSolveFailure(HiggsLabError):
    """A Newton linear system could not be solved."""


class EmptyWindowError(HiggsLabError):
    """Every sample of a decay-fit window sits below the noise floor."""


class StepUnderflowError(HiggsLabError):
    """The transport step size fell below the allowed minimum."""


class PowerIterationStagnation(HiggsLabError):
    """Power iteration stopped before its Rayleigh quotient settled."""


class AssemblyError(HiggsLabError):
    """An assembled matrix violates a structural property it must have."""
