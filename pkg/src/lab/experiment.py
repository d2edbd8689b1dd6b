"""Experiment configuration and its flat ``key = value`` text format.

Example::

    kind = n-cyclic
    n = 3
    t = 125, 1000
    theta = 0.0, 0.4
    L = 0.3
"""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, confloat, conint, field_validator, model_validator

from ..solver import auto_grid_size
from ..toda import CyclicKind, SystemKind, system_kind

LIST_KEYS = {"t", "theta", "L", "window"}


class ExperimentConfig(BaseModel):
    """One experiment: a family, a sweep over t and the rays to transport along."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: CyclicKind = Field(..., description="Cyclic family: n-cyclic or n-1-cyclic")
    n: conint(ge=2) = Field(..., description="Rank of the Higgs bundle")
    t: List[confloat(gt=0)] = Field(..., min_length=1, description="Strictly increasing t values")
    R: confloat(gt=0) = Field(default=1.0, description="Radius of the local disk")
    N: Union[Literal["auto"], conint(ge=16)] = Field(
        default="auto", description="Radial cell count, or auto from the sizing rule"
    )
    alpha: confloat(ge=0, le=0.5) = Field(
        default=1e-3, description="Boundary amplitude factor: boundary = alpha·t^(-2/b)"
    )
    boundary_profile: Literal["uniform", "graded"] = Field(
        default="graded", description="How boundary values are spread over the fields"
    )
    theta: List[float] = Field(default_factory=lambda: [0.0], description="Ray angles")
    random_thetas: conint(ge=0) = Field(default=0, description="Extra angles drawn from seed")
    seed: int = Field(default=0, description="Seed for random angles")
    L: List[confloat(ge=0)] = Field(default_factory=lambda: [0.3], description="Ray lengths")
    window: Tuple[confloat(ge=0, le=1), confloat(ge=0, le=1)] = Field(
        default=(0.6, 0.95), description="Decay-fit window as fractions of R"
    )
    output_dir: str = Field(default="higgslab_out", description="Directory for result files")
    tol: Optional[confloat(ge=1e-13)] = Field(default=None, description="Newton tolerance")
    max_iter: Optional[conint(ge=1)] = Field(default=None, description="Newton iteration cap")
    decay_tol: confloat(gt=0) = Field(default=0.15, description="Relative tolerance on rates")
    ratio_tol: confloat(gt=0) = Field(default=0.10, description="Relative tolerance on rate ratios")
    transport_tol: confloat(gt=0) = Field(default=0.05, description="Tolerance on transport logs")
    override_path_guard: bool = Field(default=False, description="Allow L > R/2")

    @field_validator("kind", mode="before")
    @classmethod
    def _parse_kind(cls, value: Any) -> CyclicKind:
        return CyclicKind.parse(value)

    @field_validator("t")
    @classmethod
    def _increasing_t(cls, values: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError(f"t values must be strictly increasing, got {values}")
        return values

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        if self.kind is CyclicKind.NMINUS1 and self.n < 3:
            raise ValueError(f"The (n-1)-cyclic family needs n >= 3, got {self.n}")
        if self.window[0] >= self.window[1]:
            raise ValueError(f"Fit window must be increasing, got {self.window}")
        for length in self.L:
            if length >= self.R:
                raise ValueError(f"L must be below R = {self.R}, got {length}")
            if length > self.R / 2 and not self.override_path_guard:
                raise ValueError(
                    f"L = {length} exceeds R/2 = {self.R / 2}; set override_path_guard to allow it"
                )
        return self

    @property
    def system(self) -> SystemKind:
        return system_kind(self.kind, self.n)

    def grid_size(self, t: float) -> int:
        if self.N == "auto":
            return auto_grid_size(self.system, None, t, self.R)
        return int(self.N)

    def thetas(self) -> List[float]:
        """Configured angles followed by the seeded random ones."""
        extra = []
        if self.random_thetas:
            rng = np.random.default_rng(self.seed)
            extra = [float(x) for x in rng.uniform(0.0, 2.0 * np.pi, self.random_thetas)]
        return list(self.theta) + extra

    def fit_window(self) -> Tuple[float, float]:
        return (self.window[0] * self.R, self.window[1] * self.R)


def _split(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_config_text(text: str, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment.

    Raises:
        ValueError: on malformed lines, duplicate keys or invalid values
            (pydantic's ValidationError is a ValueError).
    """
    raw: Dict[str, Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ValueError(f"Line {number}: expected 'key = value', got {content!r}")
        key, value = (part.strip() for part in content.split("=", 1))
        if key in raw:
            raise ValueError(f"Line {number}: duplicate key {key!r}")
        raw[key] = _split(value) if key in LIST_KEYS else value
    if overrides:
        raw.update(overrides)
    return ExperimentConfig.model_validate(raw)


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, CyclicKind):
        return value.value
    if isinstance(value, (list, tuple)):
        return ", ".join(_format(item) for item in value)
    return str(value)


def emit_config_text(config: ExperimentConfig) -> str:
    """Deterministic text form; parse_config_text inverts it exactly."""
    lines = []
    for name in ExperimentConfig.model_fields:
        value = getattr(config, name)
        if value is None:
            continue
        lines.append(f"{name} = {_format(value)}")
    return "\n".join(lines) + "\n"


def load_config(path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    return parse_config_text(Path(path).read_text(), overrides)
