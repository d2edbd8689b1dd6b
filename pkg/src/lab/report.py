"""Report models and result-file writers.

Every numeric comparison in a report is a ``Verdict`` carrying its value,
target and tolerance. JSON output is produced by pydantic and contains no
timestamps, so identical runs give identical files.
"""

from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..solver import MetricSolution, metric_expansion_defect
from ..spectral import DecayFit, EigenProfile

CSV_FORMAT = "%.16e"

Status = Literal["pass", "fail", "inconclusive"]


class Verdict(BaseModel):
    """Outcome of one numeric comparison."""

    criterion: str = Field(..., description="What was compared")
    value: Optional[float] = Field(None, description="Measured quantity")
    target: Optional[float] = Field(None, description="Predicted quantity")
    tolerance: float = Field(..., description="Allowed deviation")
    status: Status = Field(..., description="pass, fail or inconclusive")
    note: str = Field(default="", description="Why a verdict is inconclusive")

    @classmethod
    def relative(cls, criterion: str, value: float, target: float, tolerance: float) -> "Verdict":
        """Pass when |value/target - 1| <= tolerance."""
        gap = abs(value / target - 1.0) if target else abs(value)
        return cls(
            criterion=criterion,
            value=value,
            target=target,
            tolerance=tolerance,
            status="pass" if gap <= tolerance else "fail",
        )

    @classmethod
    def absolute(cls, criterion: str, value: float, target: float, tolerance: float) -> "Verdict":
        """Pass when |value - target| <= tolerance."""
        return cls(
            criterion=criterion,
            value=value,
            target=target,
            tolerance=tolerance,
            status="pass" if abs(value - target) <= tolerance else "fail",
        )

    @classmethod
    def inconclusive(cls, criterion: str, tolerance: float, note: str, target: Optional[float] = None):
        return cls(
            criterion=criterion, target=target, tolerance=tolerance, status="inconclusive", note=note
        )


class SolverRecord(BaseModel):
    iters: int
    residual: float
    converged: bool
    grid_cells: int
    metric_expansion: float = Field(..., description="σ_t²·sup|δ|")
    warnings: List[str] = Field(default_factory=list)
    verdict: Verdict

    @classmethod
    def from_solution(cls, solution: MetricSolution) -> "SolverRecord":
        """Diagnostics of one solve; an unconverged Newton run is a failing verdict."""
        verdict = Verdict(
            criterion=f"solver_converged@t={solution.t!r}",
            value=solution.residual_norm,
            target=0.0,
            tolerance=solution.residual_target,
            status="pass" if solution.converged else "fail",
        )
        return cls(
            iters=solution.iterations,
            residual=solution.residual_norm,
            converged=solution.converged,
            grid_cells=solution.grid.N,
            metric_expansion=metric_expansion_defect(solution),
            warnings=list(solution.warnings),
            verdict=verdict,
        )


class DecayRecord(BaseModel):
    k: Optional[int] = Field(None, description="Mode index; None for ṽ¹ and f")
    label: str
    fitted: Optional[float] = None
    predicted: float
    r_squared: Optional[float] = None
    verdict: Verdict


class TransportRecord(BaseModel):
    diag_logs: List[float]
    mu: List[float]
    offdiag_norm: float
    wkb: float
    wkb_predicted: float
    det_drift: float
    pairing_defect: Optional[float] = None
    vector_distance: List[float] = Field(default_factory=list)
    vector_predicted: List[float] = Field(default_factory=list)
    verdicts: List[Verdict] = Field(default_factory=list)


class RunRecord(BaseModel):
    t: float
    theta: Optional[float] = None
    L: Optional[float] = None
    solver: SolverRecord
    decay: List[DecayRecord] = Field(default_factory=list)
    transport: Optional[TransportRecord] = None

    def verdicts(self) -> List[Verdict]:
        found = [self.solver.verdict]
        found.extend(record.verdict for record in self.decay)
        if self.transport is not None:
            found.extend(self.transport.verdicts)
        return found


class Summary(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    passed: int = Field(0, alias="pass")
    failed: int = Field(0, alias="fail")
    inconclusive: int = 0


class RunReport(BaseModel):
    config: Dict[str, Any]
    runs: List[RunRecord] = Field(default_factory=list)
    cross_checks: List[Verdict] = Field(default_factory=list)
    summary: Summary = Field(default_factory=Summary)

    @classmethod
    def build(
        cls, config: Dict[str, Any], runs: Sequence[RunRecord], cross_checks: Sequence[Verdict] = ()
    ) -> "RunReport":
        report = cls(config=config, runs=list(runs), cross_checks=list(cross_checks))
        verdicts = report.all_verdicts()
        report.summary = Summary(
            passed=sum(v.status == "pass" for v in verdicts),
            failed=sum(v.status == "fail" for v in verdicts),
            inconclusive=sum(v.status == "inconclusive" for v in verdicts),
        )
        return report

    def all_verdicts(self) -> List[Verdict]:
        verdicts = [v for run in self.runs for v in run.verdicts()]
        return verdicts + list(self.cross_checks)

    def failing(self) -> List[Verdict]:
        return [v for v in self.all_verdicts() if v.status == "fail"]

    def merged(self, other: "RunReport") -> "RunReport":
        return RunReport.build(
            self.config, self.runs + other.runs, self.cross_checks + other.cross_checks
        )


def write_json(model: BaseModel, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2, by_alias=True) + "\n")
    return path


def _write_csv(path: Path, columns: Iterable[np.ndarray], header: Sequence[str]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack(list(columns))
    np.savetxt(path, table, fmt=CSV_FORMAT, delimiter=",", header=",".join(header), comments="")
    return path


def _tag(t: float) -> str:
    return repr(float(t)).replace(".", "p")


def write_solution_csv(solution: MetricSolution, directory: Path) -> Path:
    """Columns r, d1..dm[, vtilde1]."""
    dvec = solution.state.dvec
    columns = [solution.grid.r] + [d.values for d in dvec]
    header = ["r"] + [f"d{i + 1}" for i in range(len(dvec))]
    if solution.state.vtilde1 is not None:
        columns.append(solution.state.vtilde1.values)
        header.append("vtilde1")
    return _write_csv(directory / f"solution_t{_tag(solution.t)}.csv", columns, header)


def write_modes_csv(
    solution: MetricSolution,
    profiles: Sequence[EigenProfile],
    envelopes: Dict[int, np.ndarray],
    directory: Path,
) -> Path:
    """Columns r, w0..w_{m-1} (real part, or modulus when complex), envelope_k."""
    columns = [solution.grid.r]
    header = ["r"]
    for profile in profiles:
        values = np.asarray(profile.values)
        columns.append(values.real if np.isrealobj(values) else np.abs(values))
        header.append(f"w{profile.k}")
    for k in sorted(envelopes):
        columns.append(envelopes[k])
        header.append(f"envelope_{k}")
    return _write_csv(directory / f"modes_t{_tag(solution.t)}.csv", columns, header)


def write_decay_plot_csv(profile: EigenProfile, fit: Optional[DecayFit], predicted: float, directory: Path) -> Path:
    """Columns R-r, log|w|, predicted log-envelope anchored at the fit amplitude."""
    grid = profile.grid
    magnitude = np.abs(np.asarray(profile.values))
    keep = magnitude > 0
    distance = grid.R - grid.r[keep]
    if fit is not None:
        anchor = np.log(fit.amplitude)
    elif keep.any():
        anchor = np.log(magnitude[keep][-1])
    else:
        anchor = 0.0
    columns = [distance, np.log(magnitude[keep]), anchor - predicted * distance]
    name = f"decay_t{_tag(profile.t)}_{profile.label}.csv"
    return _write_csv(directory / name, columns, ["distance", "log_abs", "predicted_log_envelope"])


def write_wkb_csv(rows: Sequence[Sequence[float]], directory: Path) -> Path:
    """Columns t, theta, L, wkb, max_mu."""
    table = np.array(rows, dtype=float).reshape(-1, 5)
    return _write_csv(directory / "wkb.csv", table.T, ["t", "theta", "L", "wkb", "max_mu"])
