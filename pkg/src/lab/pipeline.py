"""Experiment orchestration: solve, analyse modes, transport, judge.

Solves over the t sweep run on a thread pool capped by HIGGSLAB_THREADS;
records are assembled afterwards in configuration order, so reports do not
depend on scheduling.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config import get_thread_count
from ..errors import EmptyWindowError
from ..grid import RadialGrid
from ..logging_config import get_logger
from ..solver import (
    BoundaryData,
    MetricSolution,
    SolveConfig,
    comparison_yk,
    solve_dirichlet,
    zero_solution,
)
from ..spectral import (
    DecayFit,
    EigenProfile,
    all_modes,
    compute_wk,
    derivative_profile,
    fit_decay,
    perturbation_profile,
    predicted_rate,
    vtilde1_profile,
)
from ..transport import (
    RayPath,
    integrate_transport,
    pairing_check,
    vector_distance,
)
from .experiment import ExperimentConfig
from .report import (
    DecayRecord,
    RunRecord,
    RunReport,
    SolverRecord,
    TransportRecord,
    Verdict,
    write_decay_plot_csv,
    write_json,
    write_modes_csv,
    write_solution_csv,
    write_wkb_csv,
)

logger = get_logger(__name__)

DET_TOL = 1e-8
EXACT_TOL = 1e-8
OFFDIAG_FLOOR = 1e-12
BASE_POINT_TOL = 1e-3


@dataclass
class DecayAnalysis:
    """Profiles of one solve with their fits (None when inconclusive)."""

    solution: MetricSolution
    profiles: List[EigenProfile] = field(default_factory=list)
    fits: List[Optional[DecayFit]] = field(default_factory=list)
    records: List[DecayRecord] = field(default_factory=list)


class ExperimentRunner:
    """Runs the stages of one ExperimentConfig."""

    def __init__(
        self,
        config: ExperimentConfig,
        threads: Optional[int] = None,
        exact_leading: bool = False,
    ):
        """Initialize the runner.

        Args:
            config: Validated experiment configuration.
            threads: Worker cap; defaults to HIGGSLAB_THREADS.
            exact_leading: Skip solving and use the exact leading model.
        """
        self.config = config
        self.system = config.system
        self.threads = threads or get_thread_count()
        self.exact_leading = exact_leading
        self.output_dir = Path(config.output_dir)
        self._solutions: Optional[Dict[float, MetricSolution]] = None
        self._analyses: Optional[List[DecayAnalysis]] = None

    # Solving ---------------------------------------------------------------

    def _solve_one(self, t: float) -> MetricSolution:
        grid = RadialGrid(self.config.R, self.config.grid_size(t))
        if self.exact_leading or self.config.alpha == 0:
            return zero_solution(self.system, None, t, grid)
        boundary = BoundaryData.constant(
            self.system, t, self.config.alpha, self.config.boundary_profile
        )
        settings = SolveConfig()
        if self.config.tol is not None:
            settings.tol = self.config.tol
        if self.config.max_iter is not None:
            settings.max_iter = self.config.max_iter
        logger.info(f"Solving {self.system.label} at t={t} on N={grid.N}")
        return solve_dirichlet(self.system, None, t, grid, boundary, settings)

    def solve_all(self) -> Dict[float, MetricSolution]:
        """Solutions keyed by t, in configuration order."""
        if self._solutions is None:
            workers = max(1, min(self.threads, len(self.config.t)))
            with ThreadPoolExecutor(max_workers=workers) as pool:
                solved = list(pool.map(self._solve_one, self.config.t))
            self._solutions = dict(zip(self.config.t, solved))
        return self._solutions

    # Decay -----------------------------------------------------------------

    def _profiles(self, solution: MetricSolution) -> List[EigenProfile]:
        state = solution.state
        m = self.system.toda_order
        modes = [compute_wk(state, k) for k in range(1, m // 2 + 1)]
        profiles = list(modes)
        if modes:
            profiles.append(derivative_profile(modes[0]))
        if not self.system.is_ncyclic:
            profiles.append(vtilde1_profile(state))
            profiles.append(perturbation_profile(state))
        return profiles

    def _judge(self, profile: EigenProfile) -> Tuple[EigenProfile, Optional[DecayFit], DecayRecord]:
        predicted = predicted_rate(profile)
        criterion = f"decay_rate[{profile.label}]@t={profile.t!r}"
        try:
            fit = fit_decay(profile, self.config.fit_window())
        except EmptyWindowError as exc:
            verdict = Verdict.inconclusive(criterion, self.config.decay_tol, str(exc), predicted)
            return profile, None, DecayRecord(
                k=profile.k, label=profile.label, predicted=predicted, verdict=verdict
            )
        verdict = Verdict.relative(criterion, fit.rate, predicted, self.config.decay_tol)
        fitted = profile.with_fit(fit.rate, fit.amplitude, fit.window)
        return fitted, fit, DecayRecord(
            k=profile.k,
            label=profile.label,
            fitted=fit.rate,
            predicted=predicted,
            r_squared=fit.r_squared,
            verdict=verdict,
        )

    def decay_analyses(self) -> List[DecayAnalysis]:
        analyses = []
        for t, solution in self.solve_all().items():
            analysis = DecayAnalysis(solution)
            for profile in self._profiles(solution):
                fitted, fit, record = self._judge(profile)
                analysis.profiles.append(fitted)
                analysis.fits.append(fit)
                analysis.records.append(record)
            analyses.append(analysis)
        return analyses

    def _ratio_checks(self, analyses: List[DecayAnalysis]) -> List[Verdict]:
        """Rate ratios between consecutive t against (t2/t1)^{1/b}."""
        checks = []
        for first, second in zip(analyses, analyses[1:]):
            t1, t2 = first.solution.t, second.solution.t
            expected = (t2 / t1) ** (1.0 / self.system.b)
            for a, b in zip(first.records, second.records):
                criterion = f"rate_ratio[{a.label}]@t={t1!r}->{t2!r}"
                if a.fitted is None or b.fitted is None:
                    checks.append(
                        Verdict.inconclusive(criterion, self.config.ratio_tol, "missing fit", expected)
                    )
                    continue
                checks.append(
                    Verdict.relative(criterion, b.fitted / a.fitted, expected, self.config.ratio_tol)
                )
        return checks

    def verify_decay(self) -> RunReport:
        analyses = self.decay_analyses()
        runs = [
            RunRecord(
                t=a.solution.t,
                solver=SolverRecord.from_solution(a.solution),
                decay=a.records,
            )
            for a in analyses
        ]
        report = RunReport.build(self.config_echo(), runs, self._ratio_checks(analyses))
        self._analyses = analyses
        return report

    # Transport -------------------------------------------------------------

    def _transport_record(self, solution: MetricSolution, theta: float, L: float) -> TransportRecord:
        tol = self.config.transport_tol
        path = RayPath(L, theta, solution.grid)
        result = integrate_transport(solution, path, exact_leading=self.exact_leading)
        tag = f"@t={solution.t!r},theta={theta!r},L={L!r}"
        exact = self.exact_leading or self.config.alpha == 0
        log_tol = EXACT_TOL if exact else tol
        mu = result.mu
        top = float(np.max(mu))

        verdicts = [
            Verdict.absolute(
                f"diag_logs{tag}", float(np.max(np.abs(result.diag_logs - mu))), 0.0, log_tol
            ),
            Verdict.absolute(f"wkb{tag}", result.wkb, top, log_tol),
            Verdict.absolute(f"det_drift{tag}", result.det_drift, 0.0, DET_TOL),
        ]

        pairing = None
        if not self.system.is_ncyclic or self.system.n % 2 == 0:
            pairing = pairing_check(result, self.system)
            verdicts.append(Verdict.absolute(f"pairing{tag}", pairing, 0.0, log_tol))

        distances = vector_distance(solution, path, result)
        predicted = np.sort(-2.0 * L * mu)[::-1]
        if L > 0:
            distance_tol = EXACT_TOL if exact else tol * 2.0 * L
        else:
            distance_tol = BASE_POINT_TOL
        verdicts.append(
            Verdict.absolute(
                f"vector_distance{tag}",
                float(np.max(np.abs(distances - predicted))),
                0.0,
                distance_tol,
            )
        )
        return TransportRecord(
            diag_logs=[float(x) for x in result.diag_logs],
            mu=[float(x) for x in mu],
            offdiag_norm=result.offdiag_norm,
            wkb=result.wkb,
            wkb_predicted=top,
            det_drift=result.det_drift,
            pairing_defect=pairing,
            vector_distance=[float(x) for x in distances],
            vector_predicted=[float(x) for x in predicted],
            verdicts=verdicts,
        )

    def _trend_checks(self, runs: List[RunRecord]) -> List[Verdict]:
        """offdiag_norm must not grow with t for a fixed ray."""
        checks = []
        by_ray: Dict[Tuple[float, float], List[RunRecord]] = {}
        for run in runs:
            by_ray.setdefault((run.theta, run.L), []).append(run)
        for (theta, L), series in by_ray.items():
            for a, b in zip(series, series[1:]):
                before, after = a.transport.offdiag_norm, b.transport.offdiag_norm
                criterion = f"offdiag_trend@theta={theta!r},L={L!r},t={a.t!r}->{b.t!r}"
                passed = after <= before or after <= OFFDIAG_FLOOR
                checks.append(
                    Verdict(
                        criterion=criterion,
                        value=after / before if before > 0 else 0.0,
                        target=1.0,
                        tolerance=OFFDIAG_FLOOR,
                        status="pass" if passed else "fail",
                    )
                )
        return checks

    def transport(self) -> RunReport:
        runs = []
        for theta in self.config.thetas():
            for L in self.config.L:
                for t, solution in self.solve_all().items():
                    runs.append(
                        RunRecord(
                            t=t,
                            theta=theta,
                            L=L,
                            solver=SolverRecord.from_solution(solution),
                            transport=self._transport_record(solution, theta, L),
                        )
                    )
        return RunReport.build(self.config_echo(), runs, self._trend_checks(runs))

    def wkb_rows(self, report: RunReport) -> List[List[float]]:
        return [
            [run.t, run.theta, run.L, run.transport.wkb, run.transport.wkb_predicted]
            for run in report.runs
            if run.transport is not None
        ]

    # Output ----------------------------------------------------------------

    def config_echo(self) -> dict:
        return self.config.model_dump(mode="json")

    def write_solutions(self) -> List[Path]:
        """Solution CSVs plus one JSON sidecar of solver diagnostics per t."""
        written = []
        for t, solution in self.solve_all().items():
            written.append(write_solution_csv(solution, self.output_dir))
            sidecar = self.output_dir / f"{written[-1].stem}.json"
            written.append(write_json(SolverRecord.from_solution(solution), sidecar))
        return written

    def write_mode_files(self, analyses: List[DecayAnalysis]) -> List[Path]:
        """Per-profile decay plot data and one modes table per t."""
        written = []
        for analysis in analyses:
            solution = analysis.solution
            modes = list(all_modes(solution.state))
            envelopes = {}
            for profile, fit in zip(analysis.profiles, analysis.fits):
                rate = predicted_rate(profile)
                if profile.source == "w":
                    envelopes[profile.k] = self._envelope(solution, rate)
                written.append(write_decay_plot_csv(profile, fit, rate, self.output_dir))
            written.append(write_modes_csv(solution, modes, envelopes, self.output_dir))
        return written

    def _envelope(self, solution: MetricSolution, rate: float) -> np.ndarray:
        """Boundary amplitude times the comparison profile of the predicted rate."""
        amplitude = solution.boundary.amplitude
        return amplitude * comparison_yk(rate**2, solution.grid.R, solution.grid.r)

    def run_solve(self) -> Tuple[Dict[float, MetricSolution], List[Path]]:
        solutions = self.solve_all()
        return solutions, self.write_solutions()

    def run_report(self) -> Tuple[RunReport, List[Path]]:
        """Every stage, merged into one report with plot-data CSVs."""
        decay = self.verify_decay()
        transport = self.transport()
        report = decay.merged(transport)
        written = self.write_mode_files(self._analyses or self.decay_analyses())
        written.append(write_wkb_csv(self.wkb_rows(transport), self.output_dir))
        written.append(write_json(report, self.output_dir / "report.json"))
        return report, written

