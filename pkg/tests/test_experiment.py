"""Tests for experiment configuration, reports and the runner."""

import json

import numpy as np
import pytest

from src.lab import (
    ExperimentRunner,
    RunReport,
    Verdict,
    emit_config_text,
    load_config,
    parse_config_text,
)
from src.toda import CyclicKind

SAMPLE = """
# three-cyclic sweep
kind = n-cyclic
n = 3
t = 125, 1000
theta = 0.0, 0.4
L = 0.3
"""


class TestConfigText:
    """Test the key = value format."""

    def test_parse(self):
        """Test a sample file parses with defaults filled in."""
        config = parse_config_text(SAMPLE)
        assert config.kind is CyclicKind.NCYCLIC
        assert config.n == 3
        assert config.t == [125.0, 1000.0]
        assert config.theta == [0.0, 0.4]
        assert config.L == [0.3]
        assert config.N == "auto"
        assert config.alpha == 1e-3
        assert config.window == (0.6, 0.95)

    def test_round_trip(self):
        """Test emitting and reparsing gives the same configuration."""
        config = parse_config_text(SAMPLE + "N = 256\nalpha = 0.002\nrandom_thetas = 2\n")
        text = emit_config_text(config)
        assert parse_config_text(text) == config
        assert emit_config_text(parse_config_text(text)) == text

    def test_load_with_overrides(self, tmp_path):
        """Test files load and overrides win."""
        path = tmp_path / "run.cfg"
        path.write_text(SAMPLE)
        config = load_config(path, {"output_dir": str(tmp_path / "out")})
        assert config.output_dir == str(tmp_path / "out")

    def test_kind_alias(self):
        """Test kind aliases are accepted."""
        config = parse_config_text("kind = nminus1\nn = 4\nt = 500\n")
        assert config.kind is CyclicKind.NMINUS1
        assert config.system.b == 3

    def test_grid_size(self):
        """Test auto and fixed grid sizes."""
        assert parse_config_text(SAMPLE).grid_size(125.0) == 512
        assert parse_config_text(SAMPLE + "N = 64\n").grid_size(125.0) == 64

    def test_seeded_thetas(self):
        """Test random angles are reproducible and appended after fixed ones."""
        text = SAMPLE + "random_thetas = 3\nseed = 11\n"
        first = parse_config_text(text).thetas()
        second = parse_config_text(text).thetas()
        assert first == second
        assert len(first) == 5
        assert first[:2] == [0.0, 0.4]
        assert all(0.0 <= theta < 2.0 * np.pi for theta in first[2:])

    def test_fit_window(self):
        """Test the fit window scales with R."""
        config = parse_config_text(SAMPLE + "R = 2.0\n")
        assert config.fit_window() == pytest.approx((1.2, 1.9))


class TestConfigValidation:
    """Test rejected configurations."""

    def test_path_guard(self):
        """Test L > R/2 needs the override."""
        with pytest.raises(ValueError, match="exceeds R/2"):
            parse_config_text("kind = n-cyclic\nn = 3\nt = 125\nL = 0.6\n")
        config = parse_config_text(
            "kind = n-cyclic\nn = 3\nt = 125\nL = 0.6\noverride_path_guard = true\n"
        )
        assert config.L == [0.6]

    def test_length_below_radius(self):
        """Test L >= R is rejected even with the override."""
        with pytest.raises(ValueError, match="below R"):
            parse_config_text("kind = n-cyclic\nn = 3\nt = 125\nL = 1.0\noverride_path_guard = true\n")

    def test_duplicate_key(self):
        """Test repeated keys are rejected."""
        with pytest.raises(ValueError, match="duplicate key"):
            parse_config_text("kind = n-cyclic\nn = 3\nn = 4\nt = 125\n")

    def test_malformed_line(self):
        """Test lines without '=' are rejected."""
        with pytest.raises(ValueError, match="expected 'key = value'"):
            parse_config_text("kind n-cyclic\n")

    def test_empty_t(self):
        """Test an empty t list is rejected."""
        with pytest.raises(ValueError):
            parse_config_text("kind = n-cyclic\nn = 3\nt =\n")

    def test_decreasing_t(self):
        """Test t must increase."""
        with pytest.raises(ValueError, match="strictly increasing"):
            parse_config_text("kind = n-cyclic\nn = 3\nt = 1000, 125\n")

    def test_alpha_limit(self):
        """Test alpha above 0.5 is rejected."""
        with pytest.raises(ValueError):
            parse_config_text("kind = n-cyclic\nn = 3\nt = 125\nalpha = 0.6\n")

    def test_bad_kind(self):
        """Test unknown kinds are rejected."""
        with pytest.raises(ValueError, match="Unknown cyclic kind"):
            parse_config_text("kind = pentagonal\nn = 3\nt = 125\n")

    def test_minus1_rank(self):
        """Test the (n-1)-cyclic family needs n >= 3."""
        with pytest.raises(ValueError, match="n >= 3"):
            parse_config_text("kind = n-1-cyclic\nn = 2\nt = 125\n")

    def test_unknown_key(self):
        """Test unknown keys are rejected."""
        with pytest.raises(ValueError):
            parse_config_text("kind = n-cyclic\nn = 3\nt = 125\ncolour = blue\n")


class TestVerdicts:
    """Test verdict and report bookkeeping."""

    def test_relative(self):
        """Test relative comparisons."""
        assert Verdict.relative("r", 10.5, 10.0, 0.1).status == "pass"
        assert Verdict.relative("r", 12.0, 10.0, 0.1).status == "fail"

    def test_absolute(self):
        """Test absolute comparisons."""
        assert Verdict.absolute("a", 0.01, 0.0, 0.05).status == "pass"
        assert Verdict.absolute("a", 0.1, 0.0, 0.05).status == "fail"

    def test_summary_counts(self):
        """Test the summary counts each status and serializes with aliases."""
        checks = [
            Verdict.absolute("a", 0.0, 0.0, 1.0),
            Verdict.absolute("b", 2.0, 0.0, 1.0),
            Verdict.inconclusive("c", 1.0, "empty window"),
        ]
        report = RunReport.build({}, [], checks)
        assert (report.summary.passed, report.summary.failed, report.summary.inconclusive) == (1, 1, 1)
        dumped = json.loads(report.model_dump_json(by_alias=True))
        assert dumped["summary"] == {"pass": 1, "fail": 1, "inconclusive": 1}
        assert [v.criterion for v in report.failing()] == ["b"]


class TestRunner:
    """Test the experiment runner end to end."""

    def test_exact_leading_transport(self, tmp_path):
        """Test every transport verdict passes for the exact model."""
        config = parse_config_text(
            f"kind = n-cyclic\nn = 4\nt = 64, 256\ntheta = 0.0, 0.5\nL = 0.3\noutput_dir = {tmp_path}\n"
        )
        report = ExperimentRunner(config, exact_leading=True).transport()
        assert report.summary.failed == 0
        assert report.summary.passed == len(report.all_verdicts())
        assert len(report.runs) == 4
        assert all(run.transport.pairing_defect is not None for run in report.runs)

    def test_zero_alpha_decay_is_inconclusive(self, tmp_path):
        """Test zero boundary data leaves nothing to fit."""
        config = parse_config_text(f"kind = n-1-cyclic\nn = 4\nt = 500\nalpha = 0\noutput_dir = {tmp_path}\n")
        report = ExperimentRunner(config).verify_decay()
        assert report.summary.failed == 0
        assert report.summary.inconclusive == len(report.runs[0].decay)
        assert report.runs[0].solver.verdict.status == "pass"
        assert {record.label for record in report.runs[0].decay} == {"w1", "dz_w1", "vtilde1", "perturbation"}

    def test_unconverged_solve_fails(self, tmp_path):
        """Test a Newton run stopped by its iteration cap is a failing verdict."""
        config = parse_config_text(
            f"kind = n-cyclic\nn = 3\nt = 125\nalpha = 0.4\nmax_iter = 1\noutput_dir = {tmp_path}\n"
        )
        report = ExperimentRunner(config).verify_decay()
        solver = report.runs[0].solver
        assert not solver.converged
        assert solver.verdict.status == "fail"
        assert "solver_converged@t=125.0" in [v.criterion for v in report.failing()]

    def test_solve_writes_files(self, tmp_path):
        """Test solution CSVs and JSON sidecars are written per t."""
        config = parse_config_text(f"kind = n-cyclic\nn = 3\nt = 8, 27\noutput_dir = {tmp_path}\n")
        solutions, written = ExperimentRunner(config).run_solve()
        assert list(solutions) == [8.0, 27.0]
        assert all(solution.converged for solution in solutions.values())
        names = sorted(path.name for path in written)
        assert names == ["solution_t27p0.csv", "solution_t27p0.json", "solution_t8p0.csv", "solution_t8p0.json"]
        header = (tmp_path / "solution_t8p0.csv").read_text().splitlines()[0]
        assert header == "r,d1,d2,d3"

    def test_report_is_deterministic(self, tmp_path):
        """Test two runs with different thread counts write identical reports."""
        outputs = []
        for threads, name in ((1, "first"), (2, "second")):
            config = parse_config_text(
                f"kind = n-cyclic\nn = 3\nt = 8, 27\nL = 0.2\noutput_dir = {tmp_path / name}\n"
            )
            report, written = ExperimentRunner(config, threads=threads).run_report()
            outputs.append(json.loads((tmp_path / name / "report.json").read_text()))
            assert (tmp_path / name / "wkb.csv").exists()
            assert any(path.name.startswith("decay_t8p0_w1") for path in written)
        first, second = outputs
        first["config"].pop("output_dir")
        second["config"].pop("output_dir")
        assert first == second


if __name__ == "__main__":
    pytest.main([__file__])
