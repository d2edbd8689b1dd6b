#!/usr/bin/env python3

"""Command-line interface for the Higgs transport lab.

Every subcommand reads a flat ``key = value`` experiment file. Exit codes:
0 when all conclusive verdicts pass, 1 on a failing verdict or solver
failure, 2 on configuration and usage errors.
"""

import os
import sys
from typing import Any, Dict, Optional

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

# Add src directory to Python path when running directly
if __name__ == "__main__":
    src_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    sys.path.insert(0, src_dir)

from .errors import HiggsLabError
from .lab import ExperimentConfig, ExperimentRunner, RunReport, load_config, write_json
from .logging_config import get_logger, set_log_level, setup_logging

console = Console()
logger = get_logger(__name__)

LOGGERS = ("src.grid", "src.toda", "src.solver", "src.spectral", "src.transport", "src.lab")
STATUS_STYLE = {"pass": "green", "fail": "red", "inconclusive": "yellow"}


def _load(config_path: str, out: Optional[str], override_path_guard: bool) -> ExperimentConfig:
    """Read the experiment file, turning validation problems into usage errors."""
    overrides: Dict[str, Any] = {}
    if out is not None:
        overrides["output_dir"] = out
    if override_path_guard:
        overrides["override_path_guard"] = True
    try:
        return load_config(config_path, overrides)
    except ValueError as e:
        raise click.UsageError(f"Invalid configuration {config_path}: {e}") from e


def _format(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.6g}"


def print_verdicts(report: RunReport, title: str) -> None:
    """Render every verdict of a report as a table."""
    table = Table(title=title)
    table.add_column("Criterion", style="cyan")
    table.add_column("Value", style="magenta")
    table.add_column("Target", style="blue")
    table.add_column("Tolerance", style="yellow")
    table.add_column("Status")

    for verdict in report.all_verdicts():
        style = STATUS_STYLE[verdict.status]
        table.add_row(
            escape(verdict.criterion),
            _format(verdict.value),
            _format(verdict.target),
            f"{verdict.tolerance:.3g}",
            f"[{style}]{verdict.status}[/{style}]",
        )
    console.print(table)
    summary = report.summary
    console.print(
        f"[green]{summary.passed} passed[/green], [red]{summary.failed} failed[/red], "
        f"[yellow]{summary.inconclusive} inconclusive[/yellow]"
    )


def _finish(ctx: click.Context, report: RunReport) -> None:
    failing = report.failing()
    for verdict in failing:
        console.print(f"[red]FAIL {escape(verdict.criterion)}[/red]")
    if failing:
        ctx.exit(1)


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
    default=None,
    help="Override the configured level of every lab logger.",
)
def main(log_level: Optional[str]):
    """Numerical lab for cyclic Higgs bundles: solve, verify decay, transport."""
    setup_logging()
    if log_level:
        for name in LOGGERS:
            set_log_level(name, log_level)


def config_options(func):
    func = click.option(
        "--override-path-guard",
        is_flag=True,
        help="Allow ray lengths above R/2.",
    )(func)
    func = click.option("--out", type=click.Path(file_okay=False), help="Output directory.")(func)
    func = click.option(
        "--config",
        "config_path",
        required=True,
        type=click.Path(exists=True, dir_okay=False),
        help="Experiment file.",
    )(func)
    return func


@main.command()
@config_options
@click.pass_context
def solve(ctx: click.Context, config_path: str, out: Optional[str], override_path_guard: bool):
    """Solve the error system for every t and write the fields as CSV."""
    config = _load(config_path, out, override_path_guard)
    runner = ExperimentRunner(config)
    try:
        solutions, written = runner.run_solve()
    except HiggsLabError as e:
        console.print(f"[red]Solver error: {escape(str(e))}[/red]")
        ctx.exit(1)

    table = Table(title=f"Solves: {config.system.label}")
    table.add_column("t", style="cyan")
    table.add_column("N", style="magenta")
    table.add_column("Iterations", style="blue")
    table.add_column("Residual", style="yellow")
    table.add_column("Converged")
    for t, solution in solutions.items():
        table.add_row(
            f"{t:g}",
            str(solution.grid.N),
            str(solution.iterations),
            f"{solution.residual_norm:.3e}",
            "[green]yes[/green]" if solution.converged else "[red]no[/red]",
        )
    console.print(table)
    for solution in solutions.values():
        for warning in solution.warnings:
            console.print(f"[yellow]{escape(warning)}[/yellow]")
    console.print(f"[blue]Wrote {len(written)} files to {runner.output_dir}[/blue]")
    if not all(solution.converged for solution in solutions.values()):
        ctx.exit(1)


@main.command("verify-decay")
@config_options
@click.pass_context
def verify_decay(ctx: click.Context, config_path: str, out: Optional[str], override_path_guard: bool):
    """Fit decay rates of the Toda modes against their predictions."""
    config = _load(config_path, out, override_path_guard)
    runner = ExperimentRunner(config)
    try:
        report = runner.verify_decay()
    except HiggsLabError as e:
        console.print(f"[red]{type(e).__name__}: {escape(str(e))}[/red]")
        ctx.exit(1)
    write_json(report, runner.output_dir / "verify_decay.json")
    print_verdicts(report, f"Decay rates: {config.system.label}")
    _finish(ctx, report)


@main.command()
@config_options
@click.option("--exact-leading", is_flag=True, help="Use zero error fields.")
@click.pass_context
def transport(
    ctx: click.Context,
    config_path: str,
    out: Optional[str],
    override_path_guard: bool,
    exact_leading: bool,
):
    """Integrate parallel transport along every configured ray."""
    config = _load(config_path, out, override_path_guard)
    runner = ExperimentRunner(config, exact_leading=exact_leading)
    try:
        report = runner.transport()
    except HiggsLabError as e:
        console.print(f"[red]{type(e).__name__}: {escape(str(e))}[/red]")
        ctx.exit(1)
    write_json(report, runner.output_dir / "transport.json")
    print_verdicts(report, f"Transport: {config.system.label}")
    _finish(ctx, report)


@main.command()
@config_options
@click.option("--exact-leading", is_flag=True, help="Use zero error fields.")
@click.pass_context
def report(
    ctx: click.Context,
    config_path: str,
    out: Optional[str],
    override_path_guard: bool,
    exact_leading: bool,
):
    """Run every stage and write report.json plus plot-data CSVs."""
    config = _load(config_path, out, override_path_guard)
    runner = ExperimentRunner(config, exact_leading=exact_leading)
    try:
        merged, written = runner.run_report()
    except HiggsLabError as e:
        console.print(f"[red]{type(e).__name__}: {escape(str(e))}[/red]")
        ctx.exit(1)
    print_verdicts(merged, f"Report: {config.system.label}")
    console.print(f"[blue]Wrote {len(written)} files to {runner.output_dir}[/blue]")
    _finish(ctx, merged)


if __name__ == "__main__":
    sys.exit(main())
