"""Experiment configuration, orchestration and reports behind the CLI."""

from .experiment import ExperimentConfig, emit_config_text, load_config, parse_config_text
from .pipeline import DecayAnalysis, ExperimentRunner
from .report import (
    DecayRecord,
    RunRecord,
    RunReport,
    SolverRecord,
    Summary,
    TransportRecord,
    Verdict,
    write_decay_plot_csv,
    write_json,
    write_modes_csv,
    write_solution_csv,
    write_wkb_csv,
)

__all__ = [
    "DecayAnalysis",
    "DecayRecord",
    "ExperimentConfig",
    "ExperimentRunner",
    "RunRecord",
    "RunReport",
    "SolverRecord",
    "Summary",
    "TransportRecord",
    "Verdict",
    "emit_config_text",
    "load_config",
    "parse_config_text",
    "write_decay_plot_csv",
    "write_json",
    "write_modes_csv",
    "write_solution_csv",
    "write_wkb_csv",
]
