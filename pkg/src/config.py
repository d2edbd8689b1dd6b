"""Centralized configuration for the Higgs transport lab.

This module is the single source of truth for numerical defaults and the
environment variables that tune solver, transport and sweep behaviour.
"""

import os
from dataclasses import dataclass, field

from dotenv import load_dotenv


@dataclass
class SolverSettings:
    """Newton solver defaults."""

    tol: float = 1e-11
    max_iter: int = 50
    damping_halvings: int = 30
    cg_tol: float = 1e-12
    cg_maxiter: int = 5000


@dataclass
class TransportSettings:
    """Parallel transport integration defaults."""

    step_fraction: float = 0.05  # h <= step_fraction / rate scale
    min_steps: int = 200  # h <= L / min_steps
    power_iterations: int = 30
    jacobi_tol: float = 1e-12
    hermitian_tol: float = 1e-8


@dataclass
class SweepSettings:
    """Parallel sweep configuration."""

    threads: int = 1


@dataclass
class LoggingConfig:
    """Logging configuration."""

    level: str = "WARNING"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    log_file: str = "higgslab.log"

    # Subpackage log levels
    solver_log_level: str = level
    spectral_log_level: str = level
    transport_log_level: str = level
    lab_log_level: str = level


@dataclass
class AppConfig:
    """Main application configuration."""

    solver: SolverSettings = field(default_factory=SolverSettings)
    transport: TransportSettings = field(default_factory=TransportSettings)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    app_name: str = "Higgs Transport Lab"
    version: str = "0.1.0"

    def __post_init__(self):
        """Load environment variables and validate configuration."""
        self._load_from_environment()
        self._validate_config()

    def _load_from_environment(self):
        """Load configuration from environment variables."""
        load_dotenv()

        self.sweep.threads = int(os.getenv("HIGGSLAB_THREADS", str(self.sweep.threads)))

        self.solver.tol = float(os.getenv("HIGGSLAB_TOL", str(self.solver.tol)))
        self.solver.max_iter = int(
            os.getenv("HIGGSLAB_MAX_ITER", str(self.solver.max_iter))
        )

        self.logging.level = os.getenv("LOG_LEVEL", self.logging.level).upper()
        self.logging.log_file = os.getenv("HIGGSLAB_LOG_FILE", self.logging.log_file)
        self.logging.solver_log_level = os.getenv(
            "SOLVER_LOG_LEVEL", self.logging.level
        ).upper()
        self.logging.spectral_log_level = os.getenv(
            "SPECTRAL_LOG_LEVEL", self.logging.level
        ).upper()
        self.logging.transport_log_level = os.getenv(
            "TRANSPORT_LOG_LEVEL", self.logging.level
        ).upper()
        self.logging.lab_log_level = os.getenv(
            "LAB_LOG_LEVEL", self.logging.level
        ).upper()

    def _validate_config(self):
        """Validate configuration values."""
        if self.sweep.threads < 1:
            raise ValueError(
                f"Invalid HIGGSLAB_THREADS: {self.sweep.threads}. Must be at least 1."
            )

        if self.solver.tol < 1e-13:
            raise ValueError(
                f"Invalid HIGGSLAB_TOL: {self.solver.tol}. Must be at least 1e-13."
            )

        if self.solver.max_iter < 1:
            raise ValueError(
                f"Invalid HIGGSLAB_MAX_ITER: {self.solver.max_iter}. Must be at least 1."
            )

        valid_log_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        for level_name, level_value in [
            ("LOG_LEVEL", self.logging.level),
            ("SOLVER_LOG_LEVEL", self.logging.solver_log_level),
            ("SPECTRAL_LOG_LEVEL", self.logging.spectral_log_level),
            ("TRANSPORT_LOG_LEVEL", self.logging.transport_log_level),
            ("LAB_LOG_LEVEL", self.logging.lab_log_level),
        ]:
            if level_value not in valid_log_levels:
                raise ValueError(
                    f"Invalid {level_name}: {level_value}. Must be one of {valid_log_levels}."
                )


# Global configuration instance
config = AppConfig()


def get_config() -> AppConfig:
    """Get the global configuration instance."""
    return config


def reload_config():
    """Reload configuration from environment variables."""
    global config
    config = AppConfig()
    return config


def get_thread_count() -> int:
    """Get the worker cap for parameter sweeps."""
    return config.sweep.threads


def get_solver_settings() -> SolverSettings:
    """Get the Newton solver defaults."""
    return config.solver


def get_transport_settings() -> TransportSettings:
    """Get the transport integration defaults."""
    return config.transport
