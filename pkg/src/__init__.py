"""Higgs Transport Lab - numerics for cyclic Higgs bundles on the Hitchin section."""

__version__ = "0.1.0"

from .config import get_config, get_solver_settings, get_thread_count, get_transport_settings

__all__ = ["get_config", "get_solver_settings", "get_thread_count", "get_transport_settings"]
