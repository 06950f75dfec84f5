"""
Shared utilities: configuration, logging and error types.
"""

from .config import AppConfig, ConfigManager, configure, get_settings, load_config, reset_settings
from .errors import (
    CircleMethodError,
    ConjectureError,
    DomainError,
    ExitCode,
    FormulaEvaluationError,
    FormulaParseError,
    RegistryLookupError,
    UnsupportedSpecError,
    VerificationError,
)
from .logging import PerformanceTimer, get_logger, log_performance, setup_logging

__all__ = [
    "AppConfig",
    "ConfigManager",
    "configure",
    "get_settings",
    "load_config",
    "reset_settings",
    "CircleMethodError",
    "ConjectureError",
    "DomainError",
    "ExitCode",
    "FormulaEvaluationError",
    "FormulaParseError",
    "RegistryLookupError",
    "UnsupportedSpecError",
    "VerificationError",
    "PerformanceTimer",
    "get_logger",
    "log_performance",
    "setup_logging",
]
