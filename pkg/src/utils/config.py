"""
Configuration management for the circle-method toolkit.

Settings come from three layers: model defaults, the YAML file
``config/app.yaml`` (a ``default`` section deep-merged with the section of the
active environment) and ``CIRCLE_``-prefixed environment variables, which win
over the file.
"""

import os
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent
ENVIRONMENTS = ("development", "testing", "production")


class PrecisionConfig(BaseModel):
    """Working precision of the evaluator."""
    digits: int = Field(default=50, ge=15, description="Significant decimal digits")
    guard_digits: int = Field(default=10, ge=0, description="Extra digits carried internally")


class EvaluatorConfig(BaseModel):
    """Defaults for formula evaluation."""
    truncation: int = Field(default=10, ge=1, description="Largest k summed")


class HarnessConfig(BaseModel):
    """Defaults for the verification harness."""
    n_lo: int = Field(default=1, ge=1)
    n_hi: int = Field(default=100, ge=1)
    truncation: int = Field(default=10, ge=1)
    soft_tolerance: float = Field(default=0.02, ge=0.0)
    cache_dir: Optional[str] = None
    reference_table: str = "config/reference_table.yaml"


class OmegaConfig(BaseModel):
    """Multiplier system settings."""
    debug_checks: bool = False


class LoggingConfig(BaseModel):
    """Logging settings."""
    level: str = "WARNING"
    file: Optional[str] = None
    json_format: bool = False


class AppConfig(BaseSettings):
    """Main application configuration."""

    model_config = SettingsConfigDict(
        env_prefix="CIRCLE_",
        env_nested_delimiter="__",
        env_file=".env",
        extra="ignore",
    )

    environment: str = Field(default="development")
    debug: bool = Field(default=False)

    precision: PrecisionConfig = Field(default_factory=PrecisionConfig)
    evaluator: EvaluatorConfig = Field(default_factory=EvaluatorConfig)
    harness: HarnessConfig = Field(default_factory=HarnessConfig)
    omega: OmegaConfig = Field(default_factory=OmegaConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls,
        init_settings,
        env_settings,
        dotenv_settings,
        file_secret_settings,
    ):
        # Values from the YAML file arrive as init kwargs; the environment overrides them.
        return env_settings, dotenv_settings, init_settings, file_secret_settings


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """
    Configuration manager for the toolkit.

    Loads the YAML file for the requested environment and exposes both the raw
    merged mapping and the validated ``AppConfig``.
    """

    def __init__(
        self,
        config_file: Optional[str] = None,
        environment: Optional[str] = None
    ):
        """
        Initialize the configuration manager.

        Args:
            config_file: Path to configuration file
            environment: Environment name (development, testing, production)
        """
        self.config_file = config_file
        self.environment = environment or os.getenv("CIRCLE_ENVIRONMENT", "development")

        self._config_data = self._load_config()
        # the explicit environment wins over CIRCLE_ENVIRONMENT
        self.app_config = AppConfig(**self._config_data).model_copy(update={"environment": self.environment})

        logger.debug(f"Configuration loaded for environment: {self.environment}")

    def _load_config(self) -> Dict[str, Any]:
        """Load the default section merged with the environment section."""
        config_data: Dict[str, Any] = {}

        if self.config_file and Path(self.config_file).exists():
            with open(self.config_file, 'r') as file:
                file_config = yaml.safe_load(file) or {}

            config_data = dict(file_config.get("default", {}))
            if self.environment in file_config:
                config_data = _deep_merge(config_data, file_config[self.environment] or {})
        elif self.config_file:
            logger.warning(f"Config file not found: {self.config_file}, using defaults")

        config_data["environment"] = self.environment
        return config_data

    def get_config_value(self, key: str, default: Any = None) -> Any:
        """
        Get a configuration value by key.

        Args:
            key: Configuration key (supports dot notation)
            default: Default value if key not found

        Returns:
            Value from the validated configuration, or default
        """
        value: Any = self.app_config.model_dump()
        try:
            for part in key.split('.'):
                value = value[part]
            return value
        except (KeyError, TypeError):
            return default

    def to_dict(self) -> Dict[str, Any]:
        """Get the merged file configuration as a dictionary."""
        return self._config_data.copy()


def resolve_project_path(path: str) -> Path:
    """Resolve a configured path relative to the project root."""
    candidate = Path(path)
    if candidate.is_absolute() or candidate.exists():
        return candidate
    return PROJECT_ROOT / candidate


def load_config(
    config_file: Optional[str] = None,
    environment: Optional[str] = None
) -> ConfigManager:
    """
    Load configuration from file and environment.

    Args:
        config_file: Path to configuration file
        environment: Environment name

    Returns:
        ConfigManager: Configured configuration manager
    """
    if config_file is None:
        config_files = [
            "config/app.yaml",
            str(PROJECT_ROOT / "config" / "app.yaml"),
        ]

        for file_path in config_files:
            if Path(file_path).exists():
                config_file = file_path
                break

    return ConfigManager(config_file, environment)


_settings: Optional[AppConfig] = None


def get_settings() -> AppConfig:
    """Return the process-wide configuration, loading it on first use."""
    global _settings
    if _settings is None:
        _settings = load_config().app_config
    return _settings


def configure(config_file: Optional[str] = None, environment: Optional[str] = None) -> AppConfig:
    """Load and install the process-wide configuration."""
    global _settings
    _settings = load_config(config_file, environment).app_config
    return _settings


def reset_settings() -> None:
    """Forget the installed configuration so the next call reloads it."""
    global _settings
    _settings = None
