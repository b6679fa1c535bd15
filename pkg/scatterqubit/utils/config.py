"""
Application settings for scatterqubit.

Features:
- Loads process-level settings from scatterqubit/config/config.yaml
- Overrides values using .env / environment (SCATTERQUBIT_ prefix)
- Provides a unified AppConfig object used by the logger, sweep runner and CLI

These settings never influence numerical results; the physics of a run is
described entirely by the JSON run configuration (see cli.run_config).
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from scatterqubit.utils.constants import APP_SETTINGS_PATH, OUTPUT_DIR
from scatterqubit.utils.exceptions import ConfigError

# === Paths ===
DOTENV_PATH = Path(".env")
ENV_PREFIX = "SCATTERQUBIT_"

# Load environment variables (highest precedence)
load_dotenv(DOTENV_PATH)

_TRUE_STRINGS = {"1", "true", "yes", "on"}


def _load_yaml_config(path: Path) -> Dict[str, Any]:
    if not path.exists():
        return {}
    with path.open("r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Failed to parse YAML settings {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"Settings file {path} must hold a mapping at the top level.")
    return data


def _as_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in _TRUE_STRINGS


class AppConfig:
    """
    Unified runtime settings loader with ENV override support.

    Priority Order:
    1. SCATTERQUBIT_<KEY> environment variable (.env included)
    2. config.yaml file
    3. Internal default
    """

    def __init__(self, yaml_path: Path = APP_SETTINGS_PATH):
        # === Load from YAML first ===
        self.yaml_config = _load_yaml_config(yaml_path)

        # Logging
        self.log_level: str = str(self._get("LOG_LEVEL", "INFO")).upper()
        self.log_to_file: bool = _as_bool(self._get("LOG_TO_FILE", False))

        # Sweep execution
        try:
            self.max_parallel_processes: int = int(self._get("MAX_PARALLEL_PROCESSES", 1))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"MAX_PARALLEL_PROCESSES must be an integer: {e}")
        if self.max_parallel_processes < 1:
            raise ConfigError("MAX_PARALLEL_PROCESSES must be >= 1.")
        self.show_progress: bool = _as_bool(self._get("SHOW_PROGRESS", False))

        # Output
        self.output_dir: Path = Path(self._get("OUTPUT_DIR", OUTPUT_DIR))

    def _get(self, key: str, default: Optional[Any] = None) -> Any:
        """
        Load value from ENV or YAML config, falling back to default.

        Args:
            key (str): Configuration key name (without prefix).
            default (Optional[Any]): Default fallback value.

        Returns:
            Any: Loaded or default value.
        """
        env_value = os.getenv(f"{ENV_PREFIX}{key}")
        if env_value not in (None, ""):
            return env_value
        yaml_value = self.yaml_config.get(key)
        return default if yaml_value is None else yaml_value

    def as_dict(self) -> Dict[str, Any]:
        """
        Serializes the active settings into a dictionary.

        Returns:
            Dict[str, Any]: Settings values as dictionary.
        """
        return {
            "log_level": self.log_level,
            "log_to_file": self.log_to_file,
            "max_parallel_processes": self.max_parallel_processes,
            "show_progress": self.show_progress,
            "output_dir": str(self.output_dir),
        }


# === Singleton Config Instance ===
config = AppConfig()
