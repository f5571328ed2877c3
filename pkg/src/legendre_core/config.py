"""
Legendre Lab Core Library - Configuration Module

Loads configuration from YAML files and environment variables.
"""

import copy
import os
import yaml
from pathlib import Path
from typing import Dict, Any, Optional
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent
CONFIG_DIR = PROJECT_ROOT / "config"
DEFAULT_CONFIG = CONFIG_DIR / "default.yaml"
CONFIG_ENV_VAR = "LEGENDRE_CONFIG"


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Merge override into a copy of base, recursing into nested sections"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class Config:
    """Configuration manager for Legendre Lab"""

    _instance = None
    _config: Dict[str, Any] = {}

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Config, cls).__new__(cls)
            cls._instance._load_config()
        return cls._instance

    def _load_config(self, override_path: Optional[str] = None):
        """Load configuration from the default YAML file plus any override file"""
        if DEFAULT_CONFIG.exists():
            with open(DEFAULT_CONFIG, "r") as f:
                self._config = yaml.safe_load(f) or {}
        else:
            print(f"Warning: Config file not found at {DEFAULT_CONFIG}")
            self._config = self._get_default_config()

        override_path = override_path or self.get_env(CONFIG_ENV_VAR)
        if override_path:
            if Path(override_path).expanduser().exists():
                self.merge_file(override_path)
            else:
                print(f"Warning: {CONFIG_ENV_VAR} file not found at {override_path}")

    def _get_default_config(self) -> Dict[str, Any]:
        """Fallback default configuration"""
        return {
            "quadrature": {
                "tol": 1.0e-10,
                "graded_tol": 1.0e-8,
                "base_nodes": 10,
                "max_intervals": 4000,
                "max_shells": 40,
                "divergence_window": 8,
                "tail_ratio_max": 0.9375,
            },
            "limits": {
                "k_min": 4,
                "k_max": 40,
                "tol": 1.0e-9,
                "zero_abs_tol": 1.0e-7,
            },
            "classifier": {
                "guard": 0.1,
                "growth_factor": 1.05,
                "growth_rungs": 8,
                "slope_rungs": 12,
                "jobs": 1,
            },
            "bc": {
                "plateau_width": 0.25,
            },
            "spectral": {
                "monomial_max_n": 14,
                "offdiag_tol": 1.0e-12,
                "max_sweeps": 100,
            },
            "ce": {
                "grid_points": 400,
                "bound_slack": 1.0e-6,
                "corpus_size": 20,
                "positivity_samples": 16,
            },
            "output": {
                "format": "pretty",
                "seed": 20240601,
            },
            "logging": {
                "level": "WARNING",
                "file": str(PROJECT_ROOT / "logs" / "legendre.log"),
            },
        }

    def merge_file(self, path: str):
        """Deep-merge a YAML (or JSON) file over the current configuration"""
        override_file = Path(path).expanduser()
        if not override_file.exists():
            from .utils import ConfigError

            raise ConfigError(f"Config override not found: {override_file}")

        with open(override_file, "r") as f:
            data = yaml.safe_load(f) or {}

        if not isinstance(data, dict):
            from .utils import ConfigError

            raise ConfigError(f"Config override must be a mapping: {override_file}")

        self._config = _deep_merge(self._config, data)

    def reload(self, override_path: Optional[str] = None):
        """Re-read configuration files, dropping runtime overrides"""
        self._load_config(override_path)

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by dot-notation key"""
        keys = key.split(".")
        value = self._config

        for k in keys:
            if isinstance(value, dict):
                value = value.get(k)
            else:
                return default

            if value is None:
                return default

        return value

    def set(self, key: str, value: Any):
        """Set configuration value by dot-notation key"""
        keys = key.split(".")
        section = self._config

        for k in keys[:-1]:
            if not isinstance(section.get(k), dict):
                section[k] = {}
            section = section[k]

        section[keys[-1]] = value

    def get_env(self, key: str, default: Optional[str] = None) -> Optional[str]:
        """Get environment variable"""
        return os.getenv(key, default)

    @property
    def log_file(self) -> Path:
        """Log file path, resolved against the project root"""
        path = Path(self.get("logging.file", "logs/legendre.log")).expanduser()
        if not path.is_absolute():
            path = PROJECT_ROOT / path
        return path


# Global config instance
config = Config()
