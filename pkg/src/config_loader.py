"""
Load and validate configuration from config.yaml and .env.
Environment values win over YAML; CLI flags win over both (see src/cli.py).
"""
import os
from pathlib import Path

import yaml
from dotenv import load_dotenv

from src.errors import ConfigError

# Load .env from project root
_PROJECT_ROOT = Path(__file__).resolve().parent.parent
load_dotenv(_PROJECT_ROOT / ".env")

DEFAULT_SEED = 0xD1AC

_DEFAULT_TOLERANCES = {
    "identity": 1e-12,
    "norm": 1e-10,
    "sharpness_sphere": 1e-9,
    "sharpness_euclid": 1e-5,
    "one_sided": 1e-9,
    "eq1": 1e-8,
    "isometry": 1e-6,
    "kernel_recursion": 1e-6,
    "one_sided_euclid": 1e-6,
    "kernel_bound": 0.0,
    "kernel_transport": 1e-3,
    "convention": 1e-4,
    "c1_inverse": 1e-5,
}
TOLERANCE_NAMES = tuple(_DEFAULT_TOLERANCES)


def get_project_root() -> Path:
    return _PROJECT_ROOT


def load_config(config_path: Path | None = None) -> dict:
    if config_path is None:
        config_path = _PROJECT_ROOT / "config" / "config.yaml"
    config_path = Path(config_path)
    if not config_path.exists():
        raise FileNotFoundError(f"Config not found: {config_path}")
    with open(config_path, "r", encoding="utf-8") as f:
        config = yaml.safe_load(f) or {}
    if not isinstance(config, dict):
        raise ConfigError(f"Config must be a mapping: {config_path}")
    return config


def get_path(key: str, config: dict = None, default: str | None = None) -> Path:
    if config is None:
        config = load_config()
    rel = config.get("paths", {}).get(key, default)
    if rel is None:
        raise ConfigError(f"paths.{key} missing from config")
    return _PROJECT_ROOT / rel


def thread_cap(config: dict | None = None) -> int:
    """DIRAC_SHARP_THREADS, else parallel.threads, else 1."""
    raw = os.getenv("DIRAC_SHARP_THREADS", "").strip()
    if not raw and config is not None:
        raw = str(config.get("parallel", {}).get("threads", 1))
    try:
        value = int(raw) if raw else 1
    except ValueError:
        raise ConfigError(f"DIRAC_SHARP_THREADS must be an integer, got {raw!r}")
    return max(1, value)


def tolerance(name: str, config: dict | None = None, overrides: dict | None = None) -> float:
    """Resolve one tolerance: CLI override > YAML > built-in default."""
    if overrides and overrides.get(name) is not None:
        return float(overrides[name])
    if config is not None:
        value = config.get("tolerances", {}).get(name)
        if value is not None:
            return float(value)
    if name not in _DEFAULT_TOLERANCES:
        raise ConfigError(f"Unknown tolerance: {name}")
    return _DEFAULT_TOLERANCES[name]


def quadrature_setting(name: str, default, config: dict | None = None):
    if config is None:
        return default
    return config.get("quadrature", {}).get(name, default)
