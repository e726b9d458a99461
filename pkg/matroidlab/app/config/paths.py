from __future__ import annotations

from pathlib import Path
import sys


# Resolve repository root from this file location
REPO_ROOT = Path(__file__).resolve().parents[3]

CONFIG_DIR = REPO_ROOT / "config"
CONFIG_BASE = CONFIG_DIR / "config.base.yaml"
CONFIG_CI_YAML = CONFIG_DIR / "config.ci.yaml"
LOGGING_CONFIG = CONFIG_DIR / "logging_config.yaml"
GOLDEN_DIR = REPO_ROOT / "matroidlab" / "tests" / "golden"


def assert_layout() -> None:
    """Fail fast if no usable config file is present."""
    if not CONFIG_BASE.exists() and not CONFIG_CI_YAML.exists():
        print(f"FATAL: missing config: {CONFIG_BASE} or {CONFIG_CI_YAML}", file=sys.stderr)
        raise SystemExit(1)


def get_config_path() -> Path:
    """Config path for the layered loader: base file, else the CI fallback."""
    if CONFIG_BASE.exists():
        return CONFIG_BASE
    elif CONFIG_CI_YAML.exists():
        return CONFIG_CI_YAML  # CI fallback
    else:
        raise SystemExit("FATAL: no config file found")
