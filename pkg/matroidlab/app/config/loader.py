from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .paths import REPO_ROOT


@dataclass
class Settings:
    # Randomized harnesses
    SEED: int
    WORKERS: int

    # SAT solver
    SOLVER_COMMAND: Optional[str]
    SOLVER_TIME_LIMIT_S: float

    # Search caps
    ISOMORPHISM_MAX_N: int
    REDUCED_WITNESS_CAP: int
    BLOCK_SEARCH_CAP: int

    DEBUG_VALIDATE: bool

    # Run records
    LOG_DIR: Path
    RUN_LOGS: bool

    # Trial counts per reproduce criterion
    HARNESS: Dict[str, int] = field(default_factory=dict)


def _require_key(obj: Dict[str, Any], key: str) -> Any:
    if key not in obj:
        print(f"FATAL: missing key '{key}' in config", file=sys.stderr)
        raise SystemExit(1)
    return obj[key]


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Deep merge two dictionaries, with override taking precedence."""
    result = base.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value
    return result


def _env_flag(name: str) -> Optional[bool]:
    value = os.environ.get(name)
    if value is None or value == "":
        return None
    return value.strip().lower() in ("1", "true", "yes", "on")


def load_settings(config_path: Path) -> Settings:
    """Load settings from layered config: base + user overrides, then environment."""
    config_dir = config_path.parent
    base_config_path = config_dir / "config.base.yaml"
    user_config_path = config_dir / "config.user.yaml"

    # Load base configuration (required)
    try:
        with base_config_path.open("r") as f:
            base_data = yaml.safe_load(f) or {}
    except FileNotFoundError:
        # CI fallback: read the given file on its own
        try:
            with config_path.open("r") as f:
                data = yaml.safe_load(f) or {}
        except FileNotFoundError:
            print(f"FATAL: missing config at {config_path} or {base_config_path}", file=sys.stderr)
            raise SystemExit(1)
        except Exception as e:
            print(f"FATAL: invalid config at {config_path}: {e}", file=sys.stderr)
            raise SystemExit(1)
    except Exception as e:
        print(f"FATAL: invalid base config at {base_config_path}: {e}", file=sys.stderr)
        raise SystemExit(1)
    else:
        # Load user overrides (optional)
        user_data = {}
        if user_config_path.exists():
            try:
                with user_config_path.open("r") as f:
                    user_data = yaml.safe_load(f) or {}
                print(f"Loaded user config overrides from {user_config_path}", file=sys.stderr)
            except Exception as e:
                print(f"WARNING: invalid user config at {user_config_path}: {e}", file=sys.stderr)

        data = _deep_merge(base_data, user_data)

    seed = _require_key(data, "seed")
    workers = _require_key(data, "workers")

    solver = _require_key(data, "solver")
    solver_command = solver.get("command") or None
    time_limit = _require_key(solver, "time_limit_s")

    limits = _require_key(data, "limits")
    iso_max_n = _require_key(limits, "isomorphism_max_n")
    witness_cap = _require_key(limits, "reduced_witness_cap")
    block_cap = _require_key(limits, "block_search_cap")

    logging_section = _require_key(data, "logging")
    log_dir = Path(_require_key(logging_section, "log_dir"))
    run_logs = bool(logging_section.get("run_logs", True))

    debug_validate = bool(data.get("debug_validate", False))
    harness = {str(k): int(v) for k, v in (data.get("harness") or {}).items()}

    # Environment overrides
    solver_command = os.environ.get("SAT_SOLVER") or solver_command
    if os.environ.get("MATROIDLAB_LOG_DIR"):
        log_dir = Path(os.environ["MATROIDLAB_LOG_DIR"])
    env_debug = _env_flag("MATROIDLAB_DEBUG_VALIDATE")
    if env_debug is not None:
        debug_validate = env_debug
    if os.environ.get("MATROIDLAB_WORKERS"):
        try:
            workers = int(os.environ["MATROIDLAB_WORKERS"])
        except ValueError:
            print(f"WARNING: ignoring MATROIDLAB_WORKERS={os.environ['MATROIDLAB_WORKERS']!r}", file=sys.stderr)

    if not log_dir.is_absolute():
        log_dir = REPO_ROOT / log_dir

    settings = Settings(
        SEED=int(seed),
        WORKERS=max(1, int(workers)),
        SOLVER_COMMAND=solver_command,
        SOLVER_TIME_LIMIT_S=float(time_limit),
        ISOMORPHISM_MAX_N=int(iso_max_n),
        REDUCED_WITNESS_CAP=int(witness_cap),
        BLOCK_SEARCH_CAP=int(block_cap),
        DEBUG_VALIDATE=debug_validate,
        LOG_DIR=log_dir,
        RUN_LOGS=run_logs,
        HARNESS=harness,
    )
    return settings
