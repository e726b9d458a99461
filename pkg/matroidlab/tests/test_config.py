import json

import pytest
import yaml
from pydantic import ValidationError

from matroidlab.app.commands.common import create_run_context
from matroidlab.app.config.loader import load_settings
from matroidlab.app.config.paths import REPO_ROOT
from matroidlab.app.schemas.run import RunConfig
from matroidlab.app.schemas.verdicts import Verdict

BASE = {
    "seed": 7,
    "workers": 2,
    "solver": {"command": "", "time_limit_s": 30},
    "limits": {"isomorphism_max_n": 12, "reduced_witness_cap": 1000, "block_search_cap": 2000},
    "logging": {"log_dir": "logs", "run_logs": True},
    "harness": {"thm31": 50},
}


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("SAT_SOLVER", "MATROIDLAB_LOG_DIR", "MATROIDLAB_WORKERS", "MATROIDLAB_DEBUG_VALIDATE"):
        monkeypatch.delenv(name, raising=False)


def write_yaml(path, data):
    path.write_text(yaml.safe_dump(data))
    return path


def test_base_config(tmp_path):
    settings = load_settings(write_yaml(tmp_path / "config.base.yaml", BASE))
    assert settings.SEED == 7 and settings.WORKERS == 2
    assert settings.SOLVER_COMMAND is None
    assert settings.SOLVER_TIME_LIMIT_S == 30.0
    assert settings.REDUCED_WITNESS_CAP == 1000
    assert settings.LOG_DIR == REPO_ROOT / "logs"
    assert settings.HARNESS == {"thm31": 50}
    assert settings.DEBUG_VALIDATE is False


def test_user_override_is_deep_merged(tmp_path):
    base = write_yaml(tmp_path / "config.base.yaml", BASE)
    write_yaml(tmp_path / "config.user.yaml", {"limits": {"reduced_witness_cap": 5}, "solver": {"command": "kissat"}})
    settings = load_settings(base)
    assert settings.REDUCED_WITNESS_CAP == 5
    assert settings.BLOCK_SEARCH_CAP == 2000
    assert settings.SOLVER_COMMAND == "kissat"
    assert settings.SOLVER_TIME_LIMIT_S == 30.0


def test_ci_fallback(tmp_path):
    ci = write_yaml(tmp_path / "config.ci.yaml", {**BASE, "seed": 11})
    assert load_settings(ci).SEED == 11


def test_missing_key_is_fatal(tmp_path, capsys):
    broken = {k: v for k, v in BASE.items() if k != "limits"}
    with pytest.raises(SystemExit) as exc:
        load_settings(write_yaml(tmp_path / "config.base.yaml", broken))
    assert exc.value.code == 1
    assert "FATAL: missing key 'limits'" in capsys.readouterr().err


def test_missing_file_is_fatal(tmp_path):
    with pytest.raises(SystemExit) as exc:
        load_settings(tmp_path / "config.base.yaml")
    assert exc.value.code == 1


def test_environment_overrides(tmp_path, monkeypatch):
    base = write_yaml(tmp_path / "config.base.yaml", BASE)
    monkeypatch.setenv("SAT_SOLVER", "cadical")
    monkeypatch.setenv("MATROIDLAB_LOG_DIR", str(tmp_path / "runs"))
    monkeypatch.setenv("MATROIDLAB_WORKERS", "4")
    monkeypatch.setenv("MATROIDLAB_DEBUG_VALIDATE", "yes")
    settings = load_settings(base)
    assert settings.SOLVER_COMMAND == "cadical"
    assert settings.LOG_DIR == tmp_path / "runs"
    assert settings.WORKERS == 4
    assert settings.DEBUG_VALIDATE is True

    monkeypatch.setenv("MATROIDLAB_WORKERS", "many")
    assert load_settings(base).WORKERS == 2


def test_run_config_validation():
    cfg = RunConfig(subcommand="sibo check", seed=0, workers=3, caps={"block_search_cap": 10})
    assert cfg.model_dump()["workers"] == 3
    with pytest.raises(ValidationError):
        RunConfig(subcommand="gen", seed=-1)
    with pytest.raises(ValidationError):
        RunConfig(subcommand="gen", seed=0, workers=0)
    with pytest.raises(ValidationError):
        RunConfig(subcommand="gen", seed=0, colour="blue")


def test_run_records(tmp_path, tmp_log_dir):
    base = write_yaml(tmp_path / "config.base.yaml", BASE)
    run = create_run_context(base)
    run.configure("sibo check", inputs=["m.txt"])
    run.record("sibo check", Verdict.passed("sibo"))
    run.exit_code = 0
    run.close()

    run_dir = run.logger_manager.log_dir
    assert run_dir.parent == tmp_log_dir
    assert (tmp_log_dir / "latest").resolve() == run_dir.resolve()
    results = [json.loads(line) for line in (run_dir / "results.jsonl").read_text().splitlines()]
    assert results[0]["kind"] == "Verdict" and results[0]["result"]["status"] == "PASS"
    events = [json.loads(line)["event_type"] for line in (run_dir / "events.jsonl").read_text().splitlines()]
    assert events == ["startup", "command", "shutdown"]
    summary = json.loads((run_dir / "run_summary.json").read_text())
    assert summary["exit_code"] == 0 and summary["results"] == 1
    assert summary["writes"]["results"] == 1 and summary["write_failures"] == 0


def test_run_logs_can_be_disabled(tmp_path, tmp_log_dir):
    run = create_run_context(write_yaml(tmp_path / "config.base.yaml", BASE), run_logs=False)
    assert run.logger_manager is None
    run.close()
    assert not tmp_log_dir.exists()
