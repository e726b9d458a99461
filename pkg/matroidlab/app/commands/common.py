from __future__ import annotations

import functools
import logging
import logging.config
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click
import yaml
from pydantic import BaseModel, ValidationError

from ..config.loader import Settings, load_settings
from ..config.paths import LOGGING_CONFIG, assert_layout, get_config_path
from ..errors import EXIT_PASS, EXIT_USAGE, MatroidlabError
from ..logging import EventLogger, LoggerManager, PerformanceMonitor
from ..schemas.run import RunConfig
from ..services.bitsets import parse_ids
from ..services.formats import load_labels, load_matroid, write_text
from ..services.matroid import Matroid, set_debug_validation
from ..services.solver import resolve_solver_command

logger = logging.getLogger("matroidlab.cli")


def _configure_console_logging() -> None:
    if LOGGING_CONFIG.exists():
        with LOGGING_CONFIG.open("r") as f:
            logging.config.dictConfig(yaml.safe_load(f))
    else:
        logging.basicConfig(level=logging.WARNING, stream=sys.stderr)


@dataclass
class RunContext:
    """Shared state of one invocation, stored on click's ctx.obj."""

    settings: Settings
    logger_manager: Optional[LoggerManager] = None
    event_logger: Optional[EventLogger] = None
    performance_monitor: Optional[PerformanceMonitor] = None
    run_config: Optional[RunConfig] = None
    exit_code: int = EXIT_PASS
    results: List[Dict[str, Any]] = field(default_factory=list)

    def configure(
        self,
        subcommand: str,
        *,
        inputs: Optional[List[str]] = None,
        output: Optional[str] = None,
        seed: Optional[int] = None,
        workers: Optional[int] = None,
        solver: Optional[str] = None,
        time_limit: Optional[float] = None,
    ) -> RunConfig:
        """Merge CLI flags over settings into the validated RunConfig for this run."""
        s = self.settings
        try:
            self.run_config = RunConfig(
                subcommand=subcommand,
                inputs=list(inputs or []),
                output=output,
                solver=resolve_solver_command(solver or s.SOLVER_COMMAND),
                seed=s.SEED if seed is None else seed,
                workers=s.WORKERS if workers is None else workers,
                time_limit_s=s.SOLVER_TIME_LIMIT_S if time_limit is None else time_limit,
                caps={
                    "isomorphism_max_n": s.ISOMORPHISM_MAX_N,
                    "reduced_witness_cap": s.REDUCED_WITNESS_CAP,
                    "block_search_cap": s.BLOCK_SEARCH_CAP,
                },
            )
        except ValidationError as exc:
            first = exc.errors()[0]
            where = ".".join(str(p) for p in first["loc"])
            raise click.UsageError(f"invalid {where}: {first['msg']}")
        if self.event_logger:
            self.event_logger.log_command(subcommand, self.run_config.model_dump(mode="json"))
        return self.run_config

    def record(self, command: str, result: BaseModel, context: Optional[Dict[str, Any]] = None) -> None:
        self.results.append({"command": command, "kind": type(result).__name__})
        if self.logger_manager:
            self.logger_manager.log_result(command, result, context)

    def close(self) -> None:
        if self.event_logger:
            self.event_logger.log_shutdown(self.exit_code)
        if self.logger_manager:
            self.logger_manager.create_run_summary(
                {"exit_code": self.exit_code, "results": len(self.results)}
            )
            self.logger_manager.close()


def create_run_context(config_path: Optional[Path] = None, *, run_logs: bool = True) -> RunContext:
    if config_path is None:
        assert_layout()
        config_path = get_config_path()
    settings = load_settings(config_path)
    set_debug_validation(settings.DEBUG_VALIDATE)

    ctx = RunContext(settings=settings)
    if run_logs and settings.RUN_LOGS:
        ctx.logger_manager = LoggerManager(settings.LOG_DIR, LOGGING_CONFIG)
        ctx.event_logger = EventLogger(ctx.logger_manager)
        ctx.performance_monitor = PerformanceMonitor(ctx.logger_manager, event_logger=ctx.event_logger)
    else:
        _configure_console_logging()
    return ctx


def get_run(ctx: click.Context) -> RunContext:
    run = ctx.find_object(RunContext)
    if run is None:
        raise click.UsageError("no run context; invoke through the matroidlab group")
    return run


def finish(ctx: click.Context, code: int) -> None:
    """Record the exit code and leave through click so CliRunner and main() agree."""
    get_run(ctx).exit_code = code
    ctx.exit(code)


def handle_errors(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Map library errors to exit codes with the message on stderr."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        ctx = click.get_current_context()
        run = get_run(ctx)
        try:
            return fn(*args, **kwargs)
        except MatroidlabError as exc:
            click.echo(f"error: {exc}", err=True)
            if run.logger_manager:
                run.logger_manager.log_error(type(exc).__name__, str(exc), exc, {"command": ctx.info_name})
            finish(ctx, exc.exit_code)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            if run.logger_manager:
                run.logger_manager.log_error("io_error", str(exc), exc, {"command": ctx.info_name})
            finish(ctx, EXIT_USAGE)

    return wrapper


def timed(run: RunContext, operation: str):
    """Wall-clock timer, mirrored into the PerformanceMonitor when run logs are on."""
    return _Timer(run.performance_monitor, operation)


class _Timer:
    def __init__(self, monitor: Optional[PerformanceMonitor], operation: str):
        self.monitor = monitor
        self.operation = operation
        self.timer_id: Optional[str] = None
        self.start = 0.0
        self.elapsed = 0.0

    def __enter__(self) -> "_Timer":
        self.start = time.perf_counter()
        if self.monitor:
            self.timer_id = self.monitor.start_timer(self.operation)
        return self

    def __exit__(self, *exc: Any) -> None:
        self.elapsed = time.perf_counter() - self.start
        if self.monitor and self.timer_id:
            self.monitor.end_timer(self.timer_id)


def emit(text: str, out: Optional[str], run: Optional[RunContext] = None) -> None:
    """Write a payload to --out, else stdout."""
    if out:
        write_text(out, text)
        if run and run.event_logger:
            run.event_logger.log_file_io(out, "w")
    else:
        click.echo(text, nl=False)


def read_matroid(path: str, run: Optional[RunContext] = None) -> Matroid:
    matroid = load_matroid(path)
    if run and run.event_logger:
        run.event_logger.log_file_io(path, "r")
    return matroid


def read_labels(path: str, n: int, run: Optional[RunContext] = None):
    sections = load_labels(path, n=n)
    if run and run.event_logger:
        run.event_logger.log_file_io(path, "r")
    return sections


def ids_option(value: Optional[str], n: int, name: str) -> Optional[int]:
    if value is None:
        return None
    try:
        return parse_ids(value, n=n)
    except MatroidlabError as exc:
        raise click.BadParameter(str(exc), param_hint=name)


# Shared option sets

seed_option = click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Seed for randomized runs (default from config)")
workers_option = click.option("--workers", type=click.IntRange(1), default=None, help="Worker processes")
solver_option = click.option("--solver", default=None, help="SAT solver command (overrides SAT_SOLVER)")
time_limit_option = click.option("--time-limit", type=click.FloatRange(0, min_open=True), default=None, help="Per-solver-run limit in seconds")
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write output here instead of stdout")


def run_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    for option in (time_limit_option, solver_option, workers_option, seed_option):
        fn = option(fn)
    return fn
