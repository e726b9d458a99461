from __future__ import annotations

from typing import List, Optional

import click

from ..errors import EXIT_FAIL, EXIT_PASS, EXIT_UNKNOWN
from ..schemas.verdicts import CriterionReport
from ..services.reproduce import DEFAULT_TRIALS, HarnessContext, criterion_ids, run_criterion
from .common import finish, get_run, handle_errors, run_options


def _overall_exit(reports: List[CriterionReport]) -> int:
    statuses = {r.status for r in reports}
    if "FAIL" in statuses:
        return EXIT_FAIL
    if "UNKNOWN" in statuses:
        return EXIT_UNKNOWN
    return EXIT_PASS


@click.command("reproduce")
@click.argument("criterion", type=click.Choice(criterion_ids() + ["all"]))
@click.option("--trials", type=click.IntRange(1), default=None, help="Override the trial count of randomized criteria")
@click.option("--full", is_flag=True, help="Include the long-running solver stages")
@run_options
@click.pass_context
@handle_errors
def reproduce(
    ctx: click.Context,
    criterion: str,
    trials: Optional[int],
    full: bool,
    seed: Optional[int],
    workers: Optional[int],
    solver: Optional[str],
    time_limit: Optional[float],
) -> None:
    """Run one scripted acceptance check (or all of them).

    Report lines and the final status go to stdout; timing goes to stderr.
    """
    run = get_run(ctx)
    cfg = run.configure("reproduce", seed=seed, workers=workers, solver=solver, time_limit=time_limit)
    counts = dict(run.settings.HARNESS)
    if trials is not None:
        counts = {name: trials for name in set(counts) | set(DEFAULT_TRIALS)}
    harness = HarnessContext(
        seed=cfg.seed,
        workers=cfg.workers,
        solver=cfg.solver,
        time_limit_s=cfg.time_limit_s,
        trials=counts,
        full=full,
    )
    names = criterion_ids() if criterion == "all" else [criterion]
    reports = []
    for name in names:
        report = run_criterion(name, harness)
        reports.append(report)
        run.record("reproduce", report)
        if run.event_logger:
            run.event_logger.log_harness_result(name, report.status, {"elapsed_s": report.elapsed_s})
        header = f"{name} seed={cfg.seed}" if report.seed is not None else name
        click.echo(header)
        for line in report.lines:
            click.echo(f"  {line}")
        click.echo(f"{name} {report.status}")
        click.echo(f"{name}: {report.elapsed_s:.2f}s", err=True)
    finish(ctx, _overall_exit(reports))
