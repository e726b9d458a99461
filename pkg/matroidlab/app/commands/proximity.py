from __future__ import annotations

from typing import Optional

import click

from ..errors import EXIT_FAIL, EXIT_PASS, MatroidError, PreconditionError
from ..services.bitsets import format_ids
from ..services.proximity import (
    LabeledInstance,
    avoiding_count_bound,
    check_conjecture_1_1,
    closest_avoiding_basis,
    find_reduced_witness,
)
from .common import finish, get_run, handle_errors, ids_option, read_labels, read_matroid, timed


@click.command("check-proximity")
@click.argument("matroid_file", type=click.Path(dir_okay=False))
@click.argument("labels_file", type=click.Path(dir_okay=False))
@click.option("--a", "a_ids", default=None, help="Reference basis; prints its radius and closest avoiding basis")
@click.option("--reduced", is_flag=True, help="With --a, search a reduced-form minor")
@click.option("--stats", is_flag=True, help="Print basis counts and the avoiding-count bound")
@click.pass_context
@handle_errors
def check_proximity(
    ctx: click.Context, matroid_file: str, labels_file: str, a_ids: Optional[str], reduced: bool, stats: bool
) -> None:
    """Check that every basis is within |F| exchanges of an F-avoiding basis."""
    run = get_run(ctx)
    run.configure("check-proximity", inputs=[matroid_file, labels_file])
    matroid = read_matroid(matroid_file, run)
    sections = read_labels(labels_file, matroid.n, run)
    if len(sections) != 1:
        raise MatroidError(f"{labels_file}: expected one labels section, found {len(sections)}")
    inst = LabeledInstance(matroid, sections[0].psi, sections[0].forbidden)

    a = ids_option(a_ids, matroid.n, "--a")
    if reduced and a is None:
        raise PreconditionError("--reduced needs --a")
    if a is not None:
        found = closest_avoiding_basis(inst, a)
        if found is None:
            click.echo("radius=none")
        else:
            click.echo(f"radius={found[1]} closest={format_ids(found[0])}")
        if reduced:
            res = find_reduced_witness(inst, a, cap=run.settings.REDUCED_WITNESS_CAP)
            parts = [f"reduced={res.status}", f"counterexample={'yes' if res.counterexample else 'no'}"]
            if res.witness is not None:
                w = res.witness
                parts += [f"X={format_ids(w.keep)}", f"Y={format_ids(w.drop)}", f"B={format_ids(w.lifted_basis())}"]
            click.echo(" ".join(parts))

    if stats:
        avoiding = inst.avoiding_bases()
        click.echo(f"bases={len(matroid.bases)} avoiding={len(avoiding)} count-bound={avoiding_count_bound(inst)}")

    with timed(run, "check_proximity") as timer:
        verdict = check_conjecture_1_1(inst)
    run.record("check-proximity", verdict, {"matroid": matroid_file, "labels": labels_file})
    if run.event_logger:
        run.event_logger.log_harness_result("proximity", verdict.status, {"elapsed_s": timer.elapsed})
        if not verdict and verdict.witness:
            run.event_logger.log_counterexample("proximity", verdict.witness)
    click.echo(verdict.line())
    finish(ctx, EXIT_PASS if verdict else EXIT_FAIL)
