from __future__ import annotations

from typing import Optional, Tuple

import click

from ..errors import EXIT_FAIL, EXIT_PASS, FormatError, PreconditionError
from ..services.matroid import make_r10
from ..services.proximity import OrderingPair
from ..services.sibo import (
    brute_force_si_ordering,
    find_gabow_ordering,
    find_si_ordering,
    is_sibo,
    si_window_table,
    theorem_4_4_orderings,
)
from .common import finish, get_run, handle_errors, ids_option, read_matroid, timed, workers_option


def format_ordering(pair: OrderingPair) -> str:
    return f"a={','.join(map(str, pair.a))} b={','.join(map(str, pair.b))}"


def _ordered_ids(text: str, flag: str) -> Tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise FormatError(f"{flag}: bad ordered id list '{text}'") from exc


@click.group("sibo")
def sibo() -> None:
    """SI-orderings and the SIBO property."""


@sibo.command("check")
@click.argument("matroid_file", type=click.Path(dir_okay=False))
@workers_option
@click.pass_context
@handle_errors
def sibo_check(ctx: click.Context, matroid_file: str, workers: Optional[int]) -> None:
    """PASS if every basis pair has an SI-ordering; FAIL prints the first pair without one."""
    run = get_run(ctx)
    cfg = run.configure("sibo check", inputs=[matroid_file], workers=workers)
    m = read_matroid(matroid_file, run)
    with timed(run, "sibo_check") as timer:
        verdict = is_sibo(m, workers=cfg.workers)
    run.record("sibo check", verdict, {"matroid": matroid_file})
    if run.event_logger:
        run.event_logger.log_harness_result("sibo", verdict.status, {"elapsed_s": timer.elapsed})
        if not verdict and verdict.witness:
            run.event_logger.log_counterexample("sibo", verdict.witness)
    click.echo(verdict.line())
    finish(ctx, EXIT_PASS if verdict else EXIT_FAIL)


@sibo.command("pair")
@click.argument("matroid_file", type=click.Path(dir_okay=False))
@click.option("--a", "a_ids", required=True, help="Basis A")
@click.option("--b", "b_ids", required=True, help="Basis B")
@click.option("--brute-force", is_flag=True, help="Exhaustive scan instead of the pruned search")
@click.option("--gabow", is_flag=True, help="Search prefix-swap (Gabow) orderings instead")
@click.pass_context
@handle_errors
def sibo_pair(ctx: click.Context, matroid_file: str, a_ids: str, b_ids: str, brute_force: bool, gabow: bool) -> None:
    """Print an ordering of (A, B), or NONE (exit 1)."""
    run = get_run(ctx)
    run.configure("sibo pair", inputs=[matroid_file])
    if brute_force and gabow:
        raise PreconditionError("--brute-force and --gabow are exclusive")
    m = read_matroid(matroid_file, run)
    a = ids_option(a_ids, m.n, "--a")
    b = ids_option(b_ids, m.n, "--b")
    if gabow:
        pair = find_gabow_ordering(m, a, b)
    elif brute_force:
        pair = brute_force_si_ordering(m, a, b)
    else:
        pair = find_si_ordering(m, a, b)
    if pair is None:
        click.echo("NONE")
        finish(ctx, EXIT_FAIL)
    click.echo(format_ordering(pair))
    finish(ctx, EXIT_PASS)


@sibo.command("table")
@click.option("--matroid", "matroid_file", type=click.Path(dir_okay=False), default=None, help="Default: R10")
@click.option("--k", type=click.IntRange(1, 5), default=None, help="Rotation of the fixed R10 orderings")
@click.option("--a-order", default=None, help="Ordered ids a_1..a_r")
@click.option("--b-order", default=None, help="Ordered ids b_1..b_r")
@click.pass_context
@handle_errors
def sibo_table(
    ctx: click.Context, matroid_file: Optional[str], k: Optional[int], a_order: Optional[str], b_order: Optional[str]
) -> None:
    """Triangular 0/1 window table; row i lists windows (i, i..r)."""
    run = get_run(ctx)
    run.configure("sibo table", inputs=[matroid_file] if matroid_file else [])
    m = read_matroid(matroid_file, run) if matroid_file else make_r10()
    if (a_order is None) != (b_order is None):
        raise PreconditionError("--a-order and --b-order go together")
    if a_order is not None and b_order is not None:
        pair = OrderingPair.of(_ordered_ids(a_order, "--a-order"), _ordered_ids(b_order, "--b-order"))
    elif matroid_file is None:
        pair = theorem_4_4_orderings(k or 1)
    else:
        raise PreconditionError("a matroid file needs --a-order and --b-order")
    table = si_window_table(m, pair)
    click.echo(format_ordering(pair))
    for row in table.rows():
        click.echo(row)
    false = table.false_windows()
    click.echo("false=" + (" ".join(f"({i},{j})" for i, j in false) or "-"))
    finish(ctx, EXIT_PASS)
