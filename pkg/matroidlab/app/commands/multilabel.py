from __future__ import annotations

from typing import Optional

import click

from ..errors import EXIT_FAIL, EXIT_PASS
from ..services.bitsets import format_ids
from ..services.formats import format_label_sections, format_matroid
from ..services.multilabel import (
    BLOCK_SEARCH_CAP,
    LOWER_BOUND_MAX_K,
    WINDOW_BOUND_MAX_K,
    ExchangeBoundSpec,
    MultiLabelInstance,
    check_question_6_2,
    is_weakly_base_orderable,
    lower_bound_instance,
    verify_unique_valid_basis,
)
from .common import (
    emit,
    finish,
    get_run,
    handle_errors,
    ids_option,
    read_labels,
    read_matroid,
    timed,
    workers_option,
)


def _load_instance(run, matroid_file: str, labels_file: str) -> MultiLabelInstance:
    matroid = read_matroid(matroid_file, run)
    return MultiLabelInstance.from_sections(matroid, read_labels(labels_file, matroid.n, run))


@click.group("multilabel")
def multilabel() -> None:
    """Bases avoiding several forbidden labels at once."""


@multilabel.command("lower-bound")
@click.option("--k", type=click.IntRange(1, LOWER_BOUND_MAX_K), required=True)
@click.option("--matroid-out", type=click.Path(dir_okay=False), default=None)
@click.option("--labels-out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
@handle_errors
def lower_bound(ctx: click.Context, k: int, matroid_out: Optional[str], labels_out: Optional[str]) -> None:
    """Instance whose only valid basis is 2^k - 1 exchanges away from A = {0..r-1}.

    Without output files the matroid and labels are printed one after the other.
    """
    run = get_run(ctx)
    run.configure("multilabel lower-bound", output=matroid_out)
    inst, a = lower_bound_instance(k)
    matroid_text = format_matroid(inst.matroid)
    labels_text = format_label_sections(inst.to_sections())
    if matroid_out or labels_out:
        emit(matroid_text, matroid_out, run)
        emit(labels_text, labels_out, run)
        click.echo(f"A={format_ids(a)}")
    else:
        click.echo(matroid_text, nl=False)
        click.echo(labels_text, nl=False)
    finish(ctx, EXIT_PASS)


@multilabel.command("closest")
@click.option("--instance", nargs=2, type=click.Path(dir_okay=False), required=True, metavar="MATROID LABELS")
@click.option("--a", "a_ids", required=True, help="Reference basis A")
@workers_option
@click.pass_context
@handle_errors
def closest(ctx: click.Context, instance, a_ids: str, workers: Optional[int]) -> None:
    """Closest valid basis to A, compared with 2^k - 1 (exit 1 when exceeded)."""
    run = get_run(ctx)
    matroid_file, labels_file = instance
    cfg = run.configure("multilabel closest", inputs=[matroid_file, labels_file], workers=workers)
    inst = _load_instance(run, matroid_file, labels_file)
    a = ids_option(a_ids, inst.matroid.n, "--a")
    with timed(run, "closest_valid_basis"):
        report = check_question_6_2(inst, a, workers=cfg.workers)
    run.record("multilabel closest", report, {"a": a_ids})
    click.echo(report.line())
    finish(ctx, EXIT_FAIL if report.status == "VIOLATED" else EXIT_PASS)


@multilabel.command("unique")
@click.option("--instance", nargs=2, type=click.Path(dir_okay=False), required=True, metavar="MATROID LABELS")
@click.option("--b", "b_ids", required=True, help="Candidate basis B")
@click.pass_context
@handle_errors
def unique(ctx: click.Context, instance, b_ids: str) -> None:
    """PASS when B is the only basis satisfying every constraint."""
    run = get_run(ctx)
    matroid_file, labels_file = instance
    run.configure("multilabel unique", inputs=[matroid_file, labels_file])
    inst = _load_instance(run, matroid_file, labels_file)
    b = ids_option(b_ids, inst.matroid.n, "--b")
    ok = verify_unique_valid_basis(inst, b)
    click.echo(f"bases={len(inst.matroid.bases)} valid={len(inst.valid_bases())}")
    click.echo("PASS" if ok else "FAIL")
    finish(ctx, EXIT_PASS if ok else EXIT_FAIL)


@multilabel.command("window-bound")
@click.option("--k", type=click.IntRange(0, WINDOW_BOUND_MAX_K), required=True)
@click.pass_context
@handle_errors
def window_bound_cmd(ctx: click.Context, k: int) -> None:
    """Window length that guarantees a valid window under k constraints."""
    get_run(ctx).configure("multilabel window-bound")
    spec = ExchangeBoundSpec.for_k(k)
    click.echo(f"k={spec.k} window-bound={spec.window_bound} proximity-bound={spec.proximity_bound} lower-bound={spec.lower_bound}")
    finish(ctx, EXIT_PASS)


@multilabel.command("weakly-orderable")
@click.argument("matroid_file", type=click.Path(dir_okay=False))
@click.option("--alpha", type=click.IntRange(0), required=True)
@click.option("--k", type=click.IntRange(1), required=True)
@click.pass_context
@handle_errors
def weakly_orderable(ctx: click.Context, matroid_file: str, alpha: int, k: int) -> None:
    """PASS when every basis pair at distance >= alpha has k exchange blocks."""
    run = get_run(ctx)
    run.configure("multilabel weakly-orderable", inputs=[matroid_file])
    m = read_matroid(matroid_file, run)
    cap = run.settings.BLOCK_SEARCH_CAP or BLOCK_SEARCH_CAP
    ok = is_weakly_base_orderable(m, alpha, k, cap=cap)
    click.echo("PASS" if ok else "FAIL")
    finish(ctx, EXIT_PASS if ok else EXIT_FAIL)
