from __future__ import annotations

from typing import Optional

import click

from ..errors import EXIT_PASS
from ..services.bitsets import format_ids
from ..services.formats import format_matroid
from ..services.matroid import dual, minor_with_map
from ..services.multilabel import extract_uniform_minor
from .common import emit, finish, get_run, handle_errors, ids_option, out_option, read_matroid


@click.group("minor")
def minor() -> None:
    """Minors and duals of explicit matroids."""


@minor.command("extract")
@click.argument("matroid_file", type=click.Path(dir_okay=False))
@click.option("--k", type=click.IntRange(0), required=True)
@click.option("--basis", "basis_ids", required=True, help="Basis B with Y <= B <= X")
@out_option
@click.pass_context
@handle_errors
def extract(ctx: click.Context, matroid_file: str, k: int, basis_ids: str, out: Optional[str]) -> None:
    """Uniform U(k,2k) B-minor of a sparse paving matroid: prints X, Y and the minor."""
    run = get_run(ctx)
    run.configure("minor extract", inputs=[matroid_file], output=out)
    m = read_matroid(matroid_file, run)
    b = ids_option(basis_ids, m.n, "--basis")
    x, y = extract_uniform_minor(m, b, k)
    result = minor_with_map(m, x, y)
    click.echo(f"X={format_ids(x)}")
    click.echo(f"Y={format_ids(y)}")
    click.echo("elements=" + ",".join(str(e) for e in result.elements))
    emit(format_matroid(result.matroid), out, run)
    finish(ctx, EXIT_PASS)


@minor.command("take")
@click.argument("matroid_file", type=click.Path(dir_okay=False))
@click.option("--keep", "keep_ids", required=True, help="X: elements restricted to")
@click.option("--drop", "drop_ids", default="-", show_default=True, help="Y <= X: elements contracted")
@out_option
@click.pass_context
@handle_errors
def take(ctx: click.Context, matroid_file: str, keep_ids: str, drop_ids: str, out: Optional[str]) -> None:
    """(M|X)/Y relabelled to dense ids; the element map goes to stdout first."""
    run = get_run(ctx)
    run.configure("minor take", inputs=[matroid_file], output=out)
    m = read_matroid(matroid_file, run)
    result = minor_with_map(m, ids_option(keep_ids, m.n, "--keep"), ids_option(drop_ids, m.n, "--drop"))
    click.echo("elements=" + (",".join(str(e) for e in result.elements) or "-"))
    emit(format_matroid(result.matroid), out, run)
    finish(ctx, EXIT_PASS)


@minor.command("dual")
@click.argument("matroid_file", type=click.Path(dir_okay=False))
@out_option
@click.pass_context
@handle_errors
def dual_cmd(ctx: click.Context, matroid_file: str, out: Optional[str]) -> None:
    """Bases are the complements of the input's bases."""
    run = get_run(ctx)
    run.configure("minor dual", inputs=[matroid_file], output=out)
    emit(format_matroid(dual(read_matroid(matroid_file, run))), out, run)
    finish(ctx, EXIT_PASS)
