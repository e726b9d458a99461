from __future__ import annotations

from typing import Optional

import click

from ..errors import EXIT_PASS, PreconditionError
from ..services.formats import format_any, format_labels, format_matroid
from ..services.generators import make_rng, random_forbidden, random_group, random_labeling, random_sparse_paving
from ..services.labels import CyclicGroup
from ..services.matroid import Matroid, make_graphic, make_r10, make_uniform
from .common import emit, finish, get_run, handle_errors, out_option, read_matroid, seed_option

K4_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
KINDS = ("r10", "k4", "uniform", "random-sparse-paving", "random-labels", "bases")


def _need(value: Optional[int], flag: str, kind: str) -> int:
    if value is None:
        raise PreconditionError(f"--type {kind} needs {flag}")
    return value


@click.command("gen")
@click.option("--type", "kind", type=click.Choice(KINDS), required=True, help="Instance family")
@click.option("--r", "rank", type=click.IntRange(0), default=None, help="Rank (uniform, random-sparse-paving)")
@click.option("--n", "size", type=click.IntRange(1), default=None, help="Ground set size")
@click.option("--max-hyperplanes", type=click.IntRange(0), default=None, help="Stop the random stable set early")
@click.option("--modulus", type=click.IntRange(1), default=None, help="Zm for random labels (default random 2..6)")
@click.option("--forbidden", "forbidden_count", type=click.IntRange(0), default=1, show_default=True)
@click.option("--matroid", "matroid_file", type=click.Path(dir_okay=False), default=None, help="Matroid to convert (bases) or label (random-labels)")
@click.option("--sparse-paving-format", is_flag=True, help="Write the hyperplane form when the matroid is sparse paving")
@seed_option
@out_option
@click.pass_context
@handle_errors
def gen(
    ctx: click.Context,
    kind: str,
    rank: Optional[int],
    size: Optional[int],
    max_hyperplanes: Optional[int],
    modulus: Optional[int],
    forbidden_count: int,
    matroid_file: Optional[str],
    sparse_paving_format: bool,
    seed: Optional[int],
    out: Optional[str],
) -> None:
    """Generate a matroid or labeling in the text formats.

    Random kinds start with a `# seed=<seed>` comment line.
    """
    run = get_run(ctx)
    cfg = run.configure("gen", inputs=[matroid_file] if matroid_file else [], output=out, seed=seed)
    header = ""
    matroid: Optional[Matroid] = None

    if kind == "r10":
        matroid = make_r10()
    elif kind == "k4":
        matroid = make_graphic(K4_EDGES, 4)
    elif kind == "uniform":
        matroid = make_uniform(_need(rank, "--r", kind), _need(size, "--n", kind))
    elif kind == "random-sparse-paving":
        rng = make_rng(cfg.seed)
        header = f"# seed={cfg.seed}\n"
        n = _need(size, "--n", kind)
        matroid = random_sparse_paving(n, _need(rank, "--r", kind), rng, max_hyperplanes=max_hyperplanes)
    elif kind == "bases":
        matroid = read_matroid(_need_path(matroid_file, kind), run)
    else:
        rng = make_rng(cfg.seed)
        if matroid_file:
            n = read_matroid(matroid_file, run).n
        else:
            n = _need(size, "--n", kind)
        group = CyclicGroup(modulus) if modulus else random_group(rng)
        psi = random_labeling(n, group, rng)
        text = format_labels(psi, random_forbidden(group, forbidden_count, rng))
        emit(f"# seed={cfg.seed}\n" + text, out, run)
        finish(ctx, EXIT_PASS)

    assert matroid is not None
    if kind == "bases":
        text = format_matroid(matroid)
    else:
        text = format_any(matroid, prefer_sparse_paving=sparse_paving_format)
    emit(header + text, out, run)
    finish(ctx, EXIT_PASS)


def _need_path(path: Optional[str], kind: str) -> str:
    if not path:
        raise PreconditionError(f"--type {kind} needs --matroid")
    return path
