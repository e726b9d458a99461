from __future__ import annotations

from typing import Optional

import click

from ..errors import EXIT_FAIL, EXIT_PASS, EXIT_UNKNOWN, SolverError
from ..services.formats import format_matroid
from ..services.matroid import find_isomorphism, make_r10
from ..services.satgen import (
    MAX_RANK,
    SubsetVarMap,
    block_isomorphs,
    build_non_sibo_cnf,
    decode_model,
    emit_dimacs,
    explain_model,
    rank_for_num_vars,
)
from ..services.solver import format_model, load_model, run_solver
from .common import (
    RunContext,
    emit,
    finish,
    get_run,
    handle_errors,
    out_option,
    solver_option,
    time_limit_option,
)

rank_option = click.option("--rank", type=click.IntRange(1, MAX_RANK), required=True, help="Rank r (ground set 2r)")
sparse_paving_option = click.option("--sparse-paving", is_flag=True, help="Add the sparse paving clauses")


def _log_solver(run: RunContext, result) -> None:
    if run.event_logger:
        run.event_logger.log_solver_run(result.command, result.status, result.wall_time_s, result.diagnostics)


@click.group("sat")
def sat() -> None:
    """CNF encoding of rank-r matroids without an SI-ordering for ([r], E \\ [r])."""


@sat.command("emit")
@rank_option
@sparse_paving_option
@click.option("--simplify-units", is_flag=True, help="Drop clauses satisfied by the two unit clauses")
@click.option("--normalize", is_flag=True, help="Sort literals and drop duplicate clauses per family")
@out_option
@click.pass_context
@handle_errors
def sat_emit(
    ctx: click.Context, rank: int, sparse_paving: bool, simplify_units: bool, normalize: bool, out: Optional[str]
) -> None:
    """Write the DIMACS formula."""
    run = get_run(ctx)
    run.configure("sat emit", output=out)
    formula = build_non_sibo_cnf(rank, sparse_paving=sparse_paving, simplify_units=simplify_units, normalize=normalize)
    emit(emit_dimacs(formula), out, run)
    finish(ctx, EXIT_PASS)


@sat.command("solve")
@rank_option
@sparse_paving_option
@solver_option
@time_limit_option
@click.option("--model-out", type=click.Path(dir_okay=False), default=None, help="Save solver-style output here")
@click.pass_context
@handle_errors
def sat_solve(
    ctx: click.Context,
    rank: int,
    sparse_paving: bool,
    solver: Optional[str],
    time_limit: Optional[float],
    model_out: Optional[str],
) -> None:
    """Run the solver and relay its status.

    UNSAT exits 0. A model is decoded and re-checked; a verified non-SIBO
    matroid exits 1 with its bases on stdout. Timeouts exit 3.
    """
    run = get_run(ctx)
    cfg = run.configure("sat solve", output=model_out, solver=solver, time_limit=time_limit)
    if not cfg.solver:
        raise SolverError("no SAT solver configured; pass --solver or set SAT_SOLVER")
    formula = build_non_sibo_cnf(rank, sparse_paving=sparse_paving)
    result = run_solver(formula, cfg.solver, time_limit_s=cfg.time_limit_s)
    _log_solver(run, result)
    run.record("sat solve", result, {"rank": rank, "sparse_paving": sparse_paving})
    click.echo(result.status_line())
    if result.diagnostics:
        click.echo(f"solver: {result.diagnostics}", err=True)
    if model_out:
        emit(format_model(result), model_out, run)
    if result.status == "UNSAT":
        finish(ctx, EXIT_PASS)
    if result.status == "UNKNOWN":
        finish(ctx, EXIT_UNKNOWN)

    decoded = decode_model(SubsetVarMap(rank), result.assignment or [])
    verdict = explain_model(decoded)
    click.echo(f"model {verdict.line()}")
    click.echo(format_matroid(decoded.matroid), nl=False)
    finish(ctx, EXIT_FAIL if verdict else EXIT_UNKNOWN)


@sat.command("verify")
@click.option("--model", "model_file", type=click.Path(dir_okay=False), required=True, help="Solver output with v lines")
@click.option("--rank", type=click.IntRange(1, MAX_RANK), default=None, help="Default: inferred from the variable count")
@click.pass_context
@handle_errors
def sat_verify(ctx: click.Context, model_file: str, rank: Optional[int]) -> None:
    """Independently re-check a saved model (exit 0 when it is a valid non-SIBO witness)."""
    run = get_run(ctx)
    run.configure("sat verify", inputs=[model_file])
    assignment = load_model(model_file)
    if rank is None:
        rank = rank_for_num_vars(len(assignment))
    decoded = decode_model(SubsetVarMap(rank), assignment)
    verdict = explain_model(decoded)
    run.record("sat verify", verdict, {"model": model_file})
    click.echo(f"n={decoded.matroid.n} r={decoded.matroid.r} bases={len(decoded.matroid.bases)}")
    if verdict and rank == 5:
        iso = find_isomorphism(decoded.matroid, make_r10()) is not None
        click.echo(f"isomorphic-to-r10={'yes' if iso else 'no'}")
    click.echo(verdict.line())
    finish(ctx, EXIT_PASS if verdict else EXIT_FAIL)


@sat.command("enumerate")
@rank_option
@sparse_paving_option
@solver_option
@time_limit_option
@click.option("--limit", type=click.IntRange(1), default=16, show_default=True, help="Stop after this many models")
@click.pass_context
@handle_errors
def sat_enumerate(
    ctx: click.Context,
    rank: int,
    sparse_paving: bool,
    solver: Optional[str],
    time_limit: Optional[float],
    limit: int,
) -> None:
    """Find models up to isomorphism, blocking every relabeling of each one found.

    A model failing the independent re-check exits UNKNOWN, as in `sat solve`.
    """
    run = get_run(ctx)
    cfg = run.configure("sat enumerate", solver=solver, time_limit=time_limit)
    if not cfg.solver:
        raise SolverError("no SAT solver configured; pass --solver or set SAT_SOLVER")
    vmap = SubsetVarMap(rank)
    formula = build_non_sibo_cnf(rank, sparse_paving=sparse_paving)
    r10 = make_r10() if rank == 5 else None
    count = 0
    while count < limit:
        result = run_solver(formula, cfg.solver, time_limit_s=cfg.time_limit_s)
        _log_solver(run, result)
        if result.status == "UNSAT":
            click.echo(f"models={count} s UNSATISFIABLE")
            finish(ctx, EXIT_PASS)
        if result.status == "UNKNOWN":
            click.echo(f"models={count} s UNKNOWN")
            finish(ctx, EXIT_UNKNOWN)
        decoded = decode_model(vmap, result.assignment or [])
        verdict = explain_model(decoded)
        count += 1
        line = f"model {count} bases={len(decoded.matroid.bases)} {verdict.line()}"
        if r10 is not None:
            line += f" r10={'yes' if find_isomorphism(decoded.matroid, r10) is not None else 'no'}"
        click.echo(line)
        if not verdict:
            finish(ctx, EXIT_UNKNOWN)
        formula = block_isomorphs(formula, decoded.matroid)
    click.echo(f"models={count} limit reached")
    finish(ctx, EXIT_UNKNOWN)
