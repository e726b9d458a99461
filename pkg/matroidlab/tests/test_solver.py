import pytest

from matroidlab.app.errors import FormatError, SolverError
from matroidlab.app.schemas.verdicts import SolverResult
from matroidlab.app.services.satgen import CnfFormula, build_non_sibo_cnf
from matroidlab.app.services.solver import (
    format_model,
    load_model,
    parse_solver_output,
    resolve_solver_command,
    run_solver,
    solve_many,
)


def unit_formula():
    formula = CnfFormula(2)
    formula.add((1,), "x")
    formula.add((-2,), "x")
    return formula


def test_parse_solver_output():
    assert parse_solver_output("c comment\ns UNSATISFIABLE\n") == ("UNSAT", {})
    assert parse_solver_output("s SATISFIABLE\nv 1 -2\nv 3 0\n") == ("SAT", {1: True, 2: False, 3: True})
    assert parse_solver_output("SAT\n1 -2 0\n")[0] == "SAT"
    assert parse_solver_output("UNSAT\n") == ("UNSAT", {})
    assert parse_solver_output("s UNKNOWN\n") == ("UNKNOWN", {})
    with pytest.raises(ValueError):
        parse_solver_output("s SATISFIABLE\nv 1 x 0\n")


def test_unsat_result(fake_solver):
    result = run_solver(build_non_sibo_cnf(1), fake_solver("s UNSATISFIABLE"))
    assert result.status == "UNSAT"
    assert result.assignment is None


def test_sat_result_is_rechecked(fake_solver):
    good = run_solver(unit_formula(), fake_solver("s SATISFIABLE\nv 1 -2 0"))
    assert good.status == "SAT" and good.assignment == [True, False]
    bad = run_solver(unit_formula(), fake_solver("s SATISFIABLE\nv -1 -2 0"))
    assert bad.status == "UNKNOWN"
    assert "does not satisfy" in bad.diagnostics
    empty = run_solver(unit_formula(), fake_solver("s SATISFIABLE"))
    assert empty.status == "UNKNOWN"


def test_untrusted_runs_become_unknown(fake_solver, tmp_path):
    silent = run_solver(unit_formula(), fake_solver("c nothing to say"))
    assert silent.status == "UNKNOWN" and silent.diagnostics.startswith("no status line")
    missing = run_solver(unit_formula(), str(tmp_path / "no-such-solver"))
    assert missing.status == "UNKNOWN" and missing.diagnostics.startswith("spawn failed")
    slow = run_solver(unit_formula(), fake_solver("s UNSATISFIABLE", sleep=5), time_limit_s=0.5)
    assert slow.status == "UNKNOWN" and slow.diagnostics.startswith("timeout")


def test_missing_command_is_an_error():
    with pytest.raises(SolverError):
        run_solver(unit_formula(), None)


def test_solve_many_keeps_order(fake_solver):
    command = fake_solver("s UNSATISFIABLE")
    results = solve_many([build_non_sibo_cnf(1), build_non_sibo_cnf(2)], command, workers=2)
    assert [r.status for r in results] == ["UNSAT", "UNSAT"]


def test_model_files(tmp_path):
    result = SolverResult(status="SAT", assignment=[True, False, True])
    assert format_model(result) == "s SATISFIABLE\nv 1 -2 3 0\n"
    path = tmp_path / "model.txt"
    path.write_text(format_model(result))
    assert load_model(path) == [True, False, True]
    path.write_text("s UNSATISFIABLE\n")
    with pytest.raises(FormatError):
        load_model(path)
    with pytest.raises(FormatError):
        load_model(tmp_path / "missing.txt")


def test_resolve_solver_command(monkeypatch, tmp_path):
    monkeypatch.setenv("SAT_SOLVER", "from-env")
    assert resolve_solver_command("explicit") == "explicit"
    assert resolve_solver_command() == "from-env"
    monkeypatch.delenv("SAT_SOLVER")
    monkeypatch.setenv("PATH", str(tmp_path))
    assert resolve_solver_command() is None


@pytest.mark.skipif(resolve_solver_command() is None, reason="no SAT solver installed")
def test_real_solver_proves_small_ranks_unsat():
    for r in (1, 2, 3):
        assert run_solver(build_non_sibo_cnf(r), resolve_solver_command()).status == "UNSAT"
