import pytest

from matroidlab.app.errors import PreconditionError
from matroidlab.app.services.reproduce import HarnessContext, criterion_ids, even_cycle_oracle_count, run_criterion

SMALL_TRIALS = {
    "thm31": 20,
    "thm31-chain": 100,
    "lemma22": 200,
    "lemma34": 200,
    "lemma52": 40,
    "thm53": 10,
    "thm54": 6,
    "q62": 20,
}


def small_context(**kwargs):
    return HarnessContext(trials=SMALL_TRIALS, **kwargs)


def test_criterion_ids():
    assert criterion_ids() == [
        "r10-basis-count",
        "r10-axiom",
        "thm42",
        "fig1",
        "lemma41",
        "prop43",
        "conj61",
        "determinism",
        "thm31",
        "thm31-chain",
        "lemma22",
        "lemma34",
        "example51-k1",
        "example51-k2",
        "example51-k3",
        "lemma52",
        "thm53",
        "thm54",
        "q62",
    ]
    with pytest.raises(PreconditionError):
        run_criterion("nope", small_context())


def test_even_cycle_oracle():
    assert even_cycle_oracle_count() == 162


def test_r10_criteria():
    ctx = small_context()
    count = run_criterion("r10-basis-count", ctx)
    assert count.status == "PASS"
    assert count.lines == ["bases=162", "oracle=162", "agree=yes"]
    axiom = run_criterion("r10-axiom", ctx)
    assert axiom.status == "PASS"
    assert "automorphisms=720" in axiom.lines
    assert run_criterion("thm42", ctx).lines[1:] == ["search=none", "brute-force=none"]
    fig1 = run_criterion("fig1", ctx)
    assert fig1.status == "PASS"
    assert fig1.lines[0] == "k=1 false=(3,3)"
    assert run_criterion("lemma41", ctx).lines == ["pairs=72 mapped=72"]


@pytest.mark.parametrize(
    "name",
    ["determinism", "thm31", "thm31-chain", "lemma22", "lemma34", "example51-k1", "example51-k2",
     "lemma52", "thm53", "thm54", "q62"],
)
def test_fast_criteria_pass(name):
    report = run_criterion(name, small_context())
    assert report.status == "PASS", report.lines
    assert report.elapsed_s >= 0


def test_golden_formula_matches():
    report = run_criterion("determinism", small_context())
    assert "golden non_sibo_r2.cnf match" in report.lines


def test_lower_bound_example_lines():
    report = run_criterion("example51-k2", small_context())
    assert report.lines == ["bases=20", "unique=PASS", "closest=3,4,5 distance=3 expected=3"]


def test_solver_criteria_without_a_solver():
    for name in ("prop43", "conj61"):
        report = run_criterion(name, small_context())
        assert report.status == "UNKNOWN"
        assert report.lines == ["solver=none"]


def test_solver_criteria_with_an_unsat_solver(fake_solver):
    report = run_criterion("prop43", small_context(solver=fake_solver("s UNSATISFIABLE")))
    assert report.status == "PASS"
    assert report.lines == [f"r={r} s UNSATISFIABLE" for r in (1, 2, 3, 4)]


def test_reports_do_not_depend_on_workers():
    one = run_criterion("lemma22", small_context(workers=1))
    two = run_criterion("lemma22", small_context(workers=2))
    assert one.lines == two.lines
    assert one.lines == ["trials=200 failures=0"]
