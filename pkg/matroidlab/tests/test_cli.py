import pytest
from click.testing import CliRunner

from matroidlab.app.commands import sat as sat_commands
from matroidlab.app.config.paths import GOLDEN_DIR
from matroidlab.app.main import cli, main
from matroidlab.app.schemas.verdicts import SolverResult
from matroidlab.app.services.bitsets import format_ids
from matroidlab.app.services.formats import format_matroid
from matroidlab.app.services.matroid import Bijection, make_uniform, relabel
from matroidlab.app.services.satgen import SubsetVarMap
from matroidlab.app.services.sibo import canonical_r10_pair
from matroidlab.app.version import get_version


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def invoke(runner):
    def run(*args):
        return runner.invoke(cli, ["--no-run-logs", *args], catch_exceptions=False)

    return run


@pytest.fixture
def no_solver(monkeypatch, tmp_path):
    monkeypatch.delenv("SAT_SOLVER", raising=False)
    monkeypatch.setenv("PATH", str(tmp_path))


@pytest.fixture
def r10_file(tmp_path, r10):
    path = tmp_path / "r10.txt"
    path.write_text(format_matroid(r10))
    return str(path)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_gen_r10(invoke):
    result = invoke("gen", "--type", "r10")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "matroid n=10 r=5"
    assert len(lines) == 163


def test_gen_then_sibo_check(invoke, tmp_path):
    out = str(tmp_path / "u.txt")
    assert invoke("gen", "--type", "uniform", "--r", "2", "--n", "4", "--out", out).exit_code == 0
    result = invoke("sibo", "check", out)
    assert result.exit_code == 0
    assert result.stdout.strip() == "PASS"


def test_gen_random_is_seeded(invoke):
    first = invoke("gen", "--type", "random-sparse-paving", "--n", "8", "--r", "4", "--seed", "3")
    second = invoke("gen", "--type", "random-sparse-paving", "--n", "8", "--r", "4", "--seed", "3")
    assert first.exit_code == 0
    assert first.stdout.startswith("# seed=3\n")
    assert first.stdout == second.stdout


def test_sibo_pair_on_the_canonical_r10_pair(invoke, r10_file):
    cycle, pentagram = canonical_r10_pair()
    result = invoke("sibo", "pair", r10_file, "--a", format_ids(cycle), "--b", format_ids(pentagram))
    assert result.exit_code == 1
    assert result.stdout.strip() == "NONE"
    gabow = invoke("sibo", "pair", r10_file, "--a", format_ids(cycle), "--b", format_ids(pentagram), "--gabow")
    assert gabow.exit_code == 0
    assert gabow.stdout.startswith("a=")


def test_sibo_table_defaults_to_r10(invoke):
    result = invoke("sibo", "table", "--k", "2")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[3] == "    0 1 1"
    assert lines[-1] == "false=(3,3)"


def test_check_proximity(invoke, tmp_path):
    m = write(tmp_path, "u.txt", format_matroid(make_uniform(2, 4)))
    labels = write(tmp_path, "l.txt", "labels group=Zm:2\nl 0 0\nl 1 0\nl 2 1\nl 3 1\nforbid 0\n")
    result = invoke("check-proximity", m, labels, "--a", "0,1", "--reduced", "--stats")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "radius=1 closest=0,2"
    assert lines[1].startswith("reduced=FOUND counterexample=no")
    assert lines[2] == "bases=6 avoiding=4 count-bound=2"
    assert lines[3] == "PASS bound=1"


def test_sat_emit_matches_the_golden_formula(invoke):
    result = invoke("sat", "emit", "--rank", "2")
    assert result.exit_code == 0
    assert result.stdout == (GOLDEN_DIR / "non_sibo_r2.cnf").read_text()


def test_sat_solve_exit_codes(invoke, fake_solver, monkeypatch, tmp_path):
    unsat = invoke("sat", "solve", "--rank", "2", "--solver", fake_solver("s UNSATISFIABLE"))
    assert unsat.exit_code == 0
    assert unsat.stdout.strip() == "s UNSATISFIABLE"
    unknown = invoke("sat", "solve", "--rank", "2", "--solver", fake_solver("c no answer"))
    assert unknown.exit_code == 3
    monkeypatch.delenv("SAT_SOLVER", raising=False)
    monkeypatch.setenv("PATH", str(tmp_path))
    missing = invoke("sat", "solve", "--rank", "2")
    assert missing.exit_code == 2
    assert missing.stderr.startswith("error:")


def test_sat_enumerate_exit_codes(invoke, fake_solver, monkeypatch):
    unsat = invoke("sat", "enumerate", "--rank", "2", "--solver", fake_solver("s UNSATISFIABLE"))
    assert unsat.exit_code == 0
    assert unsat.stdout.strip() == "models=0 s UNSATISFIABLE"

    # a solver claiming U(2,4), which is SI-orderable and fails the re-check
    claimed = SolverResult(status="SAT", assignment=[True] * 6, command="fake")
    monkeypatch.setattr(sat_commands, "run_solver", lambda *args, **kwargs: claimed)
    bogus = invoke("sat", "enumerate", "--rank", "2", "--solver", "fake")
    assert bogus.exit_code == 3
    assert len(bogus.stdout.splitlines()) == 1
    assert bogus.stdout.startswith("model 1 bases=6 FAIL")


def test_sat_verify(invoke, tmp_path, r10):
    cycle, pentagram = canonical_r10_pair()
    order = [e for e in range(10) if cycle >> e & 1] + [e for e in range(10) if pentagram >> e & 1]
    mapping = [0] * 10
    for dst, src in enumerate(order):
        mapping[src] = dst
    placed = set(relabel(r10, Bijection(tuple(mapping))).bases)
    vmap = SubsetVarMap(5)
    lits = [str(v) if vmap.subset(v) in placed else str(-v) for v in range(1, vmap.num_vars + 1)]
    model = write(tmp_path, "r10.model", "s SATISFIABLE\nv " + " ".join(lits) + " 0\n")
    result = invoke("sat", "verify", "--model", model)
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["n=10 r=5 bases=162", "isomorphic-to-r10=yes", "PASS"]

    uniform = write(tmp_path, "u.model", "s SATISFIABLE\nv 1 2 3 4 5 6 0\n")
    bad = invoke("sat", "verify", "--model", uniform)
    assert bad.exit_code == 1
    assert bad.stdout.splitlines()[-1].startswith("FAIL")


def test_multilabel_commands(invoke, tmp_path):
    bound = invoke("multilabel", "window-bound", "--k", "3")
    assert bound.stdout.strip() == "k=3 window-bound=13 proximity-bound=12 lower-bound=7"

    m, labels = str(tmp_path / "m.txt"), str(tmp_path / "l.txt")
    made = invoke("multilabel", "lower-bound", "--k", "2", "--matroid-out", m, "--labels-out", labels)
    assert made.exit_code == 0
    assert made.stdout.strip() == "A=0,1,2"

    unique = invoke("multilabel", "unique", "--instance", m, labels, "--b", "3,4,5")
    assert unique.exit_code == 0
    assert unique.stdout.splitlines() == ["bases=20 valid=1", "PASS"]

    closest = invoke("multilabel", "closest", "--instance", m, labels, "--a", "0,1,2")
    assert closest.exit_code == 0
    assert closest.stdout.strip() == "SATISFIED k=2 bound=3 distance=3 basis=3,4,5"


def test_minor_commands(invoke, tmp_path):
    u13 = write(tmp_path, "u13.txt", format_matroid(make_uniform(1, 3)))
    dual = invoke("minor", "dual", u13)
    assert dual.stdout == "matroid n=3 r=2\nb 0 1\nb 0 2\nb 1 2\n"
    u24 = write(tmp_path, "u24.txt", format_matroid(make_uniform(2, 4)))
    taken = invoke("minor", "take", u24, "--keep", "0,2,3", "--drop", "2")
    assert taken.stdout.splitlines()[0] == "elements=0,3"
    extracted = invoke("minor", "extract", u24, "--k", "1", "--basis", "0,1")
    assert extracted.stdout.splitlines()[:3] == ["X=0,1,2", "Y=1", "elements=0,2"]


def test_reproduce_exit_codes(invoke, no_solver):
    ok = invoke("reproduce", "r10-basis-count")
    assert ok.exit_code == 0
    assert ok.stdout.splitlines() == [
        "r10-basis-count",
        "  bases=162",
        "  oracle=162",
        "  agree=yes",
        "r10-basis-count PASS",
    ]
    assert invoke("reproduce", "nope").exit_code == 2
    unknown = invoke("reproduce", "prop43")
    assert unknown.exit_code == 3
    assert "prop43 UNKNOWN" in unknown.stdout


def test_bad_input_file(invoke, tmp_path):
    broken = write(tmp_path, "bad.txt", "matroid n=3 r=1\nb 7\n")
    result = invoke("sibo", "check", broken)
    assert result.exit_code == 2
    assert result.stderr.startswith("error:")
    assert "bad.txt:2:" in result.stderr


def test_main_returns_exit_codes(r10_file):
    assert main(["--no-run-logs", "multilabel", "window-bound", "--k", "1"]) == 0
    cycle, pentagram = canonical_r10_pair()
    assert main(["--no-run-logs", "sibo", "pair", r10_file, "--a", format_ids(cycle), "--b", format_ids(pentagram)]) == 1
    assert main(["--no-run-logs", "reproduce", "nope"]) == 2


def test_version(invoke):
    result = invoke("--version")
    assert result.exit_code == 0
    assert result.stdout.strip() == f"matroidlab, version {get_version()}"
    assert get_version() == "0.3.0"
