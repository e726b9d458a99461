"""External SAT solver orchestration.

The solver is always a subprocess invoked as `<command> <cnf-path>` and its
output is read per SAT-competition conventions (`s ...` status, `v ...` model
lines). Anything that cannot be trusted becomes UNKNOWN with diagnostics.
"""

from __future__ import annotations

import logging
import os
import shlex
import shutil
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_fixed

from ..errors import FormatError, SolverError
from ..schemas.verdicts import SolverResult
from .satgen import CnfFormula, emit_dimacs

logger = logging.getLogger("matroidlab.solver")

KNOWN_SOLVERS = ("cadical", "kissat", "minisat", "glucose")
TRANSIENT_SPAWN_ERRORS = (BlockingIOError, InterruptedError, ChildProcessError)


def resolve_solver_command(explicit: Optional[str] = None) -> Optional[str]:
    """--solver flag, then $SAT_SOLVER, then the first known solver on PATH."""
    if explicit:
        return explicit
    env = os.environ.get("SAT_SOLVER")
    if env:
        return env
    for name in KNOWN_SOLVERS:
        found = shutil.which(name)
        if found:
            return found
    return None


@retry(
    retry=retry_if_exception_type(TRANSIENT_SPAWN_ERRORS),
    stop=stop_after_attempt(3),
    wait=wait_fixed(0.5),
    reraise=True,
)
def _spawn(argv: Sequence[str], timeout: float) -> subprocess.CompletedProcess:
    return subprocess.run(list(argv), capture_output=True, text=True, timeout=timeout, check=False)


def parse_solver_output(text: str) -> Tuple[str, Dict[int, bool]]:
    """Status (SAT/UNSAT/UNKNOWN) and the literal values found on `v` lines."""
    status = "UNKNOWN"
    values: Dict[int, bool] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            if word == "SATISFIABLE":
                status = "SAT"
            elif word == "UNSATISFIABLE":
                status = "UNSAT"
        elif line in ("SATISFIABLE", "UNSATISFIABLE", "SAT", "UNSAT") and status == "UNKNOWN":
            # minisat-style bare result line
            status = "UNSAT" if line.startswith("UNSAT") else "SAT"
        elif line.startswith("v ") or line == "v":
            for token in line[1:].split():
                lit = int(token)
                if lit != 0:
                    values[abs(lit)] = lit > 0
    return status, values


def _assignment(values: Dict[int, bool], num_vars: int) -> List[bool]:
    return [values.get(v, False) for v in range(1, num_vars + 1)]


def run_solver(formula: CnfFormula, command: Optional[str], *, time_limit_s: float = 60.0) -> SolverResult:
    if not command:
        raise SolverError("no SAT solver configured; pass --solver or set SAT_SOLVER")
    argv_base = shlex.split(command)
    with tempfile.TemporaryDirectory(prefix="matroidlab-") as tmp:
        path = Path(tmp) / "formula.cnf"
        path.write_text(emit_dimacs(formula), encoding="utf-8")
        start = time.perf_counter()
        try:
            proc = _spawn(argv_base + [str(path)], time_limit_s)
        except subprocess.TimeoutExpired:
            elapsed = time.perf_counter() - start
            logger.warning("solver timed out after %.1fs: %s", elapsed, command)
            return SolverResult(
                status="UNKNOWN", wall_time_s=elapsed, command=command,
                diagnostics=f"timeout after {time_limit_s}s",
            )
        except (FileNotFoundError, PermissionError, *TRANSIENT_SPAWN_ERRORS) as exc:
            logger.error("cannot start solver %s: %s", command, exc)
            return SolverResult(
                status="UNKNOWN", wall_time_s=time.perf_counter() - start, command=command,
                diagnostics=f"spawn failed: {exc}",
            )
        elapsed = time.perf_counter() - start

    try:
        status, values = parse_solver_output(proc.stdout)
    except ValueError as exc:
        return SolverResult(
            status="UNKNOWN", wall_time_s=elapsed, command=command, diagnostics=f"malformed output: {exc}"
        )
    logger.debug("solver %s exit=%s status=%s in %.3fs", command, proc.returncode, status, elapsed)
    if status == "UNSAT":
        return SolverResult(status="UNSAT", wall_time_s=elapsed, command=command)
    if status == "SAT":
        if not values:
            return SolverResult(
                status="UNKNOWN", wall_time_s=elapsed, command=command,
                diagnostics="SAT reported without a model",
            )
        assignment = _assignment(values, formula.num_vars)
        if not formula.is_satisfied_by(assignment):
            return SolverResult(
                status="UNKNOWN", wall_time_s=elapsed, command=command,
                diagnostics="reported model does not satisfy the formula",
            )
        return SolverResult(status="SAT", assignment=assignment, wall_time_s=elapsed, command=command)
    tail = (proc.stderr or proc.stdout or "").strip().splitlines()[-3:]
    return SolverResult(
        status="UNKNOWN", wall_time_s=elapsed, command=command,
        diagnostics=f"no status line (exit {proc.returncode}): {' | '.join(tail)}",
    )


def solve_many(
    formulas: Sequence[CnfFormula], command: Optional[str], *, time_limit_s: float = 60.0, workers: int = 1
) -> List[SolverResult]:
    """Run independent formulas concurrently; results follow input order."""
    if workers <= 1:
        return [run_solver(f, command, time_limit_s=time_limit_s) for f in formulas]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda f: run_solver(f, command, time_limit_s=time_limit_s), formulas))


def format_model(result: SolverResult) -> str:
    """Solver-style text for a result: status line plus one `v` line for SAT."""
    lines = [result.status_line()]
    if result.assignment is not None:
        lits = [str(v) if val else str(-v) for v, val in enumerate(result.assignment, start=1)]
        lines.append("v " + " ".join(lits + ["0"]))
    return "\n".join(lines) + "\n"


def load_model(path: Path) -> List[bool]:
    """Assignment from a saved solver output; variables are 1..max id seen."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read: {exc.strerror}", path=str(path)) from exc
    try:
        status, values = parse_solver_output(text)
    except ValueError as exc:
        raise FormatError(f"malformed model: {exc}", path=str(path)) from exc
    if status != "SAT" or not values:
        raise FormatError("model file has no satisfying assignment", path=str(path))
    return _assignment(values, max(values))
