"""Scripted reproduction runs, one per acceptance criterion.

A criterion returns a CriterionReport whose lines depend only on the seed and
trial counts. Randomized criteria derive one numpy Generator per trial from
(seed, trial index), so the worker count never changes the report. Timing is
filled in by `run_criterion` and is not part of the report lines.
"""

from __future__ import annotations

import hashlib
import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache, partial
from itertools import combinations
from typing import Callable, Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from ..config.paths import GOLDEN_DIR
from ..errors import PreconditionError
from ..schemas.verdicts import CriterionReport
from .bitsets import format_ids
from .generators import (
    random_block_instance,
    random_chain_input,
    random_coloring_input,
    random_labeled_instance,
    random_multilabel_instance,
    random_pigeonhole_input,
    random_sparse_paving,
)
from .labels import group_sum, is_f_avoiding, is_union_of_blocks
from .matroid import (
    K5_EDGES,
    Matroid,
    automorphism_count,
    dual,
    find_isomorphism,
    is_sparse_paving,
    make_graphic,
    make_r10,
    make_uniform,
    validate_basis_axiom,
)
from .multilabel import (
    check_question_6_2,
    closest_valid_basis,
    extract_uniform_minor,
    find_window_multi,
    is_uniform_b_minor,
    lower_bound_instance,
    verify_unique_valid_basis,
    window_bound,
    window_label,
)
from .proximity import (
    check_conjecture_1_1,
    check_no_window_is_union,
    coloring_ordering,
    pigeonhole_window,
    sparse_paving_window,
    window_set,
)
from .satgen import (
    SubsetVarMap,
    block_isomorphs,
    build_non_sibo_cnf,
    decode_model,
    emit_dimacs,
    verify_model,
)
from .sibo import (
    brute_force_si_ordering,
    canonical_r10_pair,
    find_si_ordering,
    is_sibo,
    lemma_4_1_mappings,
    si_window_table,
    theorem_4_4_orderings,
)
from .solver import run_solver, solve_many
from .workers import parallel_map

logger = logging.getLogger("matroidlab.reproduce")

DEFAULT_SEED = 20240917
MAX_REPORTED_FAILURES = 5
RANK5_MODEL_LIMIT = 16

R10_BASIS_COUNT = 162
R10_AUTOMORPHISMS = 720
R10_COMPLEMENTARY_PAIRS = 72
GOLDEN_R2 = "non_sibo_r2.cnf"

DEFAULT_TRIALS: Dict[str, int] = {
    "thm31": 10_000,
    "thm31-chain": 10_000,
    "lemma22": 100_000,
    "lemma34": 10_000,
    "lemma52": 10_000,
    "thm53": 200,
    "thm54": 100,
    "q62": 200,
}

Trial = Tuple[int, int]
TrialFn = Callable[[Trial], Optional[str]]


@dataclass(frozen=True)
class HarnessContext:
    seed: int = DEFAULT_SEED
    workers: int = 1
    solver: Optional[str] = None
    time_limit_s: float = 600.0
    trials: Dict[str, int] = field(default_factory=dict)
    full: bool = False

    def trials_for(self, name: str) -> int:
        return int(self.trials.get(name, DEFAULT_TRIALS[name]))


CriterionFn = Callable[[HarnessContext], CriterionReport]
CRITERIA: Dict[str, CriterionFn] = {}


def criterion(name: str) -> Callable[[CriterionFn], CriterionFn]:
    def register(fn: CriterionFn) -> CriterionFn:
        CRITERIA[name] = fn
        return fn

    return register


def criterion_ids() -> List[str]:
    return list(CRITERIA)


def run_criterion(name: str, ctx: HarnessContext) -> CriterionReport:
    if name not in CRITERIA:
        raise PreconditionError(f"unknown criterion '{name}'; known: {', '.join(CRITERIA)}")
    logger.info("criterion %s: seed=%d workers=%d", name, ctx.seed, ctx.workers)
    start = time.perf_counter()
    report = CRITERIA[name](ctx)
    report.elapsed_s = time.perf_counter() - start
    logger.info("criterion %s: %s in %.2fs", name, report.status, report.elapsed_s)
    return report


def _report(name: str, ok: bool, lines: List[str], ctx: Optional[HarnessContext] = None) -> CriterionReport:
    return CriterionReport(
        criterion=name, status="PASS" if ok else "FAIL", lines=lines, seed=ctx.seed if ctx else None
    )


def _trial_rng(trial: Trial) -> np.random.Generator:
    seed, index = trial
    return np.random.default_rng([seed, index])


def _guarded(fn: TrialFn, trial: Trial) -> Optional[str]:
    try:
        return fn(trial)
    except AssertionError as exc:
        return f"assertion: {exc}"


def _run_trials(name: str, ctx: HarnessContext, fn: TrialFn, lines: Optional[List[str]] = None) -> CriterionReport:
    count = ctx.trials_for(name)
    trials = [(ctx.seed, i) for i in range(count)]
    chunk = max(1, count // (8 * max(1, ctx.workers)))
    outcomes = parallel_map(partial(_guarded, fn), trials, workers=ctx.workers, chunksize=chunk)
    failures = [(i, msg) for i, msg in enumerate(outcomes) if msg is not None]
    lines = list(lines or [])
    lines.append(f"trials={count} failures={len(failures)}")
    lines.extend(f"trial {i}: {msg}" for i, msg in failures[:MAX_REPORTED_FAILURES])
    return _report(name, not failures, lines, ctx)


# Fixed R10 checks


def even_cycle_oracle_count() -> int:
    """Bases of the even-cycle matroid of K5 recounted from cycle structure.

    A 5-edge subgraph of K5 is a basis when it spans all five vertices, is
    connected (so it has exactly one cycle) and that cycle is odd.
    """
    count = 0
    for chosen in combinations(K5_EDGES, 5):
        graph = nx.Graph(chosen)
        if graph.number_of_nodes() != 5 or not nx.is_connected(graph):
            continue
        cycles = nx.cycle_basis(graph)
        if len(cycles) == 1 and len(cycles[0]) % 2 == 1:
            count += 1
    return count


@criterion("r10-basis-count")
def _r10_basis_count(ctx: HarnessContext) -> CriterionReport:
    r10 = make_r10()
    oracle = even_cycle_oracle_count()
    agree = len(r10.bases) == oracle == R10_BASIS_COUNT
    lines = [f"bases={len(r10.bases)}", f"oracle={oracle}", f"agree={'yes' if agree else 'no'}"]
    return _report("r10-basis-count", agree, lines)


@criterion("r10-axiom")
def _r10_axiom(ctx: HarnessContext) -> CriterionReport:
    r10 = make_r10()
    axiom = validate_basis_axiom(r10.n, r10.r, r10.bases)
    sparse = is_sparse_paving(r10)
    autos = automorphism_count(r10)
    self_dual = find_isomorphism(dual(r10), r10) is not None
    lines = [
        f"exchange-axiom={axiom.status}",
        f"sparse-paving={'yes' if sparse else 'no'}",
        f"automorphisms={autos}",
        f"dual-isomorphic={'yes' if self_dual else 'no'}",
    ]
    ok = bool(axiom) and not sparse and autos == R10_AUTOMORPHISMS and self_dual
    return _report("r10-axiom", ok, lines)


@criterion("thm42")
def _thm42(ctx: HarnessContext) -> CriterionReport:
    r10 = make_r10()
    a, b = canonical_r10_pair()
    pruned = find_si_ordering(r10, a, b)
    brute = brute_force_si_ordering(r10, a, b)
    lines = [
        f"A={format_ids(a)} B={format_ids(b)}",
        f"search={'none' if pruned is None else 'found'}",
        f"brute-force={'none' if brute is None else 'found'}",
    ]
    return _report("thm42", pruned is None and brute is None, lines)


@criterion("fig1")
def _fig1(ctx: HarnessContext) -> CriterionReport:
    r10 = make_r10()
    ok = True
    lines: List[str] = []
    for k in range(1, 6):
        table = si_window_table(r10, theorem_4_4_orderings(k))
        false = table.false_windows()
        ok = ok and false == [(3, 3)]
        lines.append(f"k={k} false={' '.join(f'({i},{j})' for i, j in false) or '-'}")
        lines.extend("  " + row for row in table.rows())
    return _report("fig1", ok, lines)


@criterion("lemma41")
def _lemma41(ctx: HarnessContext) -> CriterionReport:
    pairs = 0
    mapped = 0
    for _, _, sigma in lemma_4_1_mappings():
        pairs += 1
        mapped += sigma is not None
    lines = [f"pairs={pairs} mapped={mapped}"]
    return _report("lemma41", pairs == mapped == R10_COMPLEMENTARY_PAIRS, lines)


# SAT criteria


def _solver_report(name: str, ctx: HarnessContext, ranks: List[int], *, sparse_paving: bool) -> CriterionReport:
    if not ctx.solver:
        return CriterionReport(criterion=name, status="UNKNOWN", lines=["solver=none"])
    formulas = [build_non_sibo_cnf(r, sparse_paving=sparse_paving) for r in ranks]
    results = solve_many(formulas, ctx.solver, time_limit_s=ctx.time_limit_s, workers=ctx.workers)
    lines = []
    for r, res in zip(ranks, results):
        line = f"r={r} {res.status_line()}"
        if res.diagnostics:
            line += f" ({res.diagnostics})"
        lines.append(line)
    statuses = {res.status for res in results}
    if "SAT" in statuses:
        status = "FAIL"
    elif "UNKNOWN" in statuses:
        status = "UNKNOWN"
    else:
        status = "PASS"
    return CriterionReport(criterion=name, status=status, lines=lines)


def _rank5_models(ctx: HarnessContext) -> Tuple[str, List[str]]:
    """Enumerate rank-5 models, blocking every relabeling of each one found."""
    r10 = make_r10()
    vmap = SubsetVarMap(5)
    formula = build_non_sibo_cnf(5)
    models = 0
    for _ in range(RANK5_MODEL_LIMIT):
        res = run_solver(formula, ctx.solver, time_limit_s=ctx.time_limit_s)
        if res.status == "UNSAT":
            return "PASS" if models else "FAIL", [f"r=5 models={models} all-r10=yes"]
        if res.status == "UNKNOWN":
            return "UNKNOWN", [f"r=5 models={models} ({res.diagnostics})"]
        decoded = decode_model(vmap, res.assignment or [])
        if not verify_model(decoded) or find_isomorphism(decoded.matroid, r10) is None:
            return "FAIL", [f"r=5 model {models + 1} bases={len(decoded.matroid.bases)} is not R10"]
        models += 1
        formula = block_isomorphs(formula, decoded.matroid)
    return "UNKNOWN", [f"r=5 models={models} limit reached"]


@criterion("prop43")
def _prop43(ctx: HarnessContext) -> CriterionReport:
    report = _solver_report("prop43", ctx, [1, 2, 3, 4], sparse_paving=False)
    if ctx.full and report.status == "PASS":
        status, extra = _rank5_models(ctx)
        report.status = status
        report.lines.extend(extra)
    return report


@criterion("conj61")
def _conj61(ctx: HarnessContext) -> CriterionReport:
    ranks = [1, 2, 3, 4, 5, 6] if ctx.full else [1, 2, 3, 4, 5]
    return _solver_report("conj61", ctx, ranks, sparse_paving=True)


@criterion("determinism")
def _determinism(ctx: HarnessContext) -> CriterionReport:
    ok = True
    lines = []
    for r in (2, 3):
        first = emit_dimacs(build_non_sibo_cnf(r))
        second = emit_dimacs(build_non_sibo_cnf(r))
        same = first == second
        ok = ok and same
        digest = hashlib.sha256(first.encode("utf-8")).hexdigest()[:16]
        lines.append(f"r={r} sha256={digest} identical={'yes' if same else 'no'}")
    golden = GOLDEN_DIR / GOLDEN_R2
    if golden.exists():
        matches = golden.read_text(encoding="utf-8") == emit_dimacs(build_non_sibo_cnf(2))
        ok = ok and matches
        lines.append(f"golden {GOLDEN_R2} {'match' if matches else 'MISMATCH'}")
    else:
        lines.append(f"golden {GOLDEN_R2} absent")
    return _report("determinism", ok, lines)


# Randomized property suites


def _proximity_trial(trial: Trial) -> Optional[str]:
    rng = _trial_rng(trial)
    inst = random_labeled_instance(rng, max_n=10)
    verdict = check_conjecture_1_1(inst)
    if verdict:
        return None
    m = inst.matroid
    return f"n={m.n} r={m.r} group={inst.psi.group.spec} {verdict.line()}"


@criterion("thm31")
def _thm31(ctx: HarnessContext) -> CriterionReport:
    return _run_trials("thm31", ctx, _proximity_trial)


def _chain_trial(trial: Trial) -> Optional[str]:
    rng = _trial_rng(trial)
    r = int(rng.integers(2, 9))
    psi, forbidden, b = random_chain_input(r, rng)
    chain = sparse_paving_window(psi, forbidden, b)
    w = chain.window
    if (w.i, w.j) == (1, r):
        return f"r={r} window is all of A"
    if not is_f_avoiding(psi, forbidden, chain.window_set):
        return f"r={r} window ({w.i},{w.j}) is forbidden"
    if is_union_of_blocks(chain.window_set, chain.coloring):
        return f"r={r} window ({w.i},{w.j}) is a union of colour classes"
    return None


@criterion("thm31-chain")
def _thm31_chain(ctx: HarnessContext) -> CriterionReport:
    return _run_trials("thm31-chain", ctx, _chain_trial)


def _pigeonhole_trial(trial: Trial) -> Optional[str]:
    rng = _trial_rng(trial)
    r = int(rng.integers(2, 9))
    pair, psi, forbidden = random_pigeonhole_input(r, rng)
    w = pigeonhole_window(pair, psi, forbidden)
    if (w.i, w.j) == (1, r) or not 1 <= w.i <= w.j <= r:
        return f"r={r} invalid window ({w.i},{w.j})"
    if not is_f_avoiding(psi, forbidden, window_set(pair, w)):
        return f"r={r} window ({w.i},{w.j}) is forbidden"
    return None


@criterion("lemma22")
def _lemma22(ctx: HarnessContext) -> CriterionReport:
    return _run_trials("lemma22", ctx, _pigeonhole_trial)


def _coloring_trial(trial: Trial) -> Optional[str]:
    rng = _trial_rng(trial)
    r = int(rng.integers(1, 9))
    a, b, coloring = random_coloring_input(r, rng)
    pair = coloring_ordering(a, b, coloring)
    if pair.a_set != a or pair.b_set != b:
        return f"r={r} ordering does not cover A and B"
    if not check_no_window_is_union(pair, coloring):
        return f"r={r} a window is a union of colour classes"
    return None


@criterion("lemma34")
def _lemma34(ctx: HarnessContext) -> CriterionReport:
    return _run_trials("lemma34", ctx, _coloring_trial)


@criterion("example51-k1")
def _example51_k1(ctx: HarnessContext) -> CriterionReport:
    return _example51(1, ctx)


@criterion("example51-k2")
def _example51_k2(ctx: HarnessContext) -> CriterionReport:
    return _example51(2, ctx)


@criterion("example51-k3")
def _example51_k3(ctx: HarnessContext) -> CriterionReport:
    return _example51(3, ctx)


def _example51(k: int, ctx: HarnessContext) -> CriterionReport:
    inst, a = lower_bound_instance(k)
    m = inst.matroid
    b = m.ground & ~a
    unique = verify_unique_valid_basis(inst, b)
    found = closest_valid_basis(inst, a, workers=ctx.workers)
    expected = 2**k - 1
    lines = [f"bases={len(m.bases)}", f"unique={'PASS' if unique else 'FAIL'}"]
    if found is None:
        lines.append("closest=none")
        return _report(f"example51-k{k}", False, lines)
    basis, dist = found
    lines.append(f"closest={format_ids(basis)} distance={dist} expected={expected}")
    return _report(f"example51-k{k}", unique and basis == b and dist == expected, lines)


def _window_trial(trial: Trial) -> Optional[str]:
    rng = _trial_rng(trial)
    k = 1 + trial[1] % 2
    ell = window_bound(k)
    blocks, constraints = random_block_instance(k, ell, rng)
    w = find_window_multi(blocks, constraints)
    if w is None:
        return f"k={k} no window among {ell} blocks"
    chosen = blocks.window_set(w.i, w.j)
    for t, c in enumerate(constraints, start=1):
        if window_label(blocks, c.psi, w.i, w.j) != group_sum(c.psi, chosen):
            return f"k={k} constraint {t}: telescoped label disagrees on ({w.i},{w.j})"
    return None


@criterion("lemma52")
def _lemma52(ctx: HarnessContext) -> CriterionReport:
    bounds = [window_bound(k) for k in range(0, 9)]
    head_ok = bounds[1:4] == [2, 4, 13]
    recursion_ok = all(bounds[k] <= k * bounds[k - 1] + 1 for k in range(1, 9))
    lines = [
        " ".join(f"c_{k}={bounds[k]}" for k in range(1, 4)) + (" PASS" if head_ok else " FAIL"),
        f"c_k <= k*c_(k-1)+1 for k<=8 {'PASS' if recursion_ok else 'FAIL'}",
    ]
    report = _run_trials("lemma52", ctx, _window_trial)
    report.lines = lines + report.lines
    if not (head_ok and recursion_ok):
        report.status = "FAIL"
    return report


@lru_cache(maxsize=None)
def _sibo_test_matroids() -> Tuple[Matroid, ...]:
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    return (make_uniform(3, 6), make_uniform(2, 5), make_graphic(k4, 4))


def _closest_trial(trial: Trial) -> Optional[str]:
    rng = _trial_rng(trial)
    matroids = _sibo_test_matroids()
    m = matroids[trial[1] % len(matroids)]
    inst = random_multilabel_instance(m, 2, rng)
    a = m.bases[int(rng.integers(len(m.bases)))]
    found = closest_valid_basis(inst, a)
    if found is None or found[1] <= 3:
        return None
    return f"n={m.n} r={m.r} A={format_ids(a)} distance={found[1]}"


@criterion("thm53")
def _thm53(ctx: HarnessContext) -> CriterionReport:
    lines = []
    sibo_ok = True
    for m in _sibo_test_matroids():
        verdict = is_sibo(m, workers=ctx.workers)
        sibo_ok = sibo_ok and bool(verdict)
        lines.append(f"n={m.n} r={m.r} bases={len(m.bases)} sibo={verdict.status}")
    report = _run_trials("thm53", ctx, _closest_trial, lines)
    if not sibo_ok:
        report.status = "FAIL"
    return report


def _minor_trial(trial: Trial) -> Optional[str]:
    rng = _trial_rng(trial)
    m = random_sparse_paving(12, 6, rng)
    picks = rng.choice(len(m.bases), size=min(3, len(m.bases)), replace=False)
    for idx in sorted(int(i) for i in picks):
        b = m.bases[idx]
        x, y = extract_uniform_minor(m, b, 2)
        if not is_uniform_b_minor(m, x, y, 2):
            return f"B={format_ids(b)} X={format_ids(x)} Y={format_ids(y)} is not a U(2,4) B-minor"
    return None


@criterion("thm54")
def _thm54(ctx: HarnessContext) -> CriterionReport:
    return _run_trials("thm54", ctx, _minor_trial)


def _question_trial(trial: Trial) -> Optional[str]:
    rng = _trial_rng(trial)
    k = 1 + trial[1] % 2
    m = make_uniform(2, 4) if k == 1 else make_uniform(3, 6)
    inst = random_multilabel_instance(m, k, rng)
    a = m.bases[int(rng.integers(len(m.bases)))]
    report = check_question_6_2(inst, a)
    if report.status == "VIOLATED":
        return f"A={format_ids(a)} {report.line()}"
    return None


@criterion("q62")
def _q62(ctx: HarnessContext) -> CriterionReport:
    lines = []
    ok = True
    for k in (1, 2, 3):
        inst, a = lower_bound_instance(k)
        report = check_question_6_2(inst, a)
        tight = report.status == "SATISFIED" and report.distance == report.bound
        ok = ok and tight
        lines.append(f"lower-bound k={k} {report.line()}")
    report = _run_trials("q62", ctx, _question_trial, lines)
    if not ok:
        report.status = "FAIL"
    return report
