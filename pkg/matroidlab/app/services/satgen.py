"""CNF encoding of a rank-r matroid on 2r elements whose fixed complementary
bases [r] and E \\ [r] admit no SI-ordering, plus DIMACS output, model decoding
and model blocking.

Variable x_S for an r-subset S of E = {0..2r-1} is colex_rank(S) + 1.

Clause families, emitted in this order:
    exchange       not x_A or not x_B or OR_{f in B-A} x_{A-e+f}   (A, B, e)
    fixed          x_[r] and x_{E-[r]}
    no-si          for orderings a of [r], b of E-[r]:
                   OR_{0<=i<j<=r} not x_{a_1..a_i, b_{i+1}..b_j, a_{j+1}..a_r}
    sparse-paving  x_S or x_T whenever |S & T| = r-1 (optional)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import permutations
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from ..errors import PreconditionError
from ..schemas.verdicts import Verdict
from .bitsets import colex_rank, colex_unrank, full_mask, ids_of, size
from .matroid import Bijection, Matroid, automorphisms, validate_basis_axiom
from .sibo import find_si_ordering

logger = logging.getLogger("matroidlab.satgen")

MAX_RANK = 6

EXCHANGE = "exchange"
FIXED = "fixed"
NO_SI = "no-si"
SPARSE_PAVING = "sparse-paving"
BLOCKING = "blocking"

Clause = Tuple[int, ...]


@dataclass(frozen=True)
class SubsetVarMap:
    r: int

    def __post_init__(self) -> None:
        if self.r < 0:
            raise PreconditionError(f"rank must be >= 0, got {self.r}")

    @property
    def n(self) -> int:
        return 2 * self.r

    @property
    def num_vars(self) -> int:
        return comb(2 * self.r, self.r)

    def var(self, mask: int) -> int:
        if size(mask) != self.r or mask >> self.n:
            raise PreconditionError(f"{list(ids_of(mask))} is not an {self.r}-subset of 0..{self.n - 1}")
        return colex_rank(mask) + 1

    def subset(self, var: int) -> int:
        if not 1 <= var <= self.num_vars:
            raise PreconditionError(f"variable {var} outside 1..{self.num_vars}")
        return colex_unrank(var - 1, self.r)

    def iter_subsets(self) -> Iterable[int]:
        """r-subsets in variable order."""
        return (colex_unrank(v, self.r) for v in range(self.num_vars))


def subset_var(vmap: SubsetVarMap, mask: int) -> int:
    return vmap.var(mask)


@dataclass
class CnfFormula:
    num_vars: int
    clauses: List[Clause] = field(default_factory=list)
    tags: List[str] = field(default_factory=list)

    def add(self, clause: Sequence[int], tag: str) -> None:
        if not clause:
            raise PreconditionError(f"empty clause in family '{tag}'")
        for lit in clause:
            if lit == 0 or abs(lit) > self.num_vars:
                raise PreconditionError(f"literal {lit} outside 1..{self.num_vars}")
        self.clauses.append(tuple(clause))
        self.tags.append(tag)

    def add_family(self, clauses: Iterable[Sequence[int]], tag: str) -> int:
        """Append a clause family, dropping exact repeats within it."""
        seen: Set[Clause] = set()
        added = 0
        for clause in clauses:
            key = tuple(clause)
            if key in seen:
                continue
            seen.add(key)
            self.add(key, tag)
            added += 1
        return added

    def copy(self) -> "CnfFormula":
        return CnfFormula(self.num_vars, list(self.clauses), list(self.tags))

    def family_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for tag in self.tags:
            counts[tag] = counts.get(tag, 0) + 1
        return counts

    def family(self, tag: str) -> List[Clause]:
        return [c for c, t in zip(self.clauses, self.tags) if t == tag]

    def without(self, tag: str) -> "CnfFormula":
        kept = [(c, t) for c, t in zip(self.clauses, self.tags) if t != tag]
        return CnfFormula(self.num_vars, [c for c, _ in kept], [t for _, t in kept])

    def is_satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """assignment[v-1] is the value of variable v."""
        if len(assignment) < self.num_vars:
            return False
        return all(
            any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in clause) for clause in self.clauses
        )


def _exchange_clauses(vmap: SubsetVarMap) -> Iterable[Clause]:
    subsets = list(vmap.iter_subsets())
    for a in subsets:
        va = vmap.var(a)
        for b in subsets:
            if a == b:
                continue
            vb = vmap.var(b)
            incoming = ids_of(b & ~a)
            for e in ids_of(a & ~b):
                rest = a & ~(1 << e)
                yield (-va, -vb) + tuple(vmap.var(rest | (1 << f)) for f in incoming)


def _no_si_clauses(vmap: SubsetVarMap) -> Iterable[Clause]:
    r = vmap.r
    first, second = list(range(r)), list(range(r, 2 * r))
    for a in permutations(first):
        for b in permutations(second):
            clause = []
            for i in range(r):
                for j in range(i + 1, r + 1):
                    chosen = a[:i] + b[i:j] + a[j:]
                    mask = 0
                    for e in chosen:
                        mask |= 1 << e
                    clause.append(-vmap.var(mask))
            yield tuple(clause)


def _sparse_paving_clauses(vmap: SubsetVarMap) -> Iterable[Clause]:
    subsets = list(vmap.iter_subsets())
    for idx, s in enumerate(subsets):
        for t in subsets[idx + 1 :]:
            if size(s & t) == vmap.r - 1:
                yield (vmap.var(s), vmap.var(t))


def _normalized(clauses: Iterable[Clause]) -> Iterable[Clause]:
    for clause in clauses:
        yield tuple(sorted(set(clause), key=lambda lit: (abs(lit), lit)))


def _simplified(clauses: Iterable[Clause], units: Set[int]) -> Iterable[Clause]:
    """Drop clauses satisfied by the units and strip falsified literals, unless
    that would leave the clause empty."""
    for clause in clauses:
        if any(lit in units for lit in clause):
            continue
        reduced = tuple(lit for lit in clause if -lit not in units)
        yield reduced if reduced else clause


def build_non_sibo_cnf(
    r: int, *, sparse_paving: bool = False, simplify_units: bool = False, normalize: bool = False
) -> CnfFormula:
    if not 1 <= r <= MAX_RANK:
        raise PreconditionError(f"rank {r} outside the supported range 1..{MAX_RANK}")
    vmap = SubsetVarMap(r)
    formula = CnfFormula(vmap.num_vars)
    fixed_a = vmap.var(full_mask(r))
    fixed_b = vmap.var(full_mask(2 * r) & ~full_mask(r))
    units = {fixed_a, fixed_b}

    def shaped(clauses: Iterable[Clause]) -> Iterable[Clause]:
        if simplify_units:
            clauses = _simplified(clauses, units)
        if normalize:
            clauses = _normalized(clauses)
        return clauses

    formula.add_family(shaped(_exchange_clauses(vmap)), EXCHANGE)
    formula.add((fixed_a,), FIXED)
    formula.add((fixed_b,), FIXED)
    formula.add_family(shaped(_no_si_clauses(vmap)), NO_SI)
    if sparse_paving:
        formula.add_family(shaped(_sparse_paving_clauses(vmap)), SPARSE_PAVING)
    logger.debug("non-SIBO CNF r=%d: %d vars, families %s", r, formula.num_vars, formula.family_counts())
    return formula


def emit_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    lines.extend(" ".join(str(lit) for lit in clause) + " 0" for clause in formula.clauses)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DecodedModel:
    """Matroid read off a model, with the fixed pair a = [r], b = E \\ [r]."""

    matroid: Matroid
    a: int
    b: int


def rank_for_num_vars(num_vars: int) -> int:
    for r in range(0, MAX_RANK + 3):
        if comb(2 * r, r) == num_vars:
            return r
    raise PreconditionError(f"{num_vars} variables is not C(2r, r) for any supported r")


def decode_model(vmap: SubsetVarMap, assignment: Sequence[bool]) -> DecodedModel:
    """Bases are the true variables; no validity is assumed."""
    if len(assignment) < vmap.num_vars:
        raise PreconditionError(f"assignment covers {len(assignment)} of {vmap.num_vars} variables")
    bases = [vmap.subset(v) for v in range(1, vmap.num_vars + 1) if assignment[v - 1]]
    matroid = Matroid.from_bases(vmap.n, bases, validate=False)
    return DecodedModel(matroid, full_mask(vmap.r), full_mask(vmap.n) & ~full_mask(vmap.r))


def explain_model(decoded: DecodedModel) -> Verdict:
    """Independent re-check of a decoded model; FAIL names the first broken property."""
    m = decoded.matroid
    axiom = validate_basis_axiom(m.n, m.r, m.bases)
    if not axiom:
        return Verdict(status="FAIL", check="model", witness=axiom.witness, note="basis exchange fails")
    for name, mask in (("A", decoded.a), ("B", decoded.b)):
        if not m.is_basis(mask):
            return Verdict.failed("model", {name: list(ids_of(mask))}, note="fixed set is not a basis")
    # the no-si family exchanges a segment of [r] for elements of E \ [r]
    pair = find_si_ordering(m, decoded.b, decoded.a)
    if pair is not None:
        return Verdict.failed("model", {"a": list(pair.a), "b": list(pair.b)}, note="SI-ordering exists")
    return Verdict.passed("model")


def verify_model(decoded: DecodedModel) -> bool:
    return bool(explain_model(decoded))


def _negation_of(vmap: SubsetVarMap, family: Set[int]) -> Clause:
    return tuple(
        -v if vmap.subset(v) in family else v for v in range(1, vmap.num_vars + 1)
    )


def block_exact_model(formula: CnfFormula, assignment: Sequence[bool]) -> CnfFormula:
    if len(assignment) < formula.num_vars:
        raise PreconditionError("assignment does not cover every variable")
    blocked = formula.copy()
    blocked.add(tuple(-v if assignment[v - 1] else v for v in range(1, formula.num_vars + 1)), BLOCKING)
    return blocked


def isomorphic_placements(m: Matroid, *, max_n: int = 12) -> List[Tuple[int, ...]]:
    """Distinct relabelings of M in which [r] and E \\ [r] are both bases.

    One representative per automorphism orbit of complementary basis pairs is
    mapped onto ([r], E \\ [r]) in every order; repeats are dropped.
    """
    n, r = m.n, m.r
    if n != 2 * r:
        raise PreconditionError(f"placements need n = 2r, got n={n} r={r}")
    autos = automorphisms(m, max_n=max_n)
    ground = m.ground
    pairs = [a for a in m.bases if m.is_basis(ground & ~a)]
    representatives: List[int] = []
    covered: Set[int] = set()
    for a in pairs:
        if a in covered:
            continue
        representatives.append(a)
        covered.update(sigma.apply(a) for sigma in autos)
    placements: Dict[Tuple[int, ...], None] = {}
    for a in representatives:
        a_ids, b_ids = ids_of(a), ids_of(ground & ~a)
        for pa in permutations(range(r)):
            for pb in permutations(range(r, 2 * r)):
                mapping = [0] * n
                for src, dst in zip(a_ids, pa):
                    mapping[src] = dst
                for src, dst in zip(b_ids, pb):
                    mapping[src] = dst
                sigma = Bijection(tuple(mapping))
                family = tuple(sorted(sigma.apply(b) for b in m.bases))
                placements.setdefault(family, None)
    logger.debug("%d orbit(s) of complementary pairs, %d placements", len(representatives), len(placements))
    return list(placements)


def block_isomorphs(formula: CnfFormula, m: Matroid, *, max_clauses: Optional[int] = None) -> CnfFormula:
    """One blocking clause per isomorphic placement of M over the formula's variables."""
    vmap = SubsetVarMap(rank_for_num_vars(formula.num_vars))
    if m.n != vmap.n or m.r != vmap.r:
        raise PreconditionError(f"matroid n={m.n} r={m.r} does not match the formula's rank {vmap.r}")
    placements = isomorphic_placements(m)
    if max_clauses is not None and len(placements) > max_clauses:
        raise PreconditionError(f"{len(placements)} placements exceed the blocking cap {max_clauses}")
    blocked = formula.copy()
    blocked.add_family((_negation_of(vmap, set(p)) for p in placements), BLOCKING)
    return blocked
