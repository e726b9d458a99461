"""Bases under several group-label constraints psi_i(B) != f_i.

Covers exchange windows over block sequences, the 2^k - 1 lower-bound family,
closest valid bases, weak base orderability and B-minors isomorphic to
U_{k,2k} in sparse paving matroids.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial
from typing import Iterator, List, Optional, Sequence, Tuple

from ..errors import MatroidError, PreconditionError, SearchLimitExceeded
from ..schemas.verdicts import BoundReport
from .bitsets import full_mask, ids_of, iter_combinations_of, size
from .formats import LabelSection
from .labels import (
    CyclicGroup,
    ForbiddenSet,
    GroupElement,
    IntegerGroup,
    Labeling,
    group_sum,
)
from .matroid import Matroid, MinorResult, is_sparse_paving, make_uniform, minor_with_map
from .proximity import Window, bases_by_distance
from .workers import parallel_map

logger = logging.getLogger("matroidlab.multilabel")

WINDOW_BOUND_MAX_K = 12
LOWER_BOUND_MAX_K = 4
BLOCK_SEARCH_CAP = 2_000_000


@dataclass(frozen=True)
class LabelConstraint:
    """psi(B) must differ from target."""

    psi: Labeling
    target: GroupElement

    def __post_init__(self) -> None:
        if not self.psi.group.contains(self.target):
            raise MatroidError(f"target {self.target!r} is not in {self.psi.group.spec}")

    def holds(self, mask: int) -> bool:
        return group_sum(self.psi, mask) != self.target


@dataclass(frozen=True)
class MultiLabelInstance:
    matroid: Matroid
    constraints: Tuple[LabelConstraint, ...]

    def __post_init__(self) -> None:
        for t, c in enumerate(self.constraints, start=1):
            if c.psi.n != self.matroid.n:
                raise MatroidError(f"labeling {t} covers {c.psi.n} elements, matroid has {self.matroid.n}")

    @property
    def k(self) -> int:
        return len(self.constraints)

    def is_valid(self, mask: int) -> bool:
        return all(c.holds(mask) for c in self.constraints)

    def valid_bases(self) -> List[int]:
        return [b for b in self.matroid.bases if self.is_valid(b)]

    @classmethod
    def from_sections(cls, matroid: Matroid, sections: Sequence[LabelSection]) -> "MultiLabelInstance":
        """One constraint per labels section; each section forbids exactly one value."""
        constraints = []
        for t, section in enumerate(sections, start=1):
            if len(section.forbidden) != 1:
                raise MatroidError(f"labels section {t} must forbid exactly one value, has {len(section.forbidden)}")
            (target,) = section.forbidden.elements
            constraints.append(LabelConstraint(section.psi, target))
        return cls(matroid, tuple(constraints))

    def to_sections(self) -> List[LabelSection]:
        return [
            LabelSection(c.psi, ForbiddenSet(c.psi.group, frozenset([c.target]))) for c in self.constraints
        ]


@dataclass(frozen=True)
class BlockSequence:
    """X_1..X_l inside base, Y_1..Y_l outside it; all blocks nonempty and pairwise disjoint."""

    base: int
    xs: Tuple[int, ...]
    ys: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.xs) != len(self.ys):
            raise PreconditionError(f"{len(self.xs)} X-blocks but {len(self.ys)} Y-blocks")
        seen = 0
        for side, blocks in (("X", self.xs), ("Y", self.ys)):
            for s, block in enumerate(blocks, start=1):
                if not block:
                    raise PreconditionError(f"{side}_{s} is empty")
                if block & seen:
                    raise PreconditionError(f"{side}_{s} overlaps an earlier block")
                seen |= block
                inside = block & self.base
                if side == "X" and inside != block:
                    raise PreconditionError(f"X_{s} is not inside the base")
                if side == "Y" and inside:
                    raise PreconditionError(f"Y_{s} meets the base")

    @property
    def length(self) -> int:
        return len(self.xs)

    def window_set(self, i: int, j: int) -> int:
        """(B minus X_i..X_j) plus Y_i..Y_j, 1-based inclusive."""
        if not 1 <= i <= j <= self.length:
            raise PreconditionError(f"window ({i},{j}) outside 1 <= i <= j <= {self.length}")
        out_mask = in_mask = 0
        for s in range(i - 1, j):
            out_mask |= self.xs[s]
            in_mask |= self.ys[s]
        return (self.base & ~out_mask) | in_mask

    def exchange(self, chosen: Sequence[int]) -> int:
        """(B minus the X_s) plus the Y_s for the 1-based indices in `chosen`."""
        out_mask = in_mask = 0
        for s in chosen:
            out_mask |= self.xs[s - 1]
            in_mask |= self.ys[s - 1]
        return (self.base & ~out_mask) | in_mask

    def windows(self) -> Iterator[Window]:
        for i in range(1, self.length + 1):
            for j in range(i, self.length + 1):
                yield Window(i, j)


@dataclass(frozen=True)
class ExchangeBoundSpec:
    k: int
    window_bound: int
    proximity_bound: int
    lower_bound: int

    @classmethod
    def for_k(cls, k: int) -> "ExchangeBoundSpec":
        c = window_bound(k)
        return cls(k=k, window_bound=c, proximity_bound=c - 1, lower_bound=2**k - 1)


def window_bound(k: int) -> int:
    """floor((e - 1/2) * k!) in exact integers; 1 for k = 0.

    For k >= 1, k! * e = sum_{i<=k} k!/i! + t with 0 < t < 1, so the floor is the
    integer series minus k!/2 (rounded down when k! is odd, i.e. k = 1).
    """
    if k < 0:
        raise PreconditionError(f"k must be >= 0, got {k}")
    if k > WINDOW_BOUND_MAX_K:
        raise PreconditionError(f"window_bound is guarded at k <= {WINDOW_BOUND_MAX_K}, got {k}")
    if k == 0:
        return 1
    if k == 1:
        return 2
    kf = factorial(k)
    series = sum(kf // factorial(i) for i in range(k + 1))
    return series - kf // 2


def window_label(blocks: BlockSequence, psi: Labeling, i: int, j: int) -> GroupElement:
    """psi(B_{i,j}) as psi(B) plus the telescoped block differences."""
    group = psi.group
    value = group_sum(psi, blocks.base)
    for s in range(i - 1, j):
        value = group.add(value, group.sub(group_sum(psi, blocks.ys[s]), group_sum(psi, blocks.xs[s])))
    return value


def find_window_multi(blocks: BlockSequence, constraints: Sequence[LabelConstraint]) -> Optional[Window]:
    """Lexicographically first window whose exchanged set satisfies every constraint."""
    for t, c in enumerate(constraints, start=1):
        if not c.holds(blocks.base):
            raise PreconditionError(f"constraint {t} already fails on the base")
    for w in blocks.windows():
        candidate = blocks.window_set(w.i, w.j)
        if all(c.holds(candidate) for c in constraints):
            return w
    if blocks.length >= window_bound(len(constraints)):
        raise AssertionError(
            f"no valid window among {blocks.length} blocks with {len(constraints)} constraints"
        )
    return None


def lower_bound_instance(k: int) -> Tuple[MultiLabelInstance, int]:
    """U_{r,2r} with r = 2^k - 1 where E minus A is the only valid basis.

    Constraint i < k lives in Z_{2^i}, constraint k in Z. Elements of A carry
    2^{i-1} - 1; the others carry 2^{i-1} (i < k) or -2^{k-1} (i = k). All
    targets are 0.
    """
    if not 1 <= k <= LOWER_BOUND_MAX_K:
        raise PreconditionError(f"k must be in 1..{LOWER_BOUND_MAX_K}, got {k}")
    r = 2**k - 1
    n = 2 * r
    matroid = make_uniform(r, n)
    a = full_mask(r)
    constraints = []
    for i in range(1, k + 1):
        inside = 2 ** (i - 1) - 1
        if i < k:
            group = CyclicGroup(2**i)
            outside = 2 ** (i - 1)
        else:
            group = IntegerGroup()
            outside = -(2 ** (k - 1))
        values = [inside if e < r else outside for e in range(n)]
        psi = Labeling.of(group, values)
        constraints.append(LabelConstraint(psi, group.zero()))
    return MultiLabelInstance(matroid, tuple(constraints)), a


def verify_unique_valid_basis(inst: MultiLabelInstance, b: int) -> bool:
    if not inst.matroid.is_basis(b):
        raise PreconditionError(f"B={list(ids_of(b))} is not a basis")
    if not inst.is_valid(b):
        return False
    for other in inst.matroid.bases:
        if other != b and inst.is_valid(other):
            logger.info("second valid basis %s", ids_of(other))
            return False
    return True


def _first_valid(args: Tuple[MultiLabelInstance, List[int]]) -> Optional[int]:
    inst, bucket = args
    for b in bucket:
        if inst.is_valid(b):
            return b
    return None


def closest_valid_basis(inst: MultiLabelInstance, a: int, *, workers: int = 1) -> Optional[Tuple[int, int]]:
    """Valid basis minimising |A \\ B| (lexicographic tie-break) and that distance."""
    if not inst.matroid.is_basis(a):
        raise PreconditionError(f"A={list(ids_of(a))} is not a basis")
    if inst.is_valid(a):
        return a, 0
    buckets = bases_by_distance(inst.matroid, a)
    if workers <= 1:
        for dist, bucket in enumerate(buckets):
            found = _first_valid((inst, bucket))
            if found is not None:
                return found, dist
        return None
    firsts = parallel_map(_first_valid, [(inst, bucket) for bucket in buckets], workers=workers)
    for dist, found in enumerate(firsts):
        if found is not None:
            return found, dist
    return None


def check_question_6_2(inst: MultiLabelInstance, a: int, *, workers: int = 1) -> BoundReport:
    """Closest valid basis against 2^k - 1."""
    bound = 2**inst.k - 1
    found = closest_valid_basis(inst, a, workers=workers)
    if found is None:
        return BoundReport(status="NO-VALID-BASIS", k=inst.k, bound=bound)
    b, dist = found
    status = "SATISFIED" if dist <= bound else "VIOLATED"
    if status == "VIOLATED":
        logger.info("distance %d exceeds 2^%d - 1 from A=%s", dist, inst.k, ids_of(a))
    return BoundReport(status=status, k=inst.k, bound=bound, distance=dist, basis=list(ids_of(b)))


class _BlockSearch:
    """Backtracking for k disjoint exchange blocks between bases A and B.

    Blocks are chosen one at a time; after each choice every exchange over
    the blocks chosen so far must be a basis.
    """

    def __init__(self, m: Matroid, a: int, b: int, k: int, cap: int) -> None:
        self.m = m
        self.b = b
        self.out_pool = b & ~a
        self.in_pool = a & ~b
        self.k = k
        self.cap = cap
        self.nodes = 0
        self.xs: List[int] = []
        self.ys: List[int] = []

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.cap:
            raise SearchLimitExceeded(f"block search exceeded {self.cap} nodes")

    def _exchanges_ok(self) -> bool:
        # only combinations containing the newest block are new
        t = len(self.xs)
        for width in range(t):
            for rest in combinations(range(t - 1), width):
                out_mask, in_mask = self.xs[-1], self.ys[-1]
                for s in rest:
                    out_mask |= self.xs[s]
                    in_mask |= self.ys[s]
                if not self.m.is_basis((self.b & ~out_mask) | in_mask):
                    return False
        return True

    def _extend(self, used_out: int, used_in: int, floor: int) -> bool:
        if len(self.xs) == self.k:
            return True
        # X-blocks are kept in increasing order of their least element
        above = self.out_pool & ~used_out & ~((1 << (floor + 1)) - 1)
        free_in = self.in_pool & ~used_in
        remaining = self.k - len(self.xs)
        if size(above) < remaining or size(free_in) < remaining:
            return False
        for anchor in ids_of(above):
            tail = above & ~((1 << (anchor + 1)) - 1)
            for x_extra_size in range(size(tail) + 1):
                for x_extra in iter_combinations_of(tail, x_extra_size):
                    x = (1 << anchor) | x_extra
                    for y_size in range(1, size(free_in) - remaining + 2):
                        for y in iter_combinations_of(free_in, y_size):
                            self._tick()
                            self.xs.append(x)
                            self.ys.append(y)
                            if self._exchanges_ok() and self._extend(used_out | x, used_in | y, anchor):
                                return True
                            self.xs.pop()
                            self.ys.pop()
        return False

    def run(self) -> Optional[BlockSequence]:
        if self._extend(0, 0, -1):
            return BlockSequence(self.b, tuple(self.xs), tuple(self.ys))
        return None


def find_exchange_blocks(
    m: Matroid, a: int, b: int, k: int, *, cap: int = BLOCK_SEARCH_CAP
) -> Optional[BlockSequence]:
    """X_1..X_k in B \\ A and Y_1..Y_k in A \\ B with every combined exchange a basis."""
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    return _BlockSearch(m, a, b, k, cap).run()


def is_weakly_base_orderable(m: Matroid, alpha: int, k: int, *, cap: int = BLOCK_SEARCH_CAP) -> bool:
    """Every ordered basis pair with |A \\ B| >= alpha admits k exchange blocks.

    `cap` bounds the search nodes per pair; exceeding it raises SearchLimitExceeded.
    """
    if alpha < 1 or k < 1:
        raise PreconditionError(f"alpha and k must be positive, got alpha={alpha} k={k}")
    pairs = 0
    for a in m.bases:
        for b in m.bases:
            if size(a & ~b) < alpha:
                continue
            pairs += 1
            if find_exchange_blocks(m, a, b, k, cap=cap) is None:
                logger.info("no %d exchange blocks for A=%s B=%s", k, ids_of(a), ids_of(b))
                return False
    logger.debug("weak base orderability (alpha=%d, k=%d): %d pairs checked", alpha, k, pairs)
    return True


def _smallest_not_in(candidates: int, excluded: int) -> Optional[int]:
    free = candidates & ~excluded
    if not free:
        return None
    return (free & -free).bit_length() - 1


def is_uniform_b_minor(m: Matroid, x: int, y: int, k: int) -> bool:
    """(M|X)/Y is U_{k,2k}: X \\ Y has 2k elements and every k-subset joined with Y is a basis."""
    if y & ~x or size(x & ~y) != 2 * k or size(y) != m.r - k:
        return False
    return all(m.is_basis(z | y) for z in iter_combinations_of(x & ~y, k))


def extract_uniform_minor(m: Matroid, b: int, k: int) -> Tuple[int, int]:
    """X, Y with Y <= B <= X and (M|X)/Y isomorphic to U_{k,2k}.

    Built one level at a time: from a U_{k-1,2k-2} witness, drop from Y the
    smallest element lying in every non-basis of the first kind, then add the
    smallest outside element avoiding every non-basis of the second kind.
    """
    if not m.is_basis(b):
        raise PreconditionError(f"B={list(ids_of(b))} is not a basis")
    if k < 0:
        raise PreconditionError(f"k must be >= 0, got {k}")
    need = comb(2 * k, k)
    if min(m.r, m.n - m.r) < need:
        raise PreconditionError(f"min(r, n - r) = {min(m.r, m.n - m.r)} is below C({2 * k},{k}) = {need}")
    if not is_sparse_paving(m):
        raise PreconditionError("matroid is not sparse paving")
    hyperplanes = list(m.non_bases())
    ground = m.ground
    x, y = b, b
    for level in range(1, k + 1):
        s = x & ~y
        h0 = [h for h in hyperplanes if not h & ~(b | s) and size(h & s) == level]
        common = y
        for h in h0:
            common &= h
        y_elem = _smallest_not_in(common, 0)
        if y_elem is None:
            raise AssertionError(f"level {level}: no element of Y lies in all {len(h0)} first-kind non-bases")
        y &= ~(1 << y_elem)
        t = x & ~y
        h1 = [h for h in hyperplanes if not y & ~h and size(h & t) == level - 1]
        covered = 0
        for h in h1:
            covered |= h
        x_elem = _smallest_not_in(ground & ~x, covered)
        if x_elem is None:
            raise AssertionError(f"level {level}: every outside element lies in a second-kind non-basis")
        x |= 1 << x_elem
        logger.debug("level %d: y=%d x=%d |H0|=%d |H1|=%d", level, y_elem, x_elem, len(h0), len(h1))
    if not is_uniform_b_minor(m, x, y, k):
        raise AssertionError(f"extracted X={ids_of(x)} Y={ids_of(y)} is not a U_{{{k},{2 * k}}} minor")
    return x, y


def uniform_minor(m: Matroid, b: int, k: int) -> MinorResult:
    x, y = extract_uniform_minor(m, b, k)
    return minor_with_map(m, x, y)

