"""F-avoiding bases, proximity radii and the exchange-window constructions.

Windows are 1-based (i, j) with 1 <= i <= j <= r. For orderings a of A and b of
B, window_set(i, j) = {b_1..b_{i-1}, a_i..a_j, b_{j+1}..b_r}; (1, r) is all of A.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..errors import MatroidError, PreconditionError
from ..schemas.verdicts import Verdict
from .bitsets import bit, full_mask, ids_of, iter_combinations_of, mask_of, size
from .labels import (
    ForbiddenSet,
    GroupElement,
    Labeling,
    Partition,
    group_sum,
    is_f_avoiding,
    is_union_of_blocks,
    label_classes,
)
from .matroid import Matroid, MinorResult, is_sparse_paving, minor_with_map, rank_of

logger = logging.getLogger("matroidlab.proximity")

REDUCED_WITNESS_CAP = 10**6


@dataclass(frozen=True)
class LabeledInstance:
    matroid: Matroid
    psi: Labeling
    forbidden: ForbiddenSet

    def __post_init__(self) -> None:
        if self.psi.n != self.matroid.n:
            raise MatroidError(f"labeling covers {self.psi.n} elements, matroid has {self.matroid.n}")
        if self.forbidden.group != self.psi.group:
            raise MatroidError(
                f"forbidden set over {self.forbidden.group.spec}, labeling over {self.psi.group.spec}"
            )

    def label(self, mask: int) -> GroupElement:
        return group_sum(self.psi, mask)

    def avoids(self, mask: int) -> bool:
        return is_f_avoiding(self.psi, self.forbidden, mask)

    def avoiding_bases(self) -> List[int]:
        return [b for b in self.matroid.bases if self.avoids(b)]


@dataclass(frozen=True)
class Window:
    i: int
    j: int

    def __post_init__(self) -> None:
        if not 1 <= self.i <= self.j:
            raise PreconditionError(f"window ({self.i},{self.j}) needs 1 <= i <= j")

    def check(self, r: int) -> None:
        if self.j > r:
            raise PreconditionError(f"window ({self.i},{self.j}) exceeds length {r}")

    def zero_based(self) -> Tuple[int, int]:
        """(i-1, j): the 0 <= i < j <= r indexing."""
        return self.i - 1, self.j


@dataclass(frozen=True)
class OrderingPair:
    """Orderings a of A and b of B.

    A and B are normally disjoint. Shared elements are allowed only when aligned
    (a_i == b_i), which is how orderings found in a contraction are lifted back.
    """

    a: Tuple[int, ...]
    b: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b):
            raise MatroidError(f"orderings of different lengths {len(self.a)} and {len(self.b)}")
        if len(set(self.a)) != len(self.a) or len(set(self.b)) != len(self.b):
            raise MatroidError("an ordering repeats an element")
        b_pos = {e: p for p, e in enumerate(self.b)}
        for p, e in enumerate(self.a):
            if e in b_pos and b_pos[e] != p:
                raise MatroidError(f"element {e} is shared by A and B at different positions")

    @classmethod
    def of(cls, a: Sequence[int], b: Sequence[int]) -> "OrderingPair":
        return cls(tuple(int(x) for x in a), tuple(int(x) for x in b))

    @property
    def r(self) -> int:
        return len(self.a)

    @property
    def a_set(self) -> int:
        return mask_of(self.a)

    @property
    def b_set(self) -> int:
        return mask_of(self.b)

    @property
    def is_disjoint(self) -> bool:
        return not self.a_set & self.b_set

    def window_set(self, i: int, j: int) -> int:
        out = 0
        for p in range(self.r):
            out |= 1 << (self.a[p] if i - 1 <= p < j else self.b[p])
        return out

    def windows(self, *, include_full: bool = False) -> Iterator[Window]:
        for i in range(1, self.r + 1):
            for j in range(i, self.r + 1):
                if include_full or (i, j) != (1, self.r):
                    yield Window(i, j)

    def reversed(self) -> "OrderingPair":
        return OrderingPair(self.b, self.a)


def window_set(pair: OrderingPair, w: Window) -> int:
    w.check(pair.r)
    return pair.window_set(w.i, w.j)


def _require_basis(matroid: Matroid, mask: int, name: str = "A") -> None:
    if not matroid.is_basis(mask):
        raise PreconditionError(f"{name}={list(ids_of(mask))} is not a basis")


def find_avoiding_basis(inst: LabeledInstance) -> Optional[int]:
    """Lexicographically first F-avoiding basis."""
    for b in inst.matroid.bases:
        if inst.avoids(b):
            return b
    return None


def bases_by_distance(matroid: Matroid, a: int) -> List[List[int]]:
    """Bases bucketed by |A \\ B|; each bucket keeps lexicographic order."""
    buckets: List[List[int]] = [[] for _ in range(matroid.r + 1)]
    for b in matroid.bases:
        buckets[size(a & ~b)].append(b)
    return buckets


def closest_avoiding_basis(inst: LabeledInstance, a: int) -> Optional[Tuple[int, int]]:
    _require_basis(inst.matroid, a)
    if not inst.forbidden.elements:
        return a, 0
    for dist, bucket in enumerate(bases_by_distance(inst.matroid, a)):
        for b in bucket:
            if inst.avoids(b):
                return b, dist
    return None


def proximity_radius(inst: LabeledInstance, a: int) -> Optional[int]:
    found = closest_avoiding_basis(inst, a)
    return None if found is None else found[1]


def check_conjecture_1_1(inst: LabeledInstance) -> Verdict:
    """Every basis is within |F| exchanges of some F-avoiding basis.

    The first basis (lexicographic) with a larger radius is the witness.
    """
    bound = len(inst.forbidden)
    check = "proximity"
    if bound == 0:
        return Verdict.passed(check, bound=0)
    avoiding = inst.avoiding_bases()
    if not avoiding:
        return Verdict.passed(check, bound=bound, note="no F-avoiding basis")
    for a in inst.matroid.bases:
        if any(size(a & ~b) <= bound for b in avoiding):
            continue
        radius = min(size(a & ~b) for b in avoiding)
        logger.info("proximity counterexample: A=%s radius=%d bound=%d", ids_of(a), radius, bound)
        return Verdict.failed(check, {"basis": list(ids_of(a))}, radius=radius, bound=bound)
    return Verdict.passed(check, bound=bound)


def avoiding_count_bound(inst: LabeledInstance) -> int:
    """Lower bound on the number of F-avoiding bases implied by the proximity property.

    Every basis lies within |F| exchanges of an avoiding one, and a basis has at
    most sum_i C(r,i)C(n-r,i) bases within i <= |F| exchanges.
    """
    m = inst.matroid
    ball = sum(comb(m.r, i) * comb(m.n - m.r, i) for i in range(len(inst.forbidden) + 1))
    return -(-len(m.bases) // ball)


def pigeonhole_window(pair: OrderingPair, psi: Labeling, forbidden: ForbiddenSet) -> Window:
    """A window other than (1, r) whose exchanged set avoids F.

    Prefixes (1, k) for k < r are tried first. If all of them are forbidden, two
    prefixes share a label and the window between them has the label of B.
    """
    r = pair.r
    if r != len(forbidden) + 1:
        raise PreconditionError(f"orderings of length {r} need |F| = {r - 1}, got {len(forbidden)}")
    if not pair.is_disjoint:
        raise PreconditionError("A and B must be disjoint")
    if not is_f_avoiding(psi, forbidden, pair.b_set):
        raise PreconditionError("B is not F-avoiding")
    prefix_labels: List[GroupElement] = []
    for k in range(1, r):
        label = group_sum(psi, pair.window_set(1, k))
        if label not in forbidden:
            return Window(1, k)
        prefix_labels.append(label)
    full = group_sum(psi, pair.a_set)
    if full not in forbidden:
        raise PreconditionError("every proper prefix is forbidden but psi(A) is not; no collision is guaranteed")
    prefix_labels.append(full)
    seen: Dict[GroupElement, int] = {}
    for k, label in enumerate(prefix_labels, start=1):
        if label in seen:
            window = Window(seen[label] + 1, k)
            assert group_sum(psi, window_set(pair, window)) == group_sum(psi, pair.b_set), (
                "prefix collision did not reproduce psi(B)"
            )
            return window
        seen[label] = k
    raise AssertionError(f"{r} forbidden prefix labels over |F|={len(forbidden)} without a collision")


def check_reduced_form(inst: LabeledInstance, b: int, *, strict: bool = False) -> bool:
    """B is the only F-avoiding basis and E \\ B is a basis, at rank <= |F|+1.

    strict=True demands rank exactly |F|+1.
    """
    m = inst.matroid
    limit = len(inst.forbidden) + 1
    if m.r > limit or (strict and m.r != limit):
        return False
    if not m.is_basis(b) or not m.is_basis(m.ground & ~b):
        return False
    return inst.avoiding_bases() == [b]


@dataclass(frozen=True)
class ReducedWitness:
    keep: int
    drop: int
    minor: MinorResult
    instance: LabeledInstance
    basis: int

    def lifted_basis(self) -> int:
        """The witness basis in original ids, together with the contracted set."""
        return self.minor.lift(self.basis) | self.drop


@dataclass(frozen=True)
class ReducedWitnessResult:
    status: str  # FOUND, NOT_FOUND, TRUNCATED, NO_AVOIDING_BASIS, ALREADY_AVOIDING
    radius: Optional[int]
    counterexample: bool
    witness: Optional[ReducedWitness] = None
    examined: int = 0


def restrict_labels(psi: Labeling, elements: Sequence[int]) -> Labeling:
    return Labeling(psi.group, tuple(psi.values[e] for e in elements))


def find_reduced_witness(inst: LabeledInstance, a: int, *, cap: int = REDUCED_WITNESS_CAP) -> ReducedWitnessResult:
    """Brute-force search for a minor (M|X)/Y in reduced form.

    The minor has rank min(radius of A, |F|+1), the labels are restricted to
    X \\ Y and the forbidden set is shifted by psi(Y). Y runs over subsets by
    size then lexicographically, X \\ Y over sets of twice that rank.
    """
    m = inst.matroid
    _require_basis(m, a)
    radius = proximity_radius(inst, a)
    if radius is None:
        return ReducedWitnessResult("NO_AVOIDING_BASIS", None, False)
    counterexample = radius > len(inst.forbidden)
    if radius == 0:
        return ReducedWitnessResult("ALREADY_AVOIDING", 0, False)
    # reduced form caps the rank at |F|+1
    target = min(radius, len(inst.forbidden) + 1)

    group = inst.psi.group
    ground = m.ground
    examined = 0
    for y_size in range(0, m.n - 2 * target + 1):
        for drop in iter_combinations_of(ground, y_size):
            if rank_of(m, drop) + target > m.r:
                continue
            shift = group_sum(inst.psi, drop)
            forbidden = ForbiddenSet(group, frozenset(group.sub(f, shift) for f in inst.forbidden.elements))
            for rest in iter_combinations_of(ground & ~drop, 2 * target):
                examined += 1
                if examined > cap:
                    logger.info("reduced witness search truncated after %d configurations", cap)
                    return ReducedWitnessResult("TRUNCATED", radius, counterexample, examined=cap)
                keep = rest | drop
                if rank_of(m, keep) - rank_of(m, drop) != target:
                    continue
                result = minor_with_map(m, keep, drop)
                sub = LabeledInstance(result.matroid, restrict_labels(inst.psi, result.elements), forbidden)
                avoiding = sub.avoiding_bases()
                if len(avoiding) != 1:
                    continue
                if check_reduced_form(sub, avoiding[0]):
                    witness = ReducedWitness(keep, drop, result, sub, avoiding[0])
                    logger.debug("reduced witness X=%s Y=%s", ids_of(keep), ids_of(drop))
                    return ReducedWitnessResult("FOUND", radius, counterexample, witness, examined)
    return ReducedWitnessResult("NOT_FOUND", radius, counterexample, examined=examined)


def coloring_ordering(a_set: int, b_set: int, coloring: Partition) -> OrderingPair:
    """Orderings of A and B such that no window other than (1, r) is a union of colour classes.

    Positions 1..r-1 are fixed greedily so that a_i or b_i keeps a same-coloured
    mate later on its own side. Smallest ids are chosen wherever the choice is free.
    """
    r = size(a_set)
    if a_set & b_set or size(b_set) != r:
        raise PreconditionError("A and B must be disjoint sets of equal size")
    if (a_set | b_set) & ~coloring.ground:
        raise PreconditionError("colouring does not cover A and B")
    colors = coloring.restrict(a_set | b_set)
    color_of = {}
    for idx, block in enumerate(colors.blocks):
        for e in ids_of(block):
            color_of[e] = idx
    if colors.count_on(a_set) + colors.count_on(b_set) > r + 1:
        raise PreconditionError(
            f"|c(A)| + |c(B)| = {colors.count_on(a_set) + colors.count_on(b_set)} exceeds r + 1 = {r + 1}"
        )

    rest_a, rest_b = list(ids_of(a_set)), list(ids_of(b_set))
    order_a: List[int] = []
    order_b: List[int] = []

    def unique_colored(side: List[int]) -> Optional[int]:
        for e in side:
            if sum(1 for x in side if color_of[x] == color_of[e]) == 1:
                return e
        return None

    def repeated_colored(side: List[int]) -> Optional[int]:
        for e in side:
            if sum(1 for x in side if color_of[x] == color_of[e]) >= 2:
                return e
        return None

    while len(rest_a) > 1:
        remaining = len(rest_a)
        count = len({color_of[e] for e in rest_a}) + len({color_of[e] for e in rest_b})
        if count == remaining + 1:
            b = unique_colored(rest_b)
            if b is not None:
                a = repeated_colored(rest_a)
            else:
                a = unique_colored(rest_a)
                b = repeated_colored(rest_b)
        else:
            a = repeated_colored(rest_a)
            b = rest_b[0]
        assert a is not None and b is not None and count <= remaining + 1, (
            f"colour bound broke with {remaining} positions left"
        )
        order_a.append(a)
        order_b.append(b)
        rest_a.remove(a)
        rest_b.remove(b)
    order_a.extend(rest_a)
    order_b.extend(rest_b)
    return OrderingPair(tuple(order_a), tuple(order_b))


def check_no_window_is_union(pair: OrderingPair, coloring: Partition) -> bool:
    support = pair.a_set | pair.b_set
    if support & ~coloring.ground:
        raise PreconditionError("colouring does not cover the ordered sets")
    colors = coloring.restrict(support)
    return not any(is_union_of_blocks(pair.window_set(w.i, w.j), colors) for w in pair.windows())


def _unique_avoiding_basis(inst: LabeledInstance) -> int:
    avoiding = inst.avoiding_bases()
    if len(avoiding) != 1:
        raise PreconditionError(f"instance has {len(avoiding)} F-avoiding bases, reduced form needs exactly one")
    return avoiding[0]


def check_lemma_3_2(inst: LabeledInstance, x: int, *, check_preconditions: bool = True) -> bool:
    """An F-avoiding r-set X other than B is a union of label classes, or differs
    from B by one exchange inside a label class with X & B a union of classes.
    """
    m = inst.matroid
    b = _unique_avoiding_basis(inst)
    if check_preconditions:
        if not check_reduced_form(inst, b):
            raise PreconditionError("instance is not in reduced form")
        if not is_sparse_paving(m):
            raise PreconditionError("matroid is not sparse paving")
    if size(x) != m.r or x >> m.n:
        raise PreconditionError(f"X={list(ids_of(x))} is not an r-subset of the ground set")
    if not inst.avoids(x) or x == b:
        raise PreconditionError("X must be F-avoiding and different from B")
    classes = label_classes(inst.psi)
    if is_union_of_blocks(x, classes):
        return True
    return (
        size(b & ~x) == 1
        and (b ^ x) in classes.blocks
        and is_union_of_blocks(x & b, classes)
    )


def check_lemma_3_3(psi: Labeling, b: int) -> bool:
    """B is a union of label classes, or one label g has exactly one element on
    each side of B and B minus that class is a union of label classes."""
    return _split_label(psi, b) is not None or is_union_of_blocks(b, label_classes(psi))


def _split_label(psi: Labeling, b: int) -> Optional[int]:
    """First label class meeting B and its complement in one element each, with
    B minus the class a union of label classes. Returned as the class mask."""
    classes = label_classes(psi)
    for block in classes.blocks:
        if size(block & b) == 1 and size(block & ~b) == 1 and is_union_of_blocks(b & ~block, classes):
            return block
    return None


def proof_coloring(psi: Labeling, b: int) -> Partition:
    """Label classes, with the outside element of a split label moved to its own block."""
    classes = label_classes(psi)
    if is_union_of_blocks(b, classes):
        return classes
    block = _split_label(psi, b)
    if block is None:
        raise PreconditionError("B is neither a union of label classes nor split by a single label")
    outside = block & ~b
    blocks = tuple(blk & ~outside if blk == block else blk for blk in classes.blocks) + (outside,)
    return Partition(blocks, classes.ground)


@dataclass(frozen=True)
class ChainResult:
    coloring: Partition
    pair: OrderingPair
    window: Window
    window_set: int


def sparse_paving_window(psi: Labeling, forbidden: ForbiddenSet, b: int) -> ChainResult:
    """Colouring, ordering and pigeonhole window for B against A = E \\ B.

    The resulting window set avoids F and is not a union of colour classes.
    """
    a = full_mask(psi.n) & ~b
    coloring = proof_coloring(psi, b)
    pair = coloring_ordering(a, b, coloring)
    window = pigeonhole_window(pair, psi, forbidden)
    return ChainResult(coloring, pair, window, window_set(pair, window))


def rainbow_extension(psi: Labeling, b: int) -> Optional[Tuple[int, int]]:
    """(X, e) with |X| = |B| and X + e rainbow, preferring X = B; None if too few labels."""
    r = size(b)
    labels_in_b = [psi.values[e] for e in ids_of(b)]
    if len(set(labels_in_b)) == r:
        for e in range(psi.n):
            if not b >> e & 1 and psi.values[e] not in labels_in_b:
                return b, e
    firsts: Dict[GroupElement, int] = {}
    for e, value in enumerate(psi.values):
        firsts.setdefault(value, e)
    if len(firsts) < r + 1:
        return None
    picked = sorted(firsts.values())[: r + 1]
    return mask_of(picked[:r]), picked[r]


def has_rainbow_extension(psi: Labeling, b: int) -> bool:
    return rainbow_extension(psi, b) is not None


def rainbow_exchange_sets(x: int, e: int) -> List[int]:
    """X together with X + e - f for f in X; pairwise adjacent in the Johnson graph."""
    return [x] + [(x | bit(e)) & ~bit(f) for f in ids_of(x)]


def disjoint_basis_pairs(matroid: Matroid) -> Iterator[Tuple[int, int]]:
    """Ordered pairs (A, E \\ A) of complementary bases, A in lexicographic order."""
    for a in matroid.bases:
        comp = matroid.ground & ~a
        if matroid.is_basis(comp):
            yield a, comp
