"""Seeded random instances for the harnesses and property tests.

Every generator takes a numpy Generator so a run is reproducible from its seed.
"""

from __future__ import annotations

import logging
from math import comb
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..errors import PreconditionError
from .bitsets import bit, colex_unrank, full_mask, ids_of, mask_of
from .labels import AbelianGroup, CyclicGroup, ForbiddenSet, IntegerGroup, Labeling, Partition, ProductGroup
from .matroid import Matroid, SparsePavingRep, make_sparse_paving
from .multilabel import BlockSequence, LabelConstraint, MultiLabelInstance
from .proximity import LabeledInstance, OrderingPair

logger = logging.getLogger("matroidlab.generators")

DEFAULT_MODULI = (2, 3, 4, 5, 6)
INTEGER_LABEL_RANGE = 4


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _johnson_neighbours(h: int, n: int) -> List[int]:
    outside = [e for e in range(n) if not h >> e & 1]
    return [(h & ~bit(e)) | bit(f) for e in ids_of(h) for f in outside]


def random_sparse_paving_rep(
    n: int, r: int, rng: np.random.Generator, *, max_hyperplanes: Optional[int] = None
) -> SparsePavingRep:
    """Greedy random stable set in the Johnson graph J(n, r).

    r-sets are visited in random order and kept when no kept set is a
    neighbour; stops early at `max_hyperplanes`.
    """
    if not 0 < r < n:
        raise PreconditionError(f"need 0 < r < n, got r={r} n={n}")
    chosen: Set[int] = set()
    for rank in rng.permutation(comb(n, r)):
        if max_hyperplanes is not None and len(chosen) >= max_hyperplanes:
            break
        h = colex_unrank(int(rank), r)
        if any(nb in chosen for nb in _johnson_neighbours(h, n)):
            continue
        chosen.add(h)
    return SparsePavingRep.of(n, r, chosen)


def random_sparse_paving(
    n: int, r: int, rng: np.random.Generator, *, max_hyperplanes: Optional[int] = None
) -> Matroid:
    return make_sparse_paving(random_sparse_paving_rep(n, r, rng, max_hyperplanes=max_hyperplanes))


def random_group(rng: np.random.Generator, moduli: Sequence[int] = DEFAULT_MODULI) -> CyclicGroup:
    return CyclicGroup(int(rng.choice(list(moduli))))


def random_value(group: AbelianGroup, rng: np.random.Generator) -> object:
    if isinstance(group, CyclicGroup):
        return int(rng.integers(group.m))
    if isinstance(group, IntegerGroup):
        return int(rng.integers(-INTEGER_LABEL_RANGE, INTEGER_LABEL_RANGE + 1))
    if isinstance(group, ProductGroup):
        return tuple(random_value(c, rng) for c in group.components)
    raise PreconditionError(f"cannot sample from {group.spec}")


def random_labeling(n: int, group: AbelianGroup, rng: np.random.Generator) -> Labeling:
    return Labeling.of(group, [random_value(group, rng) for _ in range(n)])


def random_forbidden(group: AbelianGroup, count: int, rng: np.random.Generator) -> ForbiddenSet:
    """`count` distinct values (fewer if the group is smaller)."""
    if group.is_finite:
        pool = list(group.elements())
        picks = rng.permutation(len(pool))[: min(count, len(pool))]
        return ForbiddenSet.of(group, [pool[int(i)] for i in picks])
    values: Set[object] = set()
    while len(values) < count:
        values.add(group.normalize(random_value(group, rng)))
    return ForbiddenSet.of(group, values)


def random_labeled_instance(
    rng: np.random.Generator,
    *,
    max_n: int = 10,
    moduli: Sequence[int] = DEFAULT_MODULI,
    max_forbidden: int = 3,
) -> LabeledInstance:
    """Random sparse paving matroid (n <= max_n) with a cyclic labeling and forbidden set."""
    n = int(rng.integers(2, max_n + 1))
    r = int(rng.integers(1, n))
    matroid = random_sparse_paving(n, r, rng)
    group = random_group(rng, moduli)
    psi = random_labeling(n, group, rng)
    forbidden = random_forbidden(group, int(rng.integers(1, max_forbidden + 1)), rng)
    return LabeledInstance(matroid, psi, forbidden)


def random_ordering_pair(r: int, rng: np.random.Generator) -> OrderingPair:
    """Disjoint orderings over the ground set 0..2r-1."""
    perm = [int(x) for x in rng.permutation(2 * r)]
    return OrderingPair(tuple(perm[:r]), tuple(perm[r:]))


def random_pigeonhole_input(
    r: int, rng: np.random.Generator, *, modulus: Optional[int] = None
) -> Tuple[OrderingPair, Labeling, ForbiddenSet]:
    """Orderings, labels and |F| = r - 1 with psi(B) outside F and psi(A) inside it."""
    if r < 2:
        raise PreconditionError(f"r must be >= 2, got {r}")
    group = CyclicGroup(modulus or r + 1)
    while True:
        pair = random_ordering_pair(r, rng)
        psi = random_labeling(2 * r, group, rng)
        label_a = psi.group.total(psi[e] for e in pair.a)
        label_b = psi.group.total(psi[e] for e in pair.b)
        if label_a == label_b:
            continue
        others = [v for v in group.elements() if v not in (label_a, label_b)]
        picks = rng.permutation(len(others))[: r - 2]
        forbidden = ForbiddenSet.of(group, [label_a] + [others[int(i)] for i in picks])
        return pair, psi, forbidden


def _surjective(elements: Sequence[int], palette: Sequence[int], rng: np.random.Generator) -> List[Tuple[int, int]]:
    """(element, colour) pairs using every palette colour at least once; needs len(palette) <= len(elements)."""
    order = [int(x) for x in rng.permutation(len(elements))]
    out = []
    for pos, idx in enumerate(order):
        color = palette[pos] if pos < len(palette) else palette[int(rng.integers(len(palette)))]
        out.append((elements[idx], color))
    return out


def random_coloring_input(r: int, rng: np.random.Generator) -> Tuple[int, int, Partition]:
    """Disjoint A, B of size r and a colouring with |c(A)| + |c(B)| <= r + 1."""
    if r < 1:
        raise PreconditionError(f"r must be >= 1, got {r}")
    a_ids = list(range(r))
    b_ids = list(range(r, 2 * r))
    colors_a = int(rng.integers(1, r + 1))
    colors_b = int(rng.integers(1, r + 2 - colors_a))
    palette_b = [int(c) for c in rng.permutation(colors_a + colors_b)[:colors_b]]

    assignment = _surjective(a_ids, list(range(colors_a)), rng) + _surjective(b_ids, palette_b, rng)
    blocks: Dict[int, int] = {}
    for e, color in assignment:
        blocks[color] = blocks.get(color, 0) | bit(e)
    partition = Partition(tuple(blocks[c] for c in sorted(blocks)), full_mask(2 * r))
    return mask_of(a_ids), mask_of(b_ids), partition


def random_block_instance(
    k: int, ell: int, rng: np.random.Generator, *, moduli: Sequence[int] = (2, 3, 4, 5, 6, 7, 8)
) -> Tuple[BlockSequence, List[LabelConstraint]]:
    """ell singleton blocks on each side of B = {0..ell-1} and k constraints with psi_t(B) != f_t.

    Groups are cyclic, exact integer or a product of two cyclic groups.
    """
    n = 2 * ell
    base = full_mask(ell)
    blocks = BlockSequence(base, tuple(bit(s) for s in range(ell)), tuple(bit(ell + s) for s in range(ell)))
    constraints: List[LabelConstraint] = []
    for _ in range(k):
        kind = int(rng.integers(3))
        if kind == 0:
            group: AbelianGroup = random_group(rng, moduli)
        elif kind == 1:
            group = IntegerGroup()
        else:
            group = ProductGroup([random_group(rng, moduli), random_group(rng, moduli)])
        psi = random_labeling(n, group, rng)
        base_label = group.total(psi[e] for e in range(ell))
        while True:
            target = group.normalize(random_value(group, rng))
            if target != base_label:
                break
        constraints.append(LabelConstraint(psi, target))
    return blocks, constraints


def random_multilabel_instance(
    matroid: Matroid, k: int, rng: np.random.Generator, *, moduli: Sequence[int] = DEFAULT_MODULI
) -> MultiLabelInstance:
    constraints = []
    for _ in range(k):
        group = random_group(rng, moduli)
        psi = random_labeling(matroid.n, group, rng)
        constraints.append(LabelConstraint(psi, int(rng.integers(group.m))))
    return MultiLabelInstance(matroid, tuple(constraints))


def random_chain_input(r: int, rng: np.random.Generator) -> Tuple[Labeling, ForbiddenSet, int]:
    """Labels on A = {0..r-1}, B = {r..2r-1} for the sparse paving window chain.

    A and B use disjoint label sets of total size at most r + 1, so B is a union
    of label classes; |F| = r - 1 with psi(A) in F and psi(B) outside it.
    """
    if r < 2:
        raise PreconditionError(f"r must be >= 2, got {r}")
    group = CyclicGroup(2 * r + 2)
    a_ids = list(range(r))
    b_ids = list(range(r, 2 * r))
    while True:
        colors_a = int(rng.integers(1, r + 1))
        colors_b = int(rng.integers(1, r + 2 - colors_a))
        palette = [int(v) for v in rng.permutation(group.m)[: colors_a + colors_b]]
        assignment = _surjective(a_ids, palette[:colors_a], rng) + _surjective(b_ids, palette[colors_a:], rng)
        values = [0] * (2 * r)
        for e, v in assignment:
            values[e] = v
        psi = Labeling.of(group, values)
        label_a = group.total(psi[e] for e in a_ids)
        label_b = group.total(psi[e] for e in b_ids)
        if label_a == label_b:
            continue
        others = [v for v in group.elements() if v not in (label_a, label_b)]
        picks = rng.permutation(len(others))[: r - 2]
        forbidden = ForbiddenSet.of(group, [label_a] + [others[int(i)] for i in picks])
        return psi, forbidden, mask_of(b_ids)
