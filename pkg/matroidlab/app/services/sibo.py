"""SI-orderings, SIBO certification, Gabow orderings and the R10 constructions."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import PreconditionError
from ..schemas.verdicts import Verdict
from .bitsets import ids_of, mask_of, size
from .matroid import Bijection, Matroid, contract_with_map, find_isomorphism, k5_edge_id, make_r10
from .proximity import OrderingPair, disjoint_basis_pairs
from .workers import parallel_map

logger = logging.getLogger("matroidlab.sibo")


@dataclass(frozen=True, eq=False)
class SiWindowTable:
    """flags[i, j] for 1 <= i <= j <= r: the window set is a basis."""

    r: int
    flags: np.ndarray = field(repr=False)

    def __getitem__(self, window: Tuple[int, int]) -> bool:
        i, j = window
        if not 1 <= i <= j <= self.r:
            raise PreconditionError(f"window ({i},{j}) outside 1 <= i <= j <= {self.r}")
        return bool(self.flags[i, j])

    def windows(self) -> Iterator[Tuple[int, int]]:
        for i in range(1, self.r + 1):
            for j in range(i, self.r + 1):
                yield i, j

    def all_true(self) -> bool:
        return all(self.flags[i, j] for i, j in self.windows())

    def false_windows(self) -> List[Tuple[int, int]]:
        return [(i, j) for i, j in self.windows() if not self.flags[i, j]]

    def rows(self) -> List[str]:
        """Triangular 0/1 rows; row i lists j = i..r, indented to keep columns aligned."""
        out = []
        for i in range(1, self.r + 1):
            cells = " ".join("1" if self.flags[i, j] else "0" for j in range(i, self.r + 1))
            out.append("  " * (i - 1) + cells)
        return out


def _require_bases(m: Matroid, a: int, b: int) -> None:
    for name, mask in (("A", a), ("B", b)):
        if not m.is_basis(mask):
            raise PreconditionError(f"{name}={list(ids_of(mask))} is not a basis")


def si_window_table(m: Matroid, pair: OrderingPair) -> SiWindowTable:
    _require_bases(m, pair.a_set, pair.b_set)
    flags = np.zeros((pair.r + 1, pair.r + 1), dtype=bool)
    for w in pair.windows(include_full=True):
        flags[w.i, w.j] = m.is_basis(pair.window_set(w.i, w.j))
    return SiWindowTable(pair.r, flags)


def _lift(contracted_elements: Sequence[int], inner: OrderingPair, common: int) -> OrderingPair:
    shared = ids_of(common)
    a = tuple(contracted_elements[x] for x in inner.a) + shared
    b = tuple(contracted_elements[x] for x in inner.b) + shared
    return OrderingPair(a, b)


def _search_si(m: Matroid, a: int, b: int) -> Optional[OrderingPair]:
    """Backtracking over positions; a candidates ascending, then b candidates ascending.

    After position p is fixed every window (i, p) is decided, since the tail
    b_{p+1}..b_r is known as a set. Any non-basis window prunes the branch.
    """
    r = size(a)
    a_ids, b_ids = ids_of(a), ids_of(b)
    order_a: List[int] = []
    order_b: List[int] = []
    b_prefix = [0]  # b_prefix[k] = {b_1..b_k}

    def windows_ok() -> bool:
        j = len(order_a)
        tail = b & ~b_prefix[j]
        segment = 0
        for i in range(j, 0, -1):
            segment |= 1 << order_a[i - 1]
            if not m.is_basis(b_prefix[i - 1] | segment | tail):
                return False
        return True

    def extend() -> bool:
        if len(order_a) == r:
            return True
        for x in a_ids:
            if x in order_a:
                continue
            for y in b_ids:
                if y in order_b:
                    continue
                order_a.append(x)
                order_b.append(y)
                b_prefix.append(b_prefix[-1] | (1 << y))
                if windows_ok() and extend():
                    return True
                order_a.pop()
                order_b.pop()
                b_prefix.pop()
        return False

    if extend():
        return OrderingPair(tuple(order_a), tuple(order_b))
    return None


def find_si_ordering(m: Matroid, a: int, b: int) -> Optional[OrderingPair]:
    """An SI-ordering of (A, B), or None.

    Shared elements are contracted first; in the returned pair they follow the
    searched positions as an aligned suffix in increasing id order.
    """
    _require_bases(m, a, b)
    common = a & b
    if not common:
        return _search_si(m, a, b)
    contracted = contract_with_map(m, common)
    inner = _search_si(contracted.matroid, contracted.project(a & ~b), contracted.project(b & ~a))
    if inner is None:
        return None
    return _lift(contracted.elements, inner, common)


def brute_force_si_ordering(m: Matroid, a: int, b: int) -> Optional[OrderingPair]:
    """Exhaustive scan over all orderings of A \\ B and B \\ A; no pruning, no contraction."""
    _require_bases(m, a, b)
    common = a & b
    shared = ids_of(common)
    a_only, b_only = ids_of(a & ~b), ids_of(b & ~a)
    r = len(a_only)
    for pa in permutations(a_only):
        for pb in permutations(b_only):
            good = True
            for i in range(r):
                for j in range(i, r):
                    chosen = set(pb[:i]) | set(pa[i : j + 1]) | set(pb[j + 1 :]) | set(shared)
                    if not m.is_basis(mask_of(sorted(chosen))):
                        good = False
                        break
                if not good:
                    break
            if good:
                return OrderingPair(tuple(pa) + shared, tuple(pb) + shared)
    return None


def _first_failure_in_row(args: Tuple[Matroid, int]) -> Optional[int]:
    m, a = args
    for b in m.bases:
        if b != a and find_si_ordering(m, a, b) is None:
            return b
    return None


def is_sibo(m: Matroid, *, workers: int = 1) -> Verdict:
    """Every ordered basis pair has an SI-ordering; the lexicographically first failure is reported."""
    rows = parallel_map(_first_failure_in_row, [(m, a) for a in m.bases], workers=workers)
    for a, b in zip(m.bases, rows):
        if b is not None:
            logger.info("no SI-ordering for A=%s B=%s", ids_of(a), ids_of(b))
            return Verdict.failed("sibo", {"A": list(ids_of(a)), "B": list(ids_of(b))})
    return Verdict.passed("sibo")


def _search_gabow(m: Matroid, a: int, b: int) -> Optional[OrderingPair]:
    r = size(a)
    a_ids, b_ids = ids_of(a), ids_of(b)
    order_a: List[int] = []
    order_b: List[int] = []

    def prefix_ok(pa: int, pb: int) -> bool:
        return m.is_basis(pa | (b & ~pb)) and m.is_basis(pb | (a & ~pa))

    def extend(pa: int, pb: int) -> bool:
        if len(order_a) == r:
            return True
        for x in a_ids:
            if pa >> x & 1:
                continue
            for y in b_ids:
                if pb >> y & 1:
                    continue
                na, nb = pa | (1 << x), pb | (1 << y)
                if not prefix_ok(na, nb):
                    continue
                order_a.append(x)
                order_b.append(y)
                if extend(na, nb):
                    return True
                order_a.pop()
                order_b.pop()
        return False

    if extend(0, 0):
        return OrderingPair(tuple(order_a), tuple(order_b))
    return None


def find_gabow_ordering(m: Matroid, a: int, b: int) -> Optional[OrderingPair]:
    """Orderings whose prefix swaps are bases in both directions."""
    _require_bases(m, a, b)
    common = a & b
    if not common:
        return _search_gabow(m, a, b)
    contracted = contract_with_map(m, common)
    inner = _search_gabow(contracted.matroid, contracted.project(a & ~b), contracted.project(b & ~a))
    if inner is None:
        return None
    return _lift(contracted.elements, inner, common)


def is_gabow_ordering(m: Matroid, pair: OrderingPair) -> bool:
    for i in range(1, pair.r + 1):
        left = mask_of(pair.a[:i]) | mask_of(pair.b[i:])
        right = mask_of(pair.b[:i]) | mask_of(pair.a[i:])
        if not (m.is_basis(left) and m.is_basis(right)):
            return False
    return True


# R10 over K5 (see matroid.K5_EDGES for the edge ids)


def _edge(u: int, v: int) -> int:
    return k5_edge_id(u, v)


def canonical_r10_pair() -> Tuple[int, int]:
    """(5-cycle v_i v_{i+1}, pentagram v_i v_{i+2}) as edge masks."""
    cycle = mask_of(_edge(i, i + 1) for i in range(1, 6))
    pentagram = mask_of(_edge(i, i + 2) for i in range(1, 6))
    return cycle, pentagram


def theorem_4_4_orderings(k: int) -> OrderingPair:
    """Orderings of (pentagram, 5-cycle) whose only non-basis window is (3,3), rotated by k.

    a3 = v_{k+3}v_{k+5} closes a 4-cycle with b3 = v_{k+3}v_{k+4}; every other
    window leaves a single odd cycle.
    """
    if not 1 <= k <= 5:
        raise PreconditionError(f"k must be in 1..5, got {k}")
    a = (
        _edge(k + 2, k + 4),
        _edge(k, k + 2),
        _edge(k + 3, k + 5),
        _edge(k + 4, k + 6),
        _edge(k + 1, k + 3),
    )
    b = (
        _edge(k, k + 1),
        _edge(k + 2, k + 3),
        _edge(k + 3, k + 4),
        _edge(k + 1, k + 2),
        _edge(k + 4, k + 5),
    )
    return OrderingPair(a, b)


def lemma_4_1_mappings(r10: Optional[Matroid] = None) -> Iterator[Tuple[int, int, Optional[Bijection]]]:
    """For each ordered complementary basis pair, an automorphism onto the canonical pair."""
    r10 = r10 or make_r10()
    canon_a, canon_b = canonical_r10_pair()
    target = [0 if canon_a >> e & 1 else 1 for e in range(r10.n)]
    for a, b in disjoint_basis_pairs(r10):
        source = [0 if a >> e & 1 else 1 for e in range(r10.n)]
        yield a, b, find_isomorphism(r10, r10, source, target)


def verify_lemma_4_1() -> bool:
    ok = True
    count = 0
    for a, b, sigma in lemma_4_1_mappings():
        count += 1
        if sigma is None:
            logger.info("no automorphism maps A=%s B=%s onto the canonical pair", ids_of(a), ids_of(b))
            ok = False
    logger.debug("checked %d complementary basis pairs of R10", count)
    return ok and count > 0
