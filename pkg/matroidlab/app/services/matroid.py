"""Explicit matroids: construction, validation, minors and isomorphism.

A matroid is stored as its full basis family. Elements are 0-based ids; sets
are int masks (see bitsets). The basis tuple is sorted lexicographically, so
iteration order, serialisation and every "first witness" are deterministic.
"""

from __future__ import annotations

import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from ..errors import MatroidError, PreconditionError, SearchLimitExceeded
from ..schemas.verdicts import Verdict
from .bitsets import (
    MAX_GROUND,
    bit,
    compress,
    full_mask,
    ids_of,
    iter_combinations,
    mask_of,
    size,
    sort_family,
)

logger = logging.getLogger("matroidlab.matroid")

MAX_FAMILY = 5_000_000
AUTOMORPHISM_MAX_N = 12

_debug_validate = os.environ.get("MATROIDLAB_DEBUG_VALIDATE", "") == "1"


def set_debug_validation(enabled: bool) -> None:
    """Re-validate the exchange axiom after every constructor when enabled."""
    global _debug_validate
    _debug_validate = bool(enabled)


def debug_validation_enabled() -> bool:
    return _debug_validate


@dataclass(frozen=True)
class Matroid:
    n: int
    r: int
    bases: Tuple[int, ...]
    _lookup: FrozenSet[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_lookup", frozenset(self.bases))

    @classmethod
    def from_bases(cls, n: int, bases: Iterable[int], *, validate: Optional[bool] = None) -> "Matroid":
        """Normalise a basis family into a Matroid.

        `validate=None` defers to the debug-validation switch; True forces the
        exchange-axiom scan, False skips it (used when decoding untrusted models
        that are checked separately).
        """
        if not 0 <= n <= MAX_GROUND:
            raise MatroidError(f"ground set size {n} outside 0..{MAX_GROUND}")
        family = sort_family(int(b) for b in bases)
        if not family:
            raise MatroidError("basis family is empty")
        r = size(family[0])
        for b in family:
            if b < 0 or b >> n:
                raise MatroidError(f"basis {ids_of(b)} has elements outside 0..{n - 1}")
            if size(b) != r:
                raise MatroidError(f"bases of different sizes: {r} and {size(b)}")
        matroid = cls(n=n, r=r, bases=family)
        if validate or (validate is None and _debug_validate):
            verdict = validate_basis_axiom(n, r, family)
            if not verdict:
                raise MatroidError(f"basis exchange axiom fails: {verdict.line()}")
        return matroid

    @property
    def ground(self) -> int:
        return full_mask(self.n)

    def is_basis(self, mask: int) -> bool:
        return mask in self._lookup

    def is_independent(self, mask: int) -> bool:
        return any(b & mask == mask for b in self.bases)

    def non_bases(self) -> Iterator[int]:
        """r-subsets of the ground set that are not bases, lexicographic order."""
        for s in iter_combinations(self.n, self.r):
            if s not in self._lookup:
                yield s

    def incidence(self, e: int) -> int:
        """Number of bases containing element e."""
        return sum(1 for b in self.bases if b >> e & 1)


@dataclass(frozen=True)
class SparsePavingRep:
    n: int
    r: int
    hyperplanes: Tuple[int, ...]

    @classmethod
    def of(cls, n: int, r: int, hyperplanes: Iterable[int]) -> "SparsePavingRep":
        return cls(n=n, r=r, hyperplanes=sort_family(hyperplanes))


@dataclass(frozen=True)
class Bijection:
    mapping: Tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise MatroidError(f"not a permutation: {self.mapping}")

    @classmethod
    def identity(cls, n: int) -> "Bijection":
        return cls(tuple(range(n)))

    def apply(self, mask: int) -> int:
        out = 0
        for e, image in enumerate(self.mapping):
            if mask >> e & 1:
                out |= 1 << image
        return out

    def inverse(self) -> "Bijection":
        inv = [0] * len(self.mapping)
        for e, image in enumerate(self.mapping):
            inv[image] = e
        return Bijection(tuple(inv))


@dataclass(frozen=True)
class MinorResult:
    """A minor with its order-preserving element map (new id -> original id)."""

    matroid: Matroid
    elements: Tuple[int, ...]

    def lift(self, mask: int) -> int:
        out = 0
        for new_id, old_id in enumerate(self.elements):
            if mask >> new_id & 1:
                out |= 1 << old_id
        return out

    def project(self, mask: int) -> int:
        return compress(mask, self.elements)


def _check_family_size(n: int, r: int) -> None:
    if comb(n, r) > MAX_FAMILY:
        raise SearchLimitExceeded(f"C({n},{r}) r-subsets exceed the enumeration guard {MAX_FAMILY}")


def validate_basis_axiom(n: int, r: int, family: Iterable[int]) -> Verdict:
    """Scan the basis exchange axiom; the first failing (B, B', e) is the witness."""
    fam = sort_family(family)
    if not fam:
        raise MatroidError("basis family is empty")
    for b in fam:
        if size(b) != r or b >> n:
            raise MatroidError(f"{ids_of(b)} is not an {r}-subset of 0..{n - 1}")
    lookup = frozenset(fam)
    for b1 in fam:
        for b2 in fam:
            diff = b1 & ~b2
            if not diff:
                continue
            incoming = ids_of(b2 & ~b1)
            for e in ids_of(diff):
                rest = b1 & ~bit(e)
                if not any(rest | bit(f) in lookup for f in incoming):
                    return Verdict.failed(
                        "basis-exchange",
                        {"B": list(ids_of(b1)), "B_prime": list(ids_of(b2)), "e": [e]},
                    )
    return Verdict.passed("basis-exchange")


def rank_of(matroid: Matroid, mask: int) -> int:
    if mask < 0 or mask >> matroid.n:
        raise PreconditionError(f"set {ids_of(mask)} is not inside the ground set")
    return max(size(b & mask) for b in matroid.bases)


def dual(matroid: Matroid) -> Matroid:
    ground = matroid.ground
    return Matroid.from_bases(matroid.n, (ground ^ b for b in matroid.bases))


def restrict_with_map(matroid: Matroid, keep: int) -> MinorResult:
    if keep >> matroid.n:
        raise PreconditionError(f"restriction set {ids_of(keep)} is not inside the ground set")
    elements = ids_of(keep)
    r = rank_of(matroid, keep)
    family = {compress(b & keep, elements) for b in matroid.bases if size(b & keep) == r}
    return MinorResult(Matroid.from_bases(len(elements), family), elements)


def contract_with_map(matroid: Matroid, drop: int) -> MinorResult:
    if drop >> matroid.n:
        raise PreconditionError(f"contraction set {ids_of(drop)} is not inside the ground set")
    elements = ids_of(matroid.ground & ~drop)
    r = rank_of(matroid, drop)
    family = {compress(b & ~drop, elements) for b in matroid.bases if size(b & drop) == r}
    return MinorResult(Matroid.from_bases(len(elements), family), elements)


def minor_with_map(matroid: Matroid, keep: int, drop: int) -> MinorResult:
    """(M|X)/Y for Y within X, relabelled densely."""
    if drop & ~keep:
        raise PreconditionError(f"contracted set {ids_of(drop)} is not inside {ids_of(keep)}")
    restricted = restrict_with_map(matroid, keep)
    contracted = contract_with_map(restricted.matroid, restricted.project(drop))
    elements = tuple(restricted.elements[i] for i in contracted.elements)
    return MinorResult(contracted.matroid, elements)


def restrict(matroid: Matroid, keep: int) -> Matroid:
    return restrict_with_map(matroid, keep).matroid


def contract(matroid: Matroid, drop: int) -> Matroid:
    return contract_with_map(matroid, drop).matroid


def minor(matroid: Matroid, keep: int, drop: int) -> Matroid:
    return minor_with_map(matroid, keep, drop).matroid


def make_uniform(r: int, n: int) -> Matroid:
    if n < 1 or not 0 <= r <= n:
        raise MatroidError(f"U_{{{r},{n}}} needs n >= 1 and 0 <= r <= n")
    _check_family_size(n, r)
    return Matroid.from_bases(n, iter_combinations(n, r))


def make_sparse_paving(rep: SparsePavingRep) -> Matroid:
    n, r = rep.n, rep.r
    hyperplanes = sort_family(rep.hyperplanes)
    for h in hyperplanes:
        if size(h) != r or h >> n:
            raise MatroidError(f"hyperplane {ids_of(h)} is not an {r}-subset of 0..{n - 1}")
    for h1, h2 in combinations(hyperplanes, 2):
        if size(h1 & h2) > r - 2:
            raise MatroidError(
                f"hyperplanes {ids_of(h1)} and {ids_of(h2)} share {size(h1 & h2)} > r-2 elements"
            )
    _check_family_size(n, r)
    excluded = frozenset(hyperplanes)
    family = [s for s in iter_combinations(n, r) if s not in excluded]
    if not family:
        raise MatroidError("every r-subset is a hyperplane; no bases remain")
    return Matroid.from_bases(n, family)


def sparse_paving_rep(matroid: Matroid) -> Optional[SparsePavingRep]:
    """Hyperplane list of a sparse paving matroid, or None if it is not one.

    Two non-bases meeting in r-1 elements are neighbours in the Johnson graph,
    so it suffices to check that every neighbour of a non-basis is a basis.
    """
    hyperplanes = list(matroid.non_bases())
    ground = matroid.ground
    for h in hyperplanes:
        outside = ids_of(ground & ~h)
        for e in ids_of(h):
            rest = h & ~bit(e)
            for f in outside:
                if not matroid.is_basis(rest | bit(f)):
                    return None
    return SparsePavingRep.of(matroid.n, matroid.r, hyperplanes)


def is_sparse_paving(matroid: Matroid) -> bool:
    return sparse_paving_rep(matroid) is not None


def _is_forest(edges: Sequence[Tuple[int, int]], chosen: Sequence[int]) -> bool:
    components = nx.utils.UnionFind()
    for idx in chosen:
        u, v = edges[idx]
        if components[u] == components[v]:
            return False
        components.union(u, v)
    return True


def make_graphic(edges: Sequence[Tuple[int, int]], num_vertices: Optional[int] = None) -> Matroid:
    """Cycle matroid of a connected multigraph; element i is the i-th edge.

    The null graph (no vertices, no edges) gives the rank-0 matroid on no elements.
    """
    edges = [(int(u), int(v)) for u, v in edges]
    if num_vertices is None:
        num_vertices = 1 + max((max(e) for e in edges), default=-1)
    if num_vertices < 0:
        raise MatroidError(f"num_vertices must be >= 0, got {num_vertices}")
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(num_vertices))
    for idx, (u, v) in enumerate(edges):
        if u == v:
            raise MatroidError(f"edge {idx} is a loop at vertex {u}")
        if not (0 <= u < num_vertices and 0 <= v < num_vertices):
            raise MatroidError(f"edge {idx} uses a vertex outside 0..{num_vertices - 1}")
        graph.add_edge(u, v, key=idx)
    if num_vertices > 0 and not nx.is_connected(graph):
        raise MatroidError("graph is disconnected; spanning trees do not exist")
    rank = max(num_vertices - 1, 0)
    _check_family_size(len(edges), rank)
    family = [
        s for s in iter_combinations(len(edges), rank) if _is_forest(edges, ids_of(s))
    ]
    logger.debug("graphic matroid: %d edges, %d spanning trees", len(edges), len(family))
    return Matroid.from_bases(len(edges), family)


# K5 on vertices 1..5; element id = position in this tuple.
K5_EDGES: Tuple[Tuple[int, int], ...] = tuple(combinations(range(1, 6), 2))


def k5_edge_id(u: int, v: int) -> int:
    """Element id of edge uv of K5 (1-based vertices, read cyclically mod 5)."""
    u = (u - 1) % 5 + 1
    v = (v - 1) % 5 + 1
    if u == v:
        raise MatroidError("K5 has no loops")
    return K5_EDGES.index((min(u, v), max(u, v)))


def _is_even_cycle_independent(edges: Iterable[Tuple[int, int]]) -> bool:
    """Each component carries at most one cycle, and that cycle is odd."""
    graph = nx.Graph()
    graph.add_edges_from(edges)
    for component in nx.connected_components(graph):
        sub = graph.subgraph(component)
        num_edges = sub.number_of_edges()
        if num_edges > len(component):
            return False
        if num_edges == len(component) and nx.is_bipartite(sub):
            return False
    return True


def make_r10() -> Matroid:
    """Even-cycle matroid of K5 over the fixed edge order K5_EDGES."""
    family = [
        s
        for s in iter_combinations(len(K5_EDGES), 5)
        if _is_even_cycle_independent(K5_EDGES[e] for e in ids_of(s))
    ]
    return Matroid.from_bases(len(K5_EDGES), family)


def relabel(matroid: Matroid, sigma: Bijection) -> Matroid:
    return Matroid.from_bases(matroid.n, (sigma.apply(b) for b in matroid.bases))


def iter_isomorphisms(
    m1: Matroid,
    m2: Matroid,
    colors1: Optional[Sequence[int]] = None,
    colors2: Optional[Sequence[int]] = None,
) -> Iterator[Bijection]:
    """All basis-family isomorphisms m1 -> m2, optionally colour preserving.

    Elements of m1 are assigned in increasing id order, candidates in increasing
    id order. A partial assignment survives only if the multiset of basis traces
    on the assigned elements agrees on both sides; at full depth that is exactly
    equality of the mapped basis family.
    """
    if (m1.n, m1.r, len(m1.bases)) != (m2.n, m2.r, len(m2.bases)):
        return
    n = m1.n
    colors1 = tuple(colors1) if colors1 is not None else (0,) * n
    colors2 = tuple(colors2) if colors2 is not None else (0,) * n
    if len(colors1) != n or len(colors2) != n:
        raise PreconditionError("colour vectors must cover the ground set")
    sig1 = [(m1.incidence(e), colors1[e]) for e in range(n)]
    sig2 = [(m2.incidence(e), colors2[e]) for e in range(n)]
    if sorted(sig1) != sorted(sig2):
        return

    image = [0] * n
    used = [False] * n

    def extend(e: int, codes1: List[int], codes2: List[int]) -> Iterator[Bijection]:
        if e == n:
            yield Bijection(tuple(image))
            return
        step = 1 << e
        next1 = [c | step if b >> e & 1 else c for c, b in zip(codes1, m1.bases)]
        target = Counter(next1)
        for f in range(n):
            if used[f] or sig2[f] != sig1[e]:
                continue
            next2 = [c | step if b >> f & 1 else c for c, b in zip(codes2, m2.bases)]
            if Counter(next2) != target:
                continue
            used[f] = True
            image[e] = f
            yield from extend(e + 1, next1, next2)
            used[f] = False

    start = [0] * len(m1.bases)
    yield from extend(0, start, list(start))


def find_isomorphism(
    m1: Matroid,
    m2: Matroid,
    colors1: Optional[Sequence[int]] = None,
    colors2: Optional[Sequence[int]] = None,
) -> Optional[Bijection]:
    return next(iter_isomorphisms(m1, m2, colors1, colors2), None)


def automorphism_count(matroid: Matroid, *, max_n: int = AUTOMORPHISM_MAX_N) -> int:
    if matroid.n > max_n:
        raise PreconditionError(f"automorphism search refused for n={matroid.n} > {max_n}")
    count = sum(1 for _ in iter_isomorphisms(matroid, matroid))
    logger.debug("automorphisms: n=%d r=%d count=%d", matroid.n, matroid.r, count)
    return count


def automorphisms(matroid: Matroid, *, max_n: int = AUTOMORPHISM_MAX_N) -> List[Bijection]:
    if matroid.n > max_n:
        raise PreconditionError(f"automorphism search refused for n={matroid.n} > {max_n}")
    return list(iter_isomorphisms(matroid, matroid))


def element_set(ids: Iterable[int], n: int) -> int:
    """Validated mask of ids inside 0..n-1."""
    mask = mask_of(ids)
    if mask >> n:
        raise MatroidError(f"element ids {sorted(ids_of(mask))} exceed ground set 0..{n - 1}")
    return mask
