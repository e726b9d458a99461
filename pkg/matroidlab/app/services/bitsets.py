"""Integer-backed element sets.

An element set over a ground set of size n <= 64 is an int whose bit e is set
iff element e belongs to the set. Families of sets are kept in lexicographic
order of their ascending id tuples, which is the canonical order used by every
file format and every deterministic tie-break in the package.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence, Tuple

from ..errors import FormatError, MatroidError

MAX_GROUND = 64
EMPTY_TOKEN = "-"


def bit(e: int) -> int:
    return 1 << e


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_of(ids: Iterable[int]) -> int:
    result = 0
    for e in ids:
        e = int(e)
        if e < 0:
            raise MatroidError(f"negative element id {e}")
        if result >> e & 1:
            raise MatroidError(f"duplicate element id {e}")
        result |= 1 << e
    return result


def ids_of(mask: int) -> Tuple[int, ...]:
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def size(mask: int) -> int:
    return mask.bit_count()


def lex_key(mask: int) -> Tuple[int, ...]:
    """Sort key putting equal-size sets in lexicographic order of sorted ids."""
    return ids_of(mask)


def sort_family(masks: Iterable[int]) -> Tuple[int, ...]:
    return tuple(sorted(set(masks), key=lex_key))


def iter_combinations(n: int, r: int) -> Iterator[int]:
    """All r-subsets of range(n) as masks, in lexicographic order."""
    for ids in combinations(range(n), r):
        m = 0
        for e in ids:
            m |= 1 << e
        yield m


def iter_combinations_of(mask: int, r: int) -> Iterator[int]:
    """All r-subsets of the given set, in lexicographic order."""
    for ids in combinations(ids_of(mask), r):
        m = 0
        for e in ids:
            m |= 1 << e
        yield m


def colex_rank(mask: int) -> int:
    """Rank of the set among equal-size sets in colexicographic order (0-based)."""
    rank = 0
    for i, e in enumerate(ids_of(mask)):
        rank += comb(e, i + 1)
    return rank


def colex_unrank(rank: int, r: int) -> int:
    """Inverse of colex_rank for sets of size r."""
    if rank < 0:
        raise MatroidError(f"negative colex rank {rank}")
    mask = 0
    for i in range(r, 0, -1):
        # largest c with comb(c, i) <= rank
        c = i - 1
        while comb(c + 1, i) <= rank:
            c += 1
        mask |= 1 << c
        rank -= comb(c, i)
    return mask


def compress(mask: int, elements: Sequence[int]) -> int:
    """Re-express `mask` in the dense ids 0..len(elements)-1 of `elements`."""
    out = 0
    for new_id, old_id in enumerate(elements):
        if mask >> old_id & 1:
            out |= 1 << new_id
    return out


def expand(mask: int, elements: Sequence[int]) -> int:
    """Inverse of compress."""
    out = 0
    for new_id, old_id in enumerate(elements):
        if mask >> new_id & 1:
            out |= 1 << old_id
    return out


def format_ids(mask: int) -> str:
    ids = ids_of(mask)
    if not ids:
        return EMPTY_TOKEN
    return ",".join(str(e) for e in ids)


def parse_ids(text: str, *, n: int | None = None) -> int:
    """Parse `0,1,2` (or whitespace separated ids, or `-` for the empty set)."""
    text = text.strip()
    if text in ("", EMPTY_TOKEN):
        return 0
    tokens = text.replace(",", " ").split()
    try:
        ids = [int(t) for t in tokens]
    except ValueError as exc:
        raise FormatError(f"bad element id list '{text}'") from exc
    try:
        mask = mask_of(ids)
    except MatroidError as exc:
        raise FormatError(str(exc)) from exc
    if n is not None and mask >> n:
        raise FormatError(f"element id out of range for n={n}: '{text}'")
    return mask
