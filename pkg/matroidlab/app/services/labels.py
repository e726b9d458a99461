"""Abelian groups, labelings psi: E -> G, forbidden sets and label classes.

Group elements are plain Python values: an int residue for Z_m, a bounded int
for Z, and a tuple (component order) for products. Groups are compared by their
spec string, so two independently parsed `Zm:3` groups are the same group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from ..errors import FormatError, GroupOverflowError, MatroidError, PreconditionError
from .bitsets import full_mask, ids_of

GroupElement = Union[int, Tuple["GroupElement", ...]]

INTEGER_BOUND = 2**63 - 1


class AbelianGroup:
    """Additive abelian group interface."""

    spec: str
    order: Optional[int] = None  # None for infinite groups

    def zero(self) -> GroupElement:
        raise NotImplementedError

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        raise NotImplementedError

    def neg(self, a: GroupElement) -> GroupElement:
        raise NotImplementedError

    def contains(self, a: object) -> bool:
        raise NotImplementedError

    def normalize(self, value: object) -> GroupElement:
        """Map a raw value onto its canonical representative (residue reduction)."""
        raise NotImplementedError

    def elements(self) -> Iterator[GroupElement]:
        raise PreconditionError(f"group {self.spec} is infinite")

    def format(self, a: GroupElement) -> str:
        return str(a)

    def parse(self, text: str) -> GroupElement:
        raise NotImplementedError

    def sub(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.add(a, self.neg(b))

    def total(self, values: Iterable[GroupElement]) -> GroupElement:
        acc = self.zero()
        for v in values:
            acc = self.add(acc, v)
        return acc

    def times(self, count: int, a: GroupElement) -> GroupElement:
        acc = self.zero()
        step = a if count >= 0 else self.neg(a)
        for _ in range(abs(count)):
            acc = self.add(acc, step)
        return acc

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AbelianGroup) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec!r})"


class CyclicGroup(AbelianGroup):
    """Z_m with residues 0..m-1."""

    def __init__(self, m: int) -> None:
        m = int(m)
        if m < 1:
            raise MatroidError(f"cyclic group modulus must be >= 1, got {m}")
        self.m = m
        self.order = m
        self.spec = f"Zm:{m}"

    def zero(self) -> int:
        return 0

    def add(self, a: GroupElement, b: GroupElement) -> int:
        return (a + b) % self.m  # type: ignore[operator]

    def neg(self, a: GroupElement) -> int:
        return (-a) % self.m  # type: ignore[operator]

    def contains(self, a: object) -> bool:
        return isinstance(a, int) and not isinstance(a, bool) and 0 <= a < self.m

    def normalize(self, value: object) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise MatroidError(f"{value!r} is not an element of {self.spec}")
        return value % self.m

    def elements(self) -> Iterator[int]:
        return iter(range(self.m))

    def parse(self, text: str) -> int:
        try:
            return self.normalize(int(text.strip()))
        except ValueError as exc:
            raise FormatError(f"bad {self.spec} value '{text}'") from exc


class IntegerGroup(AbelianGroup):
    """Z as exact signed integers; leaving +-(2^63-1) raises GroupOverflowError."""

    def __init__(self, bound: int = INTEGER_BOUND) -> None:
        self.bound = bound
        self.order = None
        self.spec = "Z"

    def _checked(self, value: int) -> int:
        if abs(value) > self.bound:
            raise GroupOverflowError(f"integer label {value} exceeds +-{self.bound}")
        return value

    def zero(self) -> int:
        return 0

    def add(self, a: GroupElement, b: GroupElement) -> int:
        return self._checked(a + b)  # type: ignore[operator]

    def neg(self, a: GroupElement) -> int:
        return -a  # type: ignore[operator]

    def contains(self, a: object) -> bool:
        return isinstance(a, int) and not isinstance(a, bool) and abs(a) <= self.bound

    def normalize(self, value: object) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise MatroidError(f"{value!r} is not an integer")
        return self._checked(value)

    def parse(self, text: str) -> int:
        try:
            return self.normalize(int(text.strip()))
        except ValueError as exc:
            raise FormatError(f"bad integer value '{text}'") from exc


class ProductGroup(AbelianGroup):
    """Direct product; elements are tuples in component order."""

    def __init__(self, components: Sequence[AbelianGroup]) -> None:
        if not components:
            raise MatroidError("product group needs at least one component")
        self.components: Tuple[AbelianGroup, ...] = tuple(components)
        orders = [g.order for g in self.components]
        self.order = None
        if all(o is not None for o in orders):
            total = 1
            for o in orders:
                total *= o  # type: ignore[operator]
            self.order = total
        self.spec = "prod:" + ",".join(_wrap_spec(g) for g in self.components)

    def zero(self) -> Tuple[GroupElement, ...]:
        return tuple(g.zero() for g in self.components)

    def add(self, a: GroupElement, b: GroupElement) -> Tuple[GroupElement, ...]:
        return tuple(g.add(x, y) for g, x, y in zip(self.components, a, b))  # type: ignore[arg-type]

    def neg(self, a: GroupElement) -> Tuple[GroupElement, ...]:
        return tuple(g.neg(x) for g, x in zip(self.components, a))  # type: ignore[arg-type]

    def contains(self, a: object) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == len(self.components)
            and all(g.contains(x) for g, x in zip(self.components, a))
        )

    def normalize(self, value: object) -> Tuple[GroupElement, ...]:
        if not isinstance(value, (tuple, list)) or len(value) != len(self.components):
            raise MatroidError(f"{value!r} is not an element of {self.spec}")
        return tuple(g.normalize(x) for g, x in zip(self.components, value))

    def elements(self) -> Iterator[Tuple[GroupElement, ...]]:
        if self.order is None:
            raise PreconditionError(f"group {self.spec} is infinite")
        return itertools.product(*(list(g.elements()) for g in self.components))

    def format(self, a: GroupElement) -> str:
        parts = []
        for g, x in zip(self.components, a):  # type: ignore[arg-type]
            text = g.format(x)
            parts.append(f"({text})" if isinstance(g, ProductGroup) else text)
        return ",".join(parts)

    def parse(self, text: str) -> Tuple[GroupElement, ...]:
        parts = split_top_level(text.strip())
        if len(parts) != len(self.components):
            raise FormatError(
                f"value '{text}' has {len(parts)} components, {self.spec} needs {len(self.components)}"
            )
        return tuple(g.parse(_unwrap(p)) for g, p in zip(self.components, parts))


def _wrap_spec(group: AbelianGroup) -> str:
    return f"({group.spec})" if isinstance(group, ProductGroup) else group.spec


def _unwrap(text: str) -> str:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        return text[1:-1]
    return text


def split_top_level(text: str) -> List[str]:
    """Split on commas that are not inside parentheses."""
    parts: List[str] = []
    depth = 0
    current = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise FormatError(f"unbalanced parentheses in '{text}'")
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise FormatError(f"unbalanced parentheses in '{text}'")
    parts.append("".join(current))
    return parts


def parse_group_spec(text: str) -> AbelianGroup:
    """`Z`, `Zm:<m>` or `prod:<spec>,<spec>,...` (nested products in parentheses)."""
    text = _unwrap(text)
    if text == "Z":
        return IntegerGroup()
    if text.startswith("Zm:"):
        try:
            return CyclicGroup(int(text[3:]))
        except ValueError as exc:
            raise FormatError(f"bad cyclic group spec '{text}'") from exc
        except MatroidError as exc:
            raise FormatError(str(exc)) from exc
    if text.startswith("prod:"):
        return ProductGroup([parse_group_spec(p) for p in split_top_level(text[5:])])
    raise FormatError(f"unknown group spec '{text}'")


@dataclass(frozen=True)
class Labeling:
    group: AbelianGroup
    values: Tuple[GroupElement, ...]

    def __post_init__(self) -> None:
        for e, v in enumerate(self.values):
            if not self.group.contains(v):
                raise MatroidError(f"label of element {e} ({v!r}) is not in {self.group.spec}")

    @classmethod
    def of(cls, group: AbelianGroup, values: Iterable[object]) -> "Labeling":
        return cls(group, tuple(group.normalize(v) for v in values))

    @property
    def n(self) -> int:
        return len(self.values)

    def __getitem__(self, e: int) -> GroupElement:
        return self.values[e]


@dataclass(frozen=True)
class ForbiddenSet:
    group: AbelianGroup
    elements: FrozenSet[GroupElement]

    def __post_init__(self) -> None:
        for v in self.elements:
            if not self.group.contains(v):
                raise MatroidError(f"forbidden label {v!r} is not in {self.group.spec}")

    @classmethod
    def of(cls, group: AbelianGroup, values: Iterable[object]) -> "ForbiddenSet":
        return cls(group, frozenset(group.normalize(v) for v in values))

    def __contains__(self, value: object) -> bool:
        return value in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def sorted_values(self) -> List[GroupElement]:
        return sorted(self.elements, key=repr)

    def shifted(self, delta: GroupElement) -> "ForbiddenSet":
        """{f - delta : f in F}."""
        return ForbiddenSet(self.group, frozenset(self.group.sub(f, delta) for f in self.elements))


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks (masks) covering `ground`."""

    blocks: Tuple[int, ...]
    ground: int

    def __post_init__(self) -> None:
        seen = 0
        for block in self.blocks:
            if not block:
                raise MatroidError("partition has an empty block")
            if block & seen:
                raise MatroidError(f"partition blocks overlap at {ids_of(block & seen)}")
            seen |= block
        if seen != self.ground:
            raise MatroidError("partition blocks do not cover the ground set")

    @classmethod
    def from_lists(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        masks = []
        for ids in blocks:
            m = 0
            for e in ids:
                m |= 1 << int(e)
            masks.append(m)
        ground = 0
        for m in masks:
            ground |= m
        return cls(tuple(masks), ground)

    def restrict(self, mask: int) -> "Partition":
        return Partition(tuple(b & mask for b in self.blocks if b & mask), self.ground & mask)

    def count_on(self, mask: int) -> int:
        """Number of blocks meeting `mask`."""
        return sum(1 for b in self.blocks if b & mask)

    def block_of(self, e: int) -> int:
        for b in self.blocks:
            if b >> e & 1:
                return b
        raise PreconditionError(f"element {e} is not covered by the partition")


def group_sum(psi: Labeling, mask: int) -> GroupElement:
    if mask >> psi.n:
        raise PreconditionError(f"set {ids_of(mask)} exceeds labeling range 0..{psi.n - 1}")
    return psi.group.total(psi.values[e] for e in ids_of(mask))


def is_f_avoiding(psi: Labeling, forbidden: ForbiddenSet, mask: int) -> bool:
    if forbidden.group != psi.group:
        raise PreconditionError(
            f"forbidden set over {forbidden.group.spec} but labeling over {psi.group.spec}"
        )
    if not forbidden.elements:
        return True
    return group_sum(psi, mask) not in forbidden


def label_classes(psi: Labeling) -> Partition:
    """Fibres of psi, in order of first occurrence of each label."""
    blocks: Dict[GroupElement, int] = {}
    for e, value in enumerate(psi.values):
        blocks[value] = blocks.get(value, 0) | (1 << e)
    return Partition(tuple(blocks.values()), full_mask(psi.n))


def is_union_of_blocks(mask: int, partition: Partition) -> bool:
    if mask & ~partition.ground:
        raise PreconditionError(f"set {ids_of(mask)} is not inside the partition's ground set")
    return all(b & mask == 0 or b & mask == b for b in partition.blocks)


def distinct_labels(psi: Labeling, mask: int) -> int:
    """|psi(X)| as a set of labels."""
    return len({psi.values[e] for e in ids_of(mask)})


def exchange_delta(psi: Labeling, incoming: int, outgoing: int) -> GroupElement:
    """psi(incoming) - psi(outgoing); the change of a label sum under an exchange."""
    return psi.group.sub(group_sum(psi, incoming), group_sum(psi, outgoing))


def format_partition(partition: Partition) -> str:
    return " | ".join(",".join(str(e) for e in ids_of(b)) for b in partition.blocks) or "-"


def check_group_axioms(group: AbelianGroup, sample: Optional[Sequence[GroupElement]] = None) -> bool:
    """Commutativity, identity, inverses and associativity over all elements (or a sample)."""
    elems = list(sample) if sample is not None else list(group.elements())
    zero = group.zero()
    for a in elems:
        if group.add(a, zero) != a or group.add(a, group.neg(a)) != zero:
            return False
        for b in elems:
            if group.add(a, b) != group.add(b, a):
                return False
            for c in elems:
                if group.add(group.add(a, b), c) != group.add(a, group.add(b, c)):
                    return False
    return True
