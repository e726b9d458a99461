import pytest

from matroidlab.app.errors import FormatError, GroupOverflowError, MatroidError, PreconditionError
from matroidlab.app.services.bitsets import full_mask, mask_of
from matroidlab.app.services.generators import random_labeling
from matroidlab.app.services.labels import (
    CyclicGroup,
    ForbiddenSet,
    IntegerGroup,
    Labeling,
    Partition,
    ProductGroup,
    check_group_axioms,
    exchange_delta,
    group_sum,
    is_f_avoiding,
    is_union_of_blocks,
    label_classes,
    parse_group_spec,
)


def test_group_specs():
    assert parse_group_spec("Z") == IntegerGroup()
    assert parse_group_spec("Zm:5") == CyclicGroup(5)
    nested = parse_group_spec("prod:Zm:2,(prod:Zm:3,Z)")
    assert isinstance(nested, ProductGroup)
    assert nested.spec == "prod:Zm:2,(prod:Zm:3,Z)"
    assert nested.parse("1,(2,-7)") == (1, (2, -7))
    assert nested.format((1, (2, -7))) == "1,(2,-7)"
    with pytest.raises(FormatError):
        parse_group_spec("Q")
    with pytest.raises(FormatError):
        parse_group_spec("Zm:x")


def test_finite_group_tables():
    for group in (CyclicGroup(1), CyclicGroup(6), ProductGroup([CyclicGroup(2), CyclicGroup(3)])):
        assert check_group_axioms(group)
    assert check_group_axioms(IntegerGroup(), sample=[-3, 0, 2, 5])


def test_integer_overflow_is_reported():
    z = IntegerGroup()
    with pytest.raises(GroupOverflowError):
        z.add(2**63 - 1, 1)
    psi = Labeling.of(z, [2**62, 2**62])
    with pytest.raises(GroupOverflowError):
        group_sum(psi, 0b11)


def test_group_sum():
    ones = Labeling.of(CyclicGroup(2), [1, 1, 1, 1])
    assert group_sum(ones, mask_of([0, 1, 3])) == 1
    assert group_sum(ones, 0) == 0
    # second constraint of the k=2 lower-bound family: A -> 1, outside A -> -2
    psi = Labeling.of(IntegerGroup(), [1, 1, 1, -2, -2, -2])
    assert group_sum(psi, mask_of([3, 4, 5])) == -6
    with pytest.raises(PreconditionError):
        group_sum(ones, mask_of([4]))


def test_f_avoiding_modes():
    z3 = CyclicGroup(3)
    psi = Labeling.of(z3, [1, 2, 0])
    zero_sum = mask_of([0, 1])
    assert is_f_avoiding(psi, ForbiddenSet.of(z3, []), zero_sum)
    assert is_f_avoiding(psi, ForbiddenSet.of(z3, [1, 2]), zero_sum)
    assert not is_f_avoiding(psi, ForbiddenSet.of(z3, [0]), zero_sum)
    with pytest.raises(PreconditionError):
        is_f_avoiding(psi, ForbiddenSet.of(CyclicGroup(2), [0]), zero_sum)


def test_labels_are_checked_against_the_group():
    with pytest.raises(MatroidError):
        Labeling(CyclicGroup(3), (0, 3))
    assert Labeling.of(CyclicGroup(3), [4, -1]).values == (1, 2)
    with pytest.raises(MatroidError):
        ForbiddenSet(CyclicGroup(2), frozenset([5]))


def test_label_classes():
    z2 = CyclicGroup(2)
    assert label_classes(Labeling.of(z2, [1, 1, 1])).blocks == (0b111,)
    assert label_classes(Labeling.of(IntegerGroup(), [3, 1, 4, 5])).blocks == (0b1, 0b10, 0b100, 0b1000)
    assert label_classes(Labeling.of(z2, [0, 1, 0, 1])).blocks == (mask_of([0, 2]), mask_of([1, 3]))


def test_label_classes_are_fibres(rng):
    group = ProductGroup([CyclicGroup(2), CyclicGroup(2)])
    for _ in range(50):
        psi = random_labeling(8, group, rng)
        classes = label_classes(psi)
        for e in range(8):
            for f in range(8):
                same_block = classes.block_of(e) == classes.block_of(f)
                assert same_block == (psi[e] == psi[f])


def test_union_of_blocks():
    p = Partition.from_lists([[0, 1], [2, 3]])
    assert is_union_of_blocks(0, p)
    assert is_union_of_blocks(mask_of([0, 1]), p)
    assert not is_union_of_blocks(mask_of([0, 2]), p)
    singletons = Partition.from_lists([[e] for e in range(4)])
    assert all(is_union_of_blocks(x, singletons) for x in range(16))
    with pytest.raises(MatroidError):
        Partition((0b11, 0b110), 0b111)
    with pytest.raises(MatroidError):
        Partition((0b1,), full_mask(2))


def test_sums_are_additive_and_telescope(rng):
    group = CyclicGroup(7)
    for _ in range(100):
        psi = random_labeling(10, group, rng)
        x, y = int(rng.integers(1 << 5)), int(rng.integers(1 << 5)) << 5
        assert group_sum(psi, x | y) == group.add(group_sum(psi, x), group_sum(psi, y))
        b = mask_of([0, 1, 2])
        exchanged = mask_of([0, 1, 7])
        assert group.sub(group_sum(psi, exchanged), group_sum(psi, b)) == exchange_delta(psi, mask_of([7]), mask_of([2]))
