import pytest

from matroidlab.app.errors import MatroidError, PreconditionError, SearchLimitExceeded
from matroidlab.app.services.bitsets import bit, full_mask, ids_of, mask_of
from matroidlab.app.services.generators import random_block_instance, random_multilabel_instance, random_sparse_paving
from matroidlab.app.services.labels import CyclicGroup, IntegerGroup, Labeling, group_sum
from matroidlab.app.services.matroid import SparsePavingRep, make_sparse_paving, make_uniform
from matroidlab.app.services.multilabel import (
    BlockSequence,
    ExchangeBoundSpec,
    LabelConstraint,
    MultiLabelInstance,
    check_question_6_2,
    closest_valid_basis,
    extract_uniform_minor,
    find_exchange_blocks,
    find_window_multi,
    is_uniform_b_minor,
    is_weakly_base_orderable,
    lower_bound_instance,
    uniform_minor,
    verify_unique_valid_basis,
    window_bound,
    window_label,
)
from matroidlab.app.services.sibo import canonical_r10_pair


def test_window_bound_values():
    assert [window_bound(k) for k in range(5)] == [1, 2, 4, 13, 53]
    for k in range(3, 9):
        assert window_bound(k) == k * window_bound(k - 1) + 1
    with pytest.raises(PreconditionError):
        window_bound(-1)
    spec = ExchangeBoundSpec.for_k(3)
    assert (spec.window_bound, spec.proximity_bound, spec.lower_bound) == (13, 12, 7)


def test_block_sequence_validation():
    base = mask_of([0, 1])
    blocks = BlockSequence(base, (bit(0), bit(1)), (bit(2), mask_of([3, 4])))
    assert blocks.window_set(1, 2) == mask_of([2, 3, 4])
    assert blocks.exchange([2]) == mask_of([0, 3, 4])
    assert len(list(blocks.windows())) == 3
    with pytest.raises(PreconditionError):
        BlockSequence(base, (bit(0),), ())
    with pytest.raises(PreconditionError):
        BlockSequence(base, (bit(2),), (bit(3),))
    with pytest.raises(PreconditionError):
        BlockSequence(base, (bit(0),), (bit(1),))
    with pytest.raises(PreconditionError):
        BlockSequence(base, (bit(0), bit(0)), (bit(2), bit(3)))
    with pytest.raises(PreconditionError):
        blocks.window_set(2, 3)


def test_find_window_multi_small():
    blocks = BlockSequence(bit(0), (bit(0),), (bit(1),))
    z2 = CyclicGroup(2)
    blocked = LabelConstraint(Labeling.of(z2, [0, 1]), 1)
    # one block is below window_bound(1) = 2, and the only window hits the target
    assert find_window_multi(blocks, [blocked]) is None
    free = LabelConstraint(Labeling.of(z2, [0, 0]), 1)
    assert find_window_multi(blocks, [free]).i == 1
    with pytest.raises(PreconditionError):
        find_window_multi(blocks, [LabelConstraint(Labeling.of(z2, [1, 0]), 1)])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_find_window_multi_at_the_bound(rng, k):
    for _ in range(40):
        blocks, constraints = random_block_instance(k, window_bound(k), rng)
        w = find_window_multi(blocks, constraints)
        assert w is not None
        chosen = blocks.window_set(w.i, w.j)
        for c in constraints:
            assert c.holds(chosen)
            assert window_label(blocks, c.psi, w.i, w.j) == group_sum(c.psi, chosen)


@pytest.mark.parametrize("k, bases", [(1, 2), (2, 20), (3, 3432)])
def test_lower_bound_family(k, bases):
    inst, a = lower_bound_instance(k)
    assert len(inst.matroid.bases) == bases
    complement = inst.matroid.ground & ~a
    assert inst.valid_bases() == [complement]
    assert verify_unique_valid_basis(inst, complement)
    assert closest_valid_basis(inst, a) == (complement, 2**k - 1)


def test_lower_bound_labels():
    inst, a = lower_bound_instance(2)
    first, second = inst.constraints
    assert first.psi.group == CyclicGroup(2)
    assert first.psi.values == (0, 0, 0, 1, 1, 1)
    assert second.psi.group == IntegerGroup()
    assert second.psi.values == (1, 1, 1, -2, -2, -2)
    with pytest.raises(PreconditionError):
        lower_bound_instance(5)


def test_question_6_2_is_tight_on_the_family():
    inst, a = lower_bound_instance(2)
    report = check_question_6_2(inst, a)
    assert report.status == "SATISFIED"
    assert report.distance == report.bound == 3
    assert report.basis == [3, 4, 5]


def test_closest_valid_basis_ignores_worker_count(rng):
    m = make_uniform(3, 7)
    for _ in range(5):
        inst = random_multilabel_instance(m, 2, rng)
        a = m.bases[int(rng.integers(len(m.bases)))]
        assert closest_valid_basis(inst, a, workers=2) == closest_valid_basis(inst, a, workers=1)


def test_closest_valid_basis_edge_cases():
    z2 = CyclicGroup(2)
    m = make_uniform(1, 2)
    none_valid = MultiLabelInstance(m, (LabelConstraint(Labeling.of(z2, [0, 0]), 0),))
    assert closest_valid_basis(none_valid, bit(0)) is None
    assert check_question_6_2(none_valid, bit(0)).status == "NO-VALID-BASIS"
    with pytest.raises(PreconditionError):
        closest_valid_basis(none_valid, mask_of([0, 1]))
    with pytest.raises(MatroidError):
        MultiLabelInstance(m, (LabelConstraint(Labeling.of(z2, [0, 0, 0]), 0),))


def test_sections_round_trip():
    inst, _ = lower_bound_instance(2)
    again = MultiLabelInstance.from_sections(inst.matroid, inst.to_sections())
    assert again == inst


def test_exchange_blocks():
    u24 = make_uniform(2, 4)
    blocks = find_exchange_blocks(u24, mask_of([0, 1]), mask_of([2, 3]), 2)
    assert blocks is not None and blocks.length == 2
    for w in blocks.windows():
        assert u24.is_basis(blocks.window_set(w.i, w.j))
    assert is_weakly_base_orderable(u24, 1, 1)
    assert is_weakly_base_orderable(u24, 2, 2)
    with pytest.raises(SearchLimitExceeded):
        is_weakly_base_orderable(u24, 1, 1, cap=0)
    with pytest.raises(PreconditionError):
        find_exchange_blocks(u24, mask_of([0, 1]), mask_of([2, 3]), 0)


def test_uniform_minor_extraction(r10):
    u = make_uniform(6, 12)
    x, y = extract_uniform_minor(u, full_mask(6), 2)
    assert (x, y) == (full_mask(8), mask_of([2, 3, 4, 5]))
    assert is_uniform_b_minor(u, x, y, 2)
    assert uniform_minor(u, full_mask(6), 2).matroid == make_uniform(2, 4)

    u24 = make_uniform(2, 4)
    x, y = extract_uniform_minor(u24, mask_of([0, 1]), 1)
    assert (x, y) == (mask_of([0, 1, 2]), mask_of([1]))

    with pytest.raises(PreconditionError):
        extract_uniform_minor(r10, r10.bases[0], 1)
    with pytest.raises(PreconditionError):
        extract_uniform_minor(u24, mask_of([0, 1]), 2)


def test_exchange_blocks_on_a_sparse_paving_matroid():
    # U(2,4) without the basis {0,2}
    m = make_sparse_paving(SparsePavingRep.of(4, 2, [mask_of([0, 2])]))
    blocks = find_exchange_blocks(m, mask_of([0, 1]), mask_of([2, 3]), 2)
    assert blocks == BlockSequence(mask_of([2, 3]), (bit(2), bit(3)), (bit(0), bit(1)))
    # {0,2} is not a basis, so 1 goes out for 3 rather than 0
    blocks = find_exchange_blocks(m, mask_of([0, 3]), mask_of([1, 2]), 2)
    assert blocks == BlockSequence(mask_of([1, 2]), (bit(1), bit(2)), (bit(3), bit(0)))
    assert find_exchange_blocks(m, mask_of([0, 1]), mask_of([2, 3]), 3) is None
    assert is_weakly_base_orderable(m, 1, 1)
    assert is_weakly_base_orderable(m, 2, 2)


def test_exchange_blocks_on_r10(r10):
    cycle, pentagram = canonical_r10_pair()
    blocks = find_exchange_blocks(r10, cycle, pentagram, 2)
    assert blocks is not None and blocks.base == pentagram
    for chosen in ([1], [2], [1, 2]):
        assert r10.is_basis(blocks.exchange(chosen))
    assert is_weakly_base_orderable(r10, 5, 2)


def test_uniform_minor_extraction_on_sparse_paving(rng):
    for _ in range(40):
        n = int(rng.integers(4, 9))
        r = int(rng.integers(2, n - 1))
        m = random_sparse_paving(n, r, rng, max_hyperplanes=int(rng.integers(1, 6)))
        hyperplane = next(m.non_bases())
        inside, outside = min(ids_of(hyperplane)), min(ids_of(m.ground & ~hyperplane))
        assert not is_uniform_b_minor(m, hyperplane | bit(outside), hyperplane & ~bit(inside), 1)
        for b in m.bases[:: max(1, len(m.bases) // 4)]:
            x, y = extract_uniform_minor(m, b, 1)
            assert not y & ~b and not b & ~x
            assert is_uniform_b_minor(m, x, y, 1)
            assert uniform_minor(m, b, 1).matroid == make_uniform(1, 2)


def test_uniform_minor_extraction_at_k2(rng):
    for _ in range(3):
        m = random_sparse_paving(12, 6, rng, max_hyperplanes=40)
        for b in m.bases[:3]:
            x, y = extract_uniform_minor(m, b, 2)
            assert not y & ~b and not b & ~x
            assert is_uniform_b_minor(m, x, y, 2)
            assert uniform_minor(m, b, 2).matroid == make_uniform(2, 4)
