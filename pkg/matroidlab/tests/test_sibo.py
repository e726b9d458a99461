import pytest

from matroidlab.app.errors import PreconditionError
from matroidlab.app.services.bitsets import mask_of
from matroidlab.app.services.matroid import k5_edge_id, make_graphic, make_uniform
from matroidlab.app.services.proximity import OrderingPair
from matroidlab.app.services.sibo import (
    brute_force_si_ordering,
    canonical_r10_pair,
    find_gabow_ordering,
    find_si_ordering,
    is_gabow_ordering,
    is_sibo,
    lemma_4_1_mappings,
    si_window_table,
    theorem_4_4_orderings,
    verify_lemma_4_1,
)


def test_uniform_table_is_all_true():
    table = si_window_table(make_uniform(2, 4), OrderingPair.of([0, 1], [2, 3]))
    assert table.all_true()
    assert table.false_windows() == []
    assert table.rows() == ["1 1", "  1"]
    with pytest.raises(PreconditionError):
        table[2, 1]


def test_table_needs_bases():
    with pytest.raises(PreconditionError):
        si_window_table(make_uniform(2, 4), OrderingPair.of([0], [1]))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_r10_orderings_fail_only_at_the_middle_window(r10, k):
    pair = theorem_4_4_orderings(k)
    cycle, pentagram = canonical_r10_pair()
    assert pair.a_set == pentagram and pair.b_set == cycle
    assert si_window_table(r10, pair).false_windows() == [(3, 3)]


def test_r10_table_rows(r10):
    assert si_window_table(r10, theorem_4_4_orderings(1)).rows() == [
        "1 1 1 1 1",
        "  1 1 1 1",
        "    0 1 1",
        "      1 1",
        "        1",
    ]


def test_middle_elements_cover_both_bases():
    cycle, pentagram = canonical_r10_pair()
    a_side = [theorem_4_4_orderings(k).a[2] for k in range(1, 6)]
    b_side = [theorem_4_4_orderings(k).b[2] for k in range(1, 6)]
    assert mask_of(a_side) == pentagram
    assert mask_of(b_side) == cycle
    with pytest.raises(PreconditionError):
        theorem_4_4_orderings(6)


def test_canonical_r10_pair(r10):
    cycle, pentagram = canonical_r10_pair()
    assert cycle & pentagram == 0
    assert r10.is_basis(cycle) and r10.is_basis(pentagram)
    assert find_si_ordering(r10, cycle, pentagram) is None
    assert brute_force_si_ordering(r10, cycle, pentagram) is None


def test_si_orderings_on_small_matroids():
    u24 = make_uniform(2, 4)
    pair = find_si_ordering(u24, mask_of([0, 1]), mask_of([2, 3]))
    assert pair == OrderingPair.of([0, 1], [2, 3])
    assert si_window_table(u24, pair).all_true()
    k4 = make_graphic([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 4)
    for a in k4.bases:
        for b in k4.bases:
            found = find_si_ordering(k4, a, b)
            assert found is not None
            assert si_window_table(k4, found).all_true()


def test_shared_elements_become_an_aligned_suffix():
    pair = find_si_ordering(make_uniform(2, 4), mask_of([0, 1]), mask_of([0, 2]))
    assert pair.a == (1, 0) and pair.b == (2, 0)
    brute = brute_force_si_ordering(make_uniform(2, 4), mask_of([0, 1]), mask_of([0, 2]))
    assert brute.a[-1] == brute.b[-1] == 0


def test_gabow_ordering_exists_on_r10(r10):
    cycle, pentagram = canonical_r10_pair()
    pair = find_gabow_ordering(r10, cycle, pentagram)
    assert pair is not None
    assert is_gabow_ordering(r10, pair)
    # swapping v1v2 for v1v3 first leaves the 4-cycle v1v3v4v5 in the cycle side
    cycle_order = [k5_edge_id(i, i + 1) for i in range(1, 6)]
    pentagram_order = [k5_edge_id(i, i + 2) for i in range(1, 6)]
    assert not is_gabow_ordering(r10, OrderingPair.of(cycle_order, pentagram_order))


def test_is_sibo():
    assert is_sibo(make_uniform(2, 4))
    assert is_sibo(make_uniform(2, 5), workers=2)


def test_r10_is_not_sibo(r10):
    verdict = is_sibo(r10)
    assert verdict.line().startswith("FAIL")
    a, b = mask_of(verdict.witness["A"]), mask_of(verdict.witness["B"])
    assert a & b == 0
    assert find_si_ordering(r10, a, b) is None


def test_complementary_pairs_map_onto_the_canonical_pair(r10):
    cycle, pentagram = canonical_r10_pair()
    mappings = list(lemma_4_1_mappings(r10))
    assert len(mappings) == 72
    for a, b, sigma in mappings:
        assert sigma is not None
        assert sigma.apply(a) == cycle and sigma.apply(b) == pentagram
    assert verify_lemma_4_1()
