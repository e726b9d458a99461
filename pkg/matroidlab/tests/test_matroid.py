import pytest

from matroidlab.app.errors import FormatError, MatroidError, PreconditionError
from matroidlab.app.services.bitsets import (
    colex_rank,
    colex_unrank,
    format_ids,
    ids_of,
    iter_combinations,
    mask_of,
    parse_ids,
)
from matroidlab.app.services.matroid import (
    Bijection,
    Matroid,
    SparsePavingRep,
    automorphism_count,
    contract,
    dual,
    find_isomorphism,
    is_sparse_paving,
    k5_edge_id,
    make_graphic,
    make_sparse_paving,
    make_uniform,
    minor_with_map,
    rank_of,
    relabel,
    restrict,
    validate_basis_axiom,
)
from matroidlab.app.services.sibo import canonical_r10_pair

K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_element_sets():
    assert mask_of([0, 2, 5]) == 0b100101
    assert ids_of(0b100101) == (0, 2, 5)
    assert format_ids(0) == "-"
    assert parse_ids("-") == 0
    assert parse_ids("3, 1") == 0b1010
    with pytest.raises(MatroidError):
        mask_of([1, 1])
    with pytest.raises(FormatError):
        parse_ids("1,x")


def test_colex_order_of_two_subsets():
    order = sorted(iter_combinations(4, 2), key=colex_rank)
    assert [ids_of(m) for m in order] == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    assert colex_unrank(5, 2) == mask_of([2, 3])


def test_uniform_basis_counts():
    assert len(make_uniform(2, 4).bases) == 6
    assert make_uniform(0, 3).bases == (0,)
    assert len(make_uniform(5, 10).bases) == 252
    with pytest.raises(MatroidError):
        make_uniform(3, 2)
    with pytest.raises(MatroidError):
        make_uniform(0, 0)


def test_sparse_paving_construction():
    assert len(make_sparse_paving(SparsePavingRep.of(4, 2, [mask_of([0, 1])])).bases) == 5
    with pytest.raises(MatroidError):
        make_sparse_paving(SparsePavingRep.of(4, 2, [mask_of([0, 1]), mask_of([0, 2])]))
    m = make_sparse_paving(SparsePavingRep.of(6, 3, [mask_of([0, 1, 2]), mask_of([3, 4, 5])]))
    assert len(m.bases) == 18
    assert validate_basis_axiom(m.n, m.r, m.bases)


def test_graphic_matroids():
    assert len(make_graphic([(0, 1), (1, 2), (0, 2)]).bases) == 3
    assert len(make_graphic([(0, 1), (1, 2), (2, 3)]).bases) == 1
    assert len(make_graphic(K4_EDGES, 4).bases) == 16
    with pytest.raises(MatroidError):
        make_graphic([(0, 1), (2, 3)], 4)
    with pytest.raises(MatroidError):
        make_graphic([(0, 0), (0, 1)])


def test_graphic_matroids_without_edges():
    null = make_graphic([])
    assert (null.n, null.r, null.bases) == (0, 0, (0,))
    assert make_graphic([], 0) == null
    assert make_graphic([], 1) == null
    with pytest.raises(MatroidError):
        make_graphic([], 2)
    with pytest.raises(MatroidError):
        make_graphic([], -1)
    with pytest.raises(MatroidError):
        make_graphic([(0, 1)], 0)


def test_r10_shape(r10):
    assert (r10.n, r10.r) == (10, 5)
    assert len(r10.bases) == 162
    assert validate_basis_axiom(r10.n, r10.r, r10.bases)
    cycle, _ = canonical_r10_pair()
    assert r10.is_basis(cycle)
    four_cycle = mask_of([k5_edge_id(1, 2), k5_edge_id(2, 3), k5_edge_id(3, 4), k5_edge_id(4, 1)])
    assert rank_of(r10, four_cycle) == 3
    assert not any(b & four_cycle == four_cycle for b in r10.bases)


def test_basis_axiom_witness():
    verdict = validate_basis_axiom(4, 2, [mask_of([0, 1]), mask_of([2, 3])])
    assert not verdict
    assert verdict.witness == {"B": [0, 1], "B_prime": [2, 3], "e": [0]}
    with pytest.raises(MatroidError):
        Matroid.from_bases(4, [mask_of([0, 1]), mask_of([2, 3])], validate=True)


def test_rank_and_minors():
    u24 = make_uniform(2, 4)
    assert rank_of(u24, 0) == 0
    assert rank_of(u24, mask_of([0, 1, 2])) == 2
    assert dual(u24) == u24
    assert contract(u24, mask_of([0])) == make_uniform(1, 3)
    assert restrict(u24, mask_of([1, 3])) == make_uniform(2, 2)
    result = minor_with_map(u24, mask_of([0, 2, 3]), mask_of([2]))
    assert result.elements == (0, 3)
    assert result.matroid == make_uniform(1, 2)
    assert result.lift(0b10) == mask_of([3])
    with pytest.raises(PreconditionError):
        minor_with_map(u24, mask_of([0, 1]), mask_of([2]))


def test_dual_is_an_involution(r10):
    k4 = make_graphic(K4_EDGES, 4)
    assert dual(dual(k4)) == k4
    assert dual(dual(r10)) == r10


def test_sparse_paving_recognition(r10):
    assert is_sparse_paving(make_uniform(3, 6))
    # triangles of K4 pairwise share one edge
    assert is_sparse_paving(make_graphic(K4_EDGES, 4))
    # two non-bases through the same 4-cycle share four edges
    assert not is_sparse_paving(r10)


def test_isomorphism_search(r10, rng):
    u24 = make_uniform(2, 4)
    assert find_isomorphism(u24, u24) is not None
    assert find_isomorphism(u24, make_uniform(2, 5)) is None
    sigma = Bijection(tuple(int(x) for x in rng.permutation(10)))
    shuffled = relabel(r10, sigma)
    found = find_isomorphism(r10, shuffled)
    assert found is not None
    assert sorted(found.apply(b) for b in r10.bases) == sorted(shuffled.bases)


def test_automorphism_counts(r10):
    assert automorphism_count(make_uniform(2, 4)) == 24
    assert automorphism_count(make_uniform(1, 3)) == 6
    assert automorphism_count(r10) == 720
    with pytest.raises(PreconditionError):
        automorphism_count(make_uniform(2, 13))
