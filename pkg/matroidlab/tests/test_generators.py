import pytest

from matroidlab.app.errors import PreconditionError
from matroidlab.app.services.bitsets import full_mask, size
from matroidlab.app.services.generators import (
    make_rng,
    random_block_instance,
    random_chain_input,
    random_coloring_input,
    random_labeled_instance,
    random_pigeonhole_input,
    random_sparse_paving,
)
from matroidlab.app.services.labels import group_sum, is_union_of_blocks, label_classes
from matroidlab.app.services.matroid import is_sparse_paving, validate_basis_axiom


def test_same_seed_same_instance():
    first = random_labeled_instance(make_rng(7), max_n=9)
    second = random_labeled_instance(make_rng(7), max_n=9)
    assert first.matroid == second.matroid
    assert first.psi == second.psi
    assert first.forbidden == second.forbidden


def test_random_sparse_paving(rng):
    for _ in range(10):
        m = random_sparse_paving(8, 4, rng)
        assert (m.n, m.r) == (8, 4)
        assert is_sparse_paving(m)
        assert validate_basis_axiom(m.n, m.r, m.bases)
    capped = random_sparse_paving(6, 3, rng, max_hyperplanes=1)
    assert len(capped.bases) >= 19


def test_pigeonhole_inputs_meet_the_preconditions(rng):
    for r in range(2, 8):
        pair, psi, forbidden = random_pigeonhole_input(r, rng)
        assert pair.is_disjoint and pair.r == r
        assert len(forbidden) == r - 1
        assert group_sum(psi, pair.a_set) in forbidden
        assert group_sum(psi, pair.b_set) not in forbidden
    with pytest.raises(PreconditionError):
        random_pigeonhole_input(1, rng)


def test_coloring_inputs_use_few_colours(rng):
    for r in range(1, 8):
        a, b, coloring = random_coloring_input(r, rng)
        assert size(a) == size(b) == r and not a & b
        assert coloring.ground == full_mask(2 * r)
        assert coloring.count_on(a) + coloring.count_on(b) <= r + 1


def test_chain_inputs(rng):
    for r in range(2, 8):
        psi, forbidden, b = random_chain_input(r, rng)
        classes = label_classes(psi)
        assert is_union_of_blocks(b, classes)
        assert classes.count_on(full_mask(2 * r) & ~b) + classes.count_on(b) <= r + 1
        assert group_sum(psi, b) not in forbidden
        assert group_sum(psi, full_mask(2 * r) & ~b) in forbidden


def test_block_instances_hold_on_the_base(rng):
    for k in (1, 2, 3):
        blocks, constraints = random_block_instance(k, 4, rng)
        assert blocks.length == 4 and len(constraints) == k
        assert all(c.holds(blocks.base) for c in constraints)
