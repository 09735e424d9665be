import pytest

from conlat.birkhoff import Poset
from conlat.congruence import all_congruences
from conlat.core import boolean_lattice, chain, is_isomorphic
from conlat.errors import IncoherentPresentation
from conlat.ladders import (
    build_2_ladder,
    is_k_ladder,
    run_ladder_system,
    verify_direct_system,
)


def test_square_poset_is_a_2_ladder():
    square = Poset.from_pairs(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    ok, _ = is_k_ladder(square, 2)
    assert ok


def test_cube_poset_is_not_a_2_ladder():
    pairs = [
        (0, 1), (0, 2), (0, 3),
        (1, 4), (1, 5), (2, 4), (2, 6), (3, 5), (3, 6),
        (4, 7), (5, 7), (6, 7),
    ]
    cube = Poset.from_pairs(8, pairs)
    ok, w = is_k_ladder(cube, 2)
    assert not ok and w == 7  # the top has three lower covers


def test_square_poset_is_not_a_1_ladder():
    square = Poset.from_pairs(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    ok, w = is_k_ladder(square, 1)
    assert not ok and w == 3


def test_build_2_ladder_base_case_is_a_chain():
    p = build_2_ladder(0)
    assert p.n == 2
    ok, _ = is_k_ladder(p, 2)
    assert ok


@pytest.mark.parametrize("steps", [1, 2, 3])
def test_build_2_ladder_grid_shape(steps):
    p = build_2_ladder(steps)
    ok, _ = is_k_ladder(p, 2)
    assert ok
    assert p.n == (steps + 2) * (steps + 1)
    bottoms = [a for a in range(p.n) if all(
        not p.leq(b, a) for b in range(p.n) if b != a
    )]
    assert len(bottoms) == 1


def test_single_point_system():
    index = Poset.from_pairs(1, [])
    sys, report = run_ladder_system(index, chain(1), {0: [0]})
    assert report.all_passed
    assert sys.lattices[0].n == 1


def test_three_chain_index_system():
    index = Poset.from_pairs(3, [(0, 1), (1, 2)])
    s = boolean_lattice(2)
    stages = {0: [0], 1: [0, 1], 2: [0, 1, 2, 3]}
    sys, report = run_ladder_system(index, s, stages)
    assert report.all_passed
    assert verify_direct_system(sys).all_passed
    top = max(range(3), key=lambda i: sum(index.leq(j, i) for j in range(3)))
    con_top = all_congruences(sys.lattices[top]).lattice
    assert is_isomorphic(con_top, s) is not None


def test_square_index_system():
    index = Poset.from_pairs(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    s = boolean_lattice(2)
    stages = {0: [0], 1: [0, 1], 2: [0, 2], 3: [0, 1, 2, 3]}
    sys, report = run_ladder_system(index, s, stages)
    assert report.all_passed
    names = {c.name for c in report.checks}
    assert {
        "identity_maps",
        "composition",
        "zero_preserving_embeddings",
        "epsilon_isomorphisms",
        "congruence_naturality",
        "relative_complementation",
        "terminal_congruence_lattice",
    } <= names
    con_top = all_congruences(sys.lattices[3]).lattice
    assert is_isomorphic(con_top, s) is not None


def test_rejects_stage_that_is_not_join_closed():
    index = Poset.from_pairs(3, [(0, 1), (1, 2)])
    stages = {0: [0], 1: [0, 1, 2], 2: [0, 1, 2, 3]}
    with pytest.raises(IncoherentPresentation):
        run_ladder_system(index, boolean_lattice(2), stages)


def test_rejects_non_growing_stages():
    index = Poset.from_pairs(3, [(0, 1), (1, 2)])
    stages = {0: [0], 1: [0, 1, 2, 3], 2: [0, 1]}
    with pytest.raises(IncoherentPresentation):
        run_ladder_system(index, boolean_lattice(2), stages)


def test_rejects_non_trivial_bottom_stage():
    index = Poset.from_pairs(2, [(0, 1)])
    stages = {0: [0, 1], 1: [0, 1, 2, 3]}
    with pytest.raises(IncoherentPresentation):
        run_ladder_system(index, boolean_lattice(2), stages)


def test_rejects_index_with_three_lower_covers():
    pairs = [
        (0, 1), (0, 2), (0, 3),
        (1, 4), (1, 5), (2, 4), (2, 6), (3, 5), (3, 6),
        (4, 7), (5, 7), (6, 7),
    ]
    cube = Poset.from_pairs(8, pairs)
    stages = {i: [0] for i in range(8)}
    with pytest.raises(IncoherentPresentation):
        run_ladder_system(cube, chain(1), stages)
