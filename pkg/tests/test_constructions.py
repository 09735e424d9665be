import pytest

from conlat.congruence import all_congruences, principal_congruence
from conlat.constructions import (
    amalgamate,
    chopped_from_pieces,
    embeddings,
    find_embedding,
    forcing_gadget,
    ideal_lattice_of_chopped,
    merge_chopped,
    partition_lattice,
    represent_sc,
    simple_sc_extension,
    sublattice,
)
from conlat.catalog import small_lattices
from conlat.core import (
    LatticeMap,
    boolean_lattice,
    chain,
    identity_map,
    is_isomorphic,
    is_relatively_complemented,
    is_relatively_complemented_in,
    is_sectionally_complemented,
    m3,
    n5,
)
from conlat.errors import (
    ConstructionUncertified,
    MeetUndefined,
    NotAnEmbedding,
    NotAnIsomorphism,
    SizeCapExceeded,
)

BELL = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52}


def test_partition_lattice_of_two():
    assert partition_lattice(2) == chain(2)


def test_partition_lattice_of_three_is_m3():
    p3 = partition_lattice(3)
    assert p3.n == 5
    assert is_isomorphic(p3, m3()) is not None
    assert all_congruences(p3).lattice.n == 2


def test_partition_lattice_of_four_counts():
    p4 = partition_lattice(4)
    assert p4.n == 15
    # one-merge partitions are the atoms, two-block partitions the dual atoms
    assert len(p4.atoms) == 6
    assert len(p4.dual_atoms) == 7


@pytest.mark.parametrize("m", sorted(BELL))
def test_partition_lattice_bell_counts(m):
    assert partition_lattice(m).n == BELL[m]


def test_partition_lattice_respects_cap():
    with pytest.raises(SizeCapExceeded):
        partition_lattice(8)


def test_simple_sc_extension_of_two_chain_is_itself():
    host, emb, dual = simple_sc_extension(chain(2))
    assert host.n == 2 and emb.image == (0, 1)


def test_simple_sc_extension_of_square():
    host, emb, dual = simple_sc_extension(boolean_lattice(2))
    assert host.n == 5  # the partition lattice on three points suffices
    assert emb.is_embedding and emb.preserves_zero
    assert host.leq(dual, host.n - 1) and dual != host.n - 1


def test_simple_sc_extension_of_pentagon():
    host, emb, dual = simple_sc_extension(n5())
    assert host.n == 15  # partition lattice on four points
    assert emb.is_embedding and emb.preserves_zero
    assert all_congruences(host).lattice.n == 2
    assert is_sectionally_complemented(host)[0]
    assert is_relatively_complemented_in(emb)[0]


def test_embeddings_are_lexicographically_ordered():
    first = find_embedding(chain(2), m3())
    everything = list(embeddings(chain(2), m3()))
    assert first.image == everything[0].image
    images = [f.image for f in everything]
    assert images == sorted(images)


def test_sublattice_generated_by_atoms():
    b = boolean_lattice(3)
    sub, inc, index = sublattice(b, [1, 2, 4])
    assert sub.n == 8  # atoms generate the whole cube
    assert inc.is_embedding


def test_amalgamate_identity_case():
    am = amalgamate(identity_map(chain(3)), identity_map(chain(3)))
    assert is_isomorphic(am.k, chain(3)) is not None
    assert am.a1.image == am.a2.image


def test_amalgamate_two_three_chains_over_bounds():
    eta = LatticeMap(chain(2), chain(3), (0, 2))
    am = amalgamate(eta, eta)
    for x in range(2):
        assert am.a1(eta(x)) == am.a2(eta(x))
    assert am.a1.is_embedding and am.a2.is_embedding


def test_amalgamate_rejects_non_embeddings():
    f = LatticeMap(chain(2), chain(3), (0, 0))
    with pytest.raises(NotAnEmbedding):
        amalgamate(f, f)


def test_forcing_gadget_structure():
    g = forcing_gadget()
    assert g.n == 6
    assert is_sectionally_complemented(g)[0]
    con = all_congruences(g).lattice
    assert is_isomorphic(con, chain(3)) is not None


def test_forcing_gadget_is_unique_at_six_elements():
    matches = []
    for lat in small_lattices(6):
        if not is_sectionally_complemented(lat)[0]:
            continue
        con = all_congruences(lat).lattice
        if is_isomorphic(con, chain(3)) is not None:
            matches.append(lat)
    assert len(matches) == 1
    assert is_isomorphic(matches[0], forcing_gadget()) is not None


def test_gadget_forcing_behaviour():
    # collapsing one designated atom collapses everything; collapsing the
    # other gives a proper congruence
    g = forcing_gadget()
    assert principal_congruence(g, 3, 0).is_full
    theta = principal_congruence(g, 1, 0)
    assert not theta.is_full and not theta.is_identity


def test_chopped_lattice_that_is_a_lattice():
    b = boolean_lattice(2)
    names = list(range(4))
    chopped, _ = chopped_from_pieces([(b, names)])
    lat, emb = ideal_lattice_of_chopped(chopped)
    assert is_isomorphic(lat, b) is not None


def test_chopped_two_chains_shared_bottom():
    two = chain(2)
    chopped, _ = chopped_from_pieces([(two, [0, "a"]), (two, [0, "b"])])
    assert chopped.joins[1][2] == -1  # no common upper bound
    lat, _ = ideal_lattice_of_chopped(chopped)
    assert is_isomorphic(lat, boolean_lattice(2)) is not None


def test_chopped_squares_shared_edge_ideal_count():
    b = boolean_lattice(2)
    chopped, m1, m2 = merge_chopped(b, [0, 1], b, [0, 1], {0: 0, 1: 1})
    assert chopped.n == 6
    lat, _ = ideal_lattice_of_chopped(chopped)
    # the two private atoms have no common upper bound, so their union is
    # itself an ideal: 8 ideals in total
    assert lat.n == 8


def test_merge_chopped_rejects_bad_seam():
    b = boolean_lattice(2)
    with pytest.raises(NotAnIsomorphism):
        merge_chopped(b, [0, 1], b, [0, 1], {0: 1, 1: 0})


def test_principal_ideal_embedding():
    b = boolean_lattice(2)
    chopped, _ = chopped_from_pieces([(b, list(range(4)))])
    lat, emb = ideal_lattice_of_chopped(chopped)
    for x in range(4):
        for y in range(4):
            assert chopped.up[x] >> y & 1 == (
                1 if lat.leq(emb[x], emb[y]) else 0
            )


def test_represent_two_element():
    rep = represent_sc(chain(2))
    assert rep.l.n == 2 and rep.atoms == (1,)
    assert rep.alpha.is_isomorphism


def test_represent_boolean_is_boolean():
    rep = represent_sc(boolean_lattice(2))
    assert rep.l.n == 4
    assert set(rep.atoms) == set(rep.l.atoms)


def test_represent_three_chain():
    rep = represent_sc(chain(3))
    assert is_sectionally_complemented(rep.l)[0]
    con = all_congruences(rep.l).lattice
    assert is_isomorphic(con, chain(3)) is not None
    # atom condition, checked directly
    irr = chain(3).join_irreducibles
    for i, a in enumerate(rep.atoms):
        theta = principal_congruence(rep.l, a, 0)
        assert rep.alpha.apply(theta) == irr[i]


def test_represent_rejects_non_distributive():
    from conlat.errors import NotDistributive

    with pytest.raises(NotDistributive):
        represent_sc(m3())


def test_represent_atoms_generate_boolean_ideal():
    rep = represent_sc(chain(3))
    t = 0
    for a in rep.atoms:
        t = rep.l.join(t, a)
    below = [x for x in range(rep.l.n) if rep.l.leq(x, t)]
    assert len(below) == 1 << len(rep.atoms)
