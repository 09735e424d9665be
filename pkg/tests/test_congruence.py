import pytest
from hypothesis import given, settings, strategies as st

from conlat.catalog import small_lattices
from conlat.congruence import (
    all_congruences,
    con_map,
    congruence_join,
    congruence_meet,
    identity_con_map,
    is_congruence_preserving_extension,
    kernel,
    meet_irreducible_congruences,
    principal_congruence,
    quotient,
    separates_zero,
)
from conlat.core import (
    LatticeMap,
    boolean_lattice,
    chain,
    identity_map,
    is_distributive,
    is_isomorphic,
    m3,
    n5,
)

from oracles import partition_congruences


def test_principal_congruence_reflexive_pair_is_identity():
    theta = principal_congruence(m3(), 2, 2)
    assert theta.is_identity


def test_principal_congruence_m3_collapses_everything():
    theta = principal_congruence(m3(), 1, 0)
    assert theta.is_full


def test_principal_congruence_three_chain():
    theta = principal_congruence(chain(3), 0, 1)
    assert theta.rep == (0, 0, 2)


def test_con_two_chain():
    assert all_congruences(chain(2)).lattice.n == 2


def test_m3_is_simple():
    assert all_congruences(m3()).lattice.n == 2


def test_con_three_chain_is_square():
    con = all_congruences(chain(3)).lattice
    assert is_isomorphic(con, boolean_lattice(2)) is not None


def test_con_n5_shape():
    # five congruences: the collapse of the short side sits below both
    # maximal proper congruences
    con = all_congruences(n5())
    assert con.lattice.n == 5
    assert len(con.lattice.atoms) == 1
    assert len(con.lattice.dual_atoms) == 2
    assert is_distributive(con.lattice)[0]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_oracle_equivalence_small(n):
    for lat in small_lattices(n):
        fast = {c.rep for c in all_congruences(lat).table}
        assert fast == partition_congruences(lat)


def test_quotient_by_identity_is_isomorphic():
    q, pi = quotient(n5(), all_congruences(n5()).table[0])
    assert q.n == n5().n and pi.image == tuple(range(5))


def test_quotient_by_full_is_singleton():
    con = all_congruences(n5())
    full = next(c for c in con.table if c.is_full)
    q, _ = quotient(n5(), full)
    assert q.n == 1


def test_quotient_three_chain():
    theta = principal_congruence(chain(3), 0, 1)
    q, pi = quotient(chain(3), theta)
    assert q.n == 2 and pi.image == (0, 0, 1)


def test_con_map_of_identity():
    cm = con_map(identity_map(n5()))
    assert cm.image == tuple(range(5))


def test_con_map_bounds_pair_into_m3():
    f = LatticeMap(chain(2), m3(), (0, 4))
    cm = con_map(f)
    # the collapse of the 2-chain generates the full congruence of M3
    assert cm.source.lattice.n == 2
    assert cm.apply(cm.source.table[1]) == cm.target.n - 1


def test_con_map_of_quotient_projection():
    theta = principal_congruence(chain(3), 0, 1)
    _, pi = quotient(chain(3), theta)
    cm = con_map(pi)
    assert cm.apply(theta) == 0


def test_separates_zero_identity():
    assert separates_zero(identity_con_map(all_congruences(m3())))


def test_separates_zero_fails_for_collapse():
    f = LatticeMap(m3(), chain(1), (0,) * 5)
    assert not separates_zero(con_map(f))


def test_congruence_preserving_identity():
    ok, _ = is_congruence_preserving_extension(identity_map(n5()))
    assert ok


def test_congruence_preserving_bounds_pair():
    f = LatticeMap(chain(2), m3(), (0, 4))
    ok, _ = is_congruence_preserving_extension(f)
    assert ok


def test_congruence_preserving_fails_for_chain_inclusion():
    f = LatticeMap(chain(2), chain(3), (0, 1))
    ok, w = is_congruence_preserving_extension(f)
    assert not ok and w is not None


def test_meet_irreducibles_of_simple_lattice():
    mis = meet_irreducible_congruences(m3())
    assert len(mis) == 1 and mis[0].is_identity


def test_meet_irreducibles_of_three_chain():
    mis = meet_irreducible_congruences(chain(3))
    assert len(mis) == 2
    assert {m.rep for m in mis} == {(0, 0, 2), (0, 1, 1)}


def test_meet_irreducibles_of_square_are_projection_kernels():
    b = boolean_lattice(2)
    mis = {m.rep for m in meet_irreducible_congruences(b)}
    assert mis == {(0, 0, 2, 2), (0, 1, 0, 1)}


def test_kernel_of_projection():
    theta = principal_congruence(chain(3), 1, 2)
    _, pi = quotient(chain(3), theta)
    assert kernel(pi).rep == theta.rep


def test_con_is_distributive_everywhere_small():
    for n in range(1, 6):
        for lat in small_lattices(n):
            assert is_distributive(all_congruences(lat).lattice)[0]


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 6), st.data())
def test_congruence_lattice_laws(n, data):
    lat = data.draw(st.sampled_from(small_lattices(n)))
    table = all_congruences(lat).table
    a = data.draw(st.sampled_from(table))
    b = data.draw(st.sampled_from(table))
    j = congruence_join(a, b)
    m = congruence_meet(a, b)
    assert m.refines(a) and m.refines(b)
    assert a.refines(j) and b.refines(j)
    # the join is the least upper bound among congruences
    for c in table:
        if a.refines(c) and b.refines(c):
            assert j.refines(c)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 6), st.data())
def test_principal_congruence_is_least(n, data):
    lat = data.draw(st.sampled_from(small_lattices(n)))
    x = data.draw(st.integers(0, lat.n - 1))
    y = data.draw(st.integers(0, lat.n - 1))
    theta = principal_congruence(lat, x, y)
    assert theta.collapses(x, y)
    for c in all_congruences(lat).table:
        if c.collapses(x, y):
            assert theta.refines(c)
