import pytest
from hypothesis import given, settings, strategies as st

from conlat.core import (
    FiniteLattice,
    LatticeMap,
    boolean_lattice,
    chain,
    check_properties,
    from_covers,
    glue,
    identity_map,
    interval_sublattice,
    is_boolean,
    is_isomorphic,
    is_relatively_complemented_in,
    m3,
    n5,
    product,
    product_many,
    structure_queries,
)
from conlat.congruence import all_congruences
from conlat.errors import NotALattice, NotAnIsomorphism
from conlat.catalog import small_lattices


def test_from_covers_two_chain():
    lat = from_covers(2, [(0, 1)])
    assert lat.n == 2 and lat.leq(0, 1) and not lat.leq(1, 0)


def test_from_covers_missing_join_is_rejected():
    with pytest.raises(NotALattice) as exc:
        from_covers(4, [(0, 1), (0, 2)])
    assert exc.value.witness is not None


def test_product_of_chains_is_boolean():
    lat, _, _ = product(chain(2), chain(2))
    assert is_isomorphic(lat, boolean_lattice(2)) is not None


def test_product_with_singleton_is_identity():
    lat, _, _ = product(n5(), chain(1))
    assert is_isomorphic(lat, n5()) is not None


def test_product_m3_m3_congruences():
    # 25 elements; its congruence lattice is the 4-element boolean lattice
    lat, _, _ = product(m3(), m3())
    assert lat.n == 25
    con = all_congruences(lat).lattice
    assert con.n == 4 and is_boolean(con)[0]


def test_glue_ordinal_sum():
    k0, k1 = boolean_lattice(2), chain(3)
    glued, e0, e1 = glue(k0, [k0.n - 1], k1, [0], {k0.n - 1: 0})
    assert glued.n == k0.n + k1.n - 1
    assert e0.is_embedding and e1.is_embedding


def test_glue_boolean_squares_along_edge():
    b = boolean_lattice(2)
    glued, _, _ = glue(b, [1, 3], b, [0, 1], {1: 0, 3: 1})
    assert glued.n == 6


def test_glue_rejects_non_isomorphism():
    b = boolean_lattice(2)
    with pytest.raises(NotAnIsomorphism):
        glue(b, [1, 3], b, [0, 2], {1: 2, 3: 0})


def test_structure_queries_m3():
    s = structure_queries(m3())
    assert set(s.atoms) == {1, 2, 3}
    assert set(s.dual_atoms) == {1, 2, 3}


def test_join_irreducibles():
    assert set(boolean_lattice(2).join_irreducibles) == {1, 2}
    # every non-bottom element of a chain is join irreducible
    assert set(chain(3).join_irreducibles) == {1, 2}


def test_check_properties_m3():
    p = check_properties(m3())
    assert p.simple and p.atomistic and p.sectionally_complemented
    assert p.relatively_complemented and not p.distributive


def test_check_properties_chain():
    p = check_properties(chain(3))
    assert p.distributive
    assert not p.sectionally_complemented
    assert not p.relatively_complemented
    assert not p.atomistic
    assert p.witnesses["sectionally_complemented"] is not None


def test_check_properties_boolean_cube():
    for k in (1, 2, 3):
        p = check_properties(boolean_lattice(k))
        assert p.atomistic and p.sectionally_complemented
        assert p.relatively_complemented and p.distributive and p.boolean
        assert p.simple == (k == 1)


def test_relatively_complemented_in_identity_on_rc():
    ok, _ = is_relatively_complemented_in(identity_map(m3()))
    assert ok


def test_relatively_complemented_in_chain_inside_square():
    f = LatticeMap(chain(3), boolean_lattice(2), (0, 1, 3))
    ok, _ = is_relatively_complemented_in(f)
    assert ok


def test_relatively_complemented_in_chain_identity_fails():
    ok, w = is_relatively_complemented_in(identity_map(chain(3)))
    assert not ok and w == (0, 1, 2)


def test_isomorphism_identity_case():
    assert is_isomorphic(m3(), m3()) is not None


def test_isomorphism_absent():
    assert is_isomorphic(m3(), chain(5)) is None


def test_isomorphism_product_symmetry():
    a, _, _ = product(chain(2), chain(3))
    b, _, _ = product(chain(3), chain(2))
    assert is_isomorphic(a, b) is not None


def test_interval_sublattice():
    b = boolean_lattice(3)
    sub, elems = interval_sublattice(b, 0, 3)
    assert sub.n == 4 and is_boolean(sub)[0]
    assert set(elems) == {0, 1, 2, 3}


def test_structural_equality_ignores_labels():
    a = from_covers(2, [(0, 1)], labels=["bot", "top"])
    b = from_covers(2, [(0, 1)])
    assert a == b and hash(a) == hash(b)


def test_embedding_iff_injective_for_lattice_maps():
    # an injective homomorphism between lattices is order-reflecting
    f = LatticeMap(chain(2), m3(), (0, 4))
    assert f.is_injective and f.is_embedding
    g = LatticeMap(chain(2), m3(), (0, 0))
    assert not g.is_injective and not g.is_embedding


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.data())
def test_lattice_axioms_on_catalog(n, data):
    lats = small_lattices(n)
    lat = data.draw(st.sampled_from(lats))
    x = data.draw(st.integers(0, lat.n - 1))
    y = data.draw(st.integers(0, lat.n - 1))
    z = data.draw(st.integers(0, lat.n - 1))
    assert lat.join(x, y) == lat.join(y, x)
    assert lat.meet(x, y) == lat.meet(y, x)
    assert lat.join(x, lat.meet(x, y)) == x
    assert lat.meet(x, lat.join(x, y)) == x
    assert lat.join(x, lat.join(y, z)) == lat.join(lat.join(x, y), z)
    assert lat.leq(x, y) == (lat.join(x, y) == y)


def test_product_many_projections():
    lat, projs = product_many([chain(2), chain(3), chain(2)])
    assert lat.n == 12
    for x in range(lat.n):
        for p in projs:
            assert 0 <= p(x) < p.codomain.n
    # coordinates determine the element
    seen = {tuple(p(x) for p in projs) for x in range(lat.n)}
    assert len(seen) == lat.n
