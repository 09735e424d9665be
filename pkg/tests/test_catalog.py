import pytest

from conlat.catalog import search_lattices, small_lattices
from conlat.core import from_covers, is_isomorphic, is_distributive

from oracles import slow_lattices

EXPECTED_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 5, 6: 15, 7: 53}


@pytest.mark.parametrize("n,count", sorted(EXPECTED_COUNTS.items()))
def test_counts(n, count):
    assert len(small_lattices(n)) == count


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_counts_against_slow_generator(n):
    slow = slow_lattices(n)
    fast = small_lattices(n)
    assert len(slow) == len(fast)
    # and the two generators produce the same lattices up to isomorphism
    for lat in fast:
        assert any(is_isomorphic(lat, other) for other in slow)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_outputs_validate_and_are_pairwise_non_isomorphic(n):
    lats = small_lattices(n)
    for lat in lats:
        rebuilt = from_covers(lat.n, lat.covers)
        assert rebuilt == lat
    for i, a in enumerate(lats):
        for b in lats[i + 1:]:
            assert is_isomorphic(a, b) is None


def test_search_lattices_finds_smallest_match():
    found = search_lattices(
        lambda l: not is_distributive(l)[0], min_n=1, max_n=6
    )
    # the smallest non-distributive lattices have five elements
    assert found is not None and found.n == 5


def test_search_lattices_can_fail():
    found = search_lattices(lambda l: False, min_n=1, max_n=4)
    assert found is None
