"""Exhaustive generation of small lattices up to isomorphism."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterator, Optional

from .budget import DEFAULT_BUDGET, Budget
from .core import FiniteLattice, _bits, build_lattice, is_isomorphic


def _down_closed_choices(ideals: list[int]) -> Iterator[int]:
    """Down-closed subsets D of the elements built so far, 0 in D, such that
    D meets every principal ideal in a principal ideal."""
    i = len(ideals)
    ideal_set = set(ideals)
    for mask in range(1, 1 << i, 2):  # bit 0 always present
        ok = True
        for j in _bits(mask):
            if ideals[j] & ~mask:
                ok = False
                break
        if not ok:
            continue
        for d in ideals:
            if (mask & d) not in ideal_set:
                ok = False
                break
        if ok:
            yield mask


def _labelled_lattices(n: int, budget: Budget) -> Iterator[FiniteLattice]:
    """All lattices on elements 0..n-1 listed in a linear extension.

    Elements are added one at a time by choosing their strict down-set; keeping
    principal ideals intersection-closed makes every partial stage a meet
    semilattice, so adjoining the top as the last element always yields a
    lattice.  The same lattice appears once per linear extension; callers
    deduplicate.
    """
    if n == 1:
        yield build_lattice(1, [1], budget=budget)[0]
        return

    def grow(ideals: list[int]) -> Iterator[list[int]]:
        i = len(ideals)
        if i == n - 1:
            yield ideals + [(1 << n) - 1]
            return
        for mask in _down_closed_choices(ideals):
            yield from grow(ideals + [mask | (1 << i)])

    for ideals in grow([1]):
        up = [0] * n
        for b, d in enumerate(ideals):
            for a in _bits(d):
                up[a] |= 1 << b
        lat, _ = build_lattice(n, up, budget=budget)
        yield lat


@lru_cache(maxsize=None)
def small_lattices(n: int) -> tuple[FiniteLattice, ...]:
    """All lattices with n elements, one per isomorphism class."""
    budget = DEFAULT_BUDGET
    buckets: dict = {}
    out = []
    for lat in _labelled_lattices(n, budget):
        degree_profile = tuple(
            sorted(bin(mask).count("1") for mask in lat.up)
        )
        key = (len(lat.covers), lat.height, len(lat.atoms),
               len(lat.dual_atoms), degree_profile)
        group = buckets.setdefault(key, [])
        if any(is_isomorphic(lat, seen) is not None for seen in group):
            continue
        group.append(lat)
        out.append(lat)
    return tuple(out)


def search_lattices(
    predicate: Callable[[FiniteLattice], bool],
    min_n: int = 1,
    max_n: int = 8,
    budget: Budget = DEFAULT_BUDGET,
) -> Optional[FiniteLattice]:
    """Smallest lattice satisfying the predicate, scanning by size."""
    for n in range(min_n, max_n + 1):
        budget.check_time("small-lattice search")
        for lat in small_lattices(n):
            budget.check_time("small-lattice search")
            if predicate(lat):
                return lat
    return None
