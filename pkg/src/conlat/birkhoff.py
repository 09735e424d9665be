"""Finite distributive lattices as down-set lattices of their join irreducibles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .budget import DEFAULT_BUDGET, Budget
from .core import (
    FiniteLattice,
    JoinZeroMap,
    LatticeMap,
    _bits,
    build_lattice,
    is_boolean,
    is_distributive,
)
from .errors import ConstructionUncertified, NotAPartialOrder, NotDistributive


@dataclass(frozen=True)
class Poset:
    """A finite poset as per-element up-set bitmasks."""

    n: int
    up: tuple[int, ...]

    def leq(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    @staticmethod
    def from_pairs(n: int, pairs) -> "Poset":
        up = [1 << a for a in range(n)]
        changed = True
        for a, b in pairs:
            up[a] |= 1 << b
        while changed:
            changed = False
            for a in range(n):
                mask = up[a]
                for b in _bits(up[a]):
                    mask |= up[b]
                if mask != up[a]:
                    up[a] = mask
                    changed = True
        for a in range(n):
            for b in _bits(up[a]):
                if b != a and up[b] >> a & 1:
                    raise NotAPartialOrder(f"cycle at ({a}, {b})")
        return Poset(n, tuple(up))


def joinirr_poset(lat: FiniteLattice) -> tuple[Poset, tuple[int, ...]]:
    """The poset of join-irreducible elements, with their lattice indices."""
    irr = lat.join_irreducibles
    pos = {p: i for i, p in enumerate(irr)}
    up = [0] * len(irr)
    for i, p in enumerate(irr):
        mask = 0
        for q in _bits(lat.up[p]):
            if q in pos:
                mask |= 1 << pos[q]
        up[i] = mask
    return Poset(len(irr), tuple(up)), irr


def downset_lattice(
    poset: Poset, budget: Budget = DEFAULT_BUDGET
) -> tuple[FiniteLattice, tuple[int, ...]]:
    """The lattice of down-sets of a poset, with the down-set bitmasks.

    Entry ``i`` of the returned tuple is the subset of poset elements forming
    the down-set that lattice element ``i`` stands for.
    """
    n = poset.n
    downs = [
        m for m in range(1 << n)
        if all(_down_closed(poset, m, b) for b in _bits(m))
    ]
    budget.check_elements(len(downs), "down-set lattice")
    up = [0] * len(downs)
    for i, a in enumerate(downs):
        mask = 0
        for j, b in enumerate(downs):
            if a & ~b == 0:
                mask |= 1 << j
        up[i] = mask
    lat, perm = build_lattice(len(downs), up, budget=budget)
    table = [0] * len(downs)
    for old, m in enumerate(downs):
        table[perm[old]] = m
    return lat, tuple(table)


def _down_closed(poset: Poset, mask: int, b: int) -> bool:
    for a in range(poset.n):
        if poset.leq(a, b) and not mask >> a & 1:
            return False
    return True


def birkhoff_iso(lat: FiniteLattice, budget: Budget = DEFAULT_BUDGET) -> LatticeMap:
    """Isomorphism of a distributive lattice onto the down-set lattice of its
    join irreducibles."""
    ok, witness = is_distributive(lat)
    if not ok:
        raise NotDistributive(f"distributivity fails at {witness}")
    poset, irr = joinirr_poset(lat)
    down, table = downset_lattice(poset, budget=budget)
    index = {m: i for i, m in enumerate(table)}
    image = []
    for x in range(lat.n):
        m = 0
        for i, p in enumerate(irr):
            if lat.leq(p, x):
                m |= 1 << i
        image.append(index[m])
    f = LatticeMap(lat, down, tuple(image))
    if not f.is_isomorphism:
        raise ConstructionUncertified(
            "down-set representation is not an isomorphism", step="birkhoff_iso"
        )
    return f


@dataclass(frozen=True)
class BooleanExtension:
    """A boolean lattice over the join irreducibles of a distributive lattice.

    ``eta`` embeds the distributive lattice into the boolean one by sending an
    element to its set of join irreducibles; ``rho`` retracts by taking joins.
    ``rho o eta`` is the identity.  Boolean element indices are subset
    bitmasks, bit ``i`` standing for ``irreducibles[i]``.
    """

    base: FiniteLattice
    boolean: FiniteLattice
    eta: LatticeMap
    rho: JoinZeroMap
    irreducibles: tuple[int, ...]

    def dual_atom(self, i: int) -> int:
        """The boolean complement of atom i (the i-th join irreducible)."""
        return (self.boolean.n - 1) & ~(1 << i)


def boolean_extension(
    lat: FiniteLattice, budget: Budget = DEFAULT_BUDGET
) -> BooleanExtension:
    """Embed a finite distributive lattice into the boolean lattice on its
    join irreducibles, together with the retraction."""
    ok, witness = is_distributive(lat)
    if not ok:
        raise NotDistributive(f"distributivity fails at {witness}")
    from .core import boolean_lattice

    _, irr = joinirr_poset(lat)
    k = len(irr)
    budget.check_elements(1 << k, "boolean extension")
    boolean = boolean_lattice(k, budget=budget)

    eta_image = []
    for x in range(lat.n):
        m = 0
        for i, p in enumerate(irr):
            if lat.leq(p, x):
                m |= 1 << i
        eta_image.append(m)
    eta = LatticeMap(lat, boolean, tuple(eta_image))

    rho_image = []
    for m in range(boolean.n):
        v = 0
        for i in _bits(m):
            v = lat.join(v, irr[i])
        rho_image.append(v)
    rho = JoinZeroMap(boolean, lat, tuple(rho_image))

    for x in range(lat.n):
        if rho(eta(x)) != x:
            raise ConstructionUncertified(
                "retraction does not invert the embedding",
                step="boolean_extension",
                witness=x,
            )
    if not eta.is_embedding:
        raise ConstructionUncertified(
            "eta is not an embedding", step="boolean_extension"
        )
    okb, wb = is_boolean(boolean)
    if not okb:
        raise ConstructionUncertified(
            "extension is not boolean", step="boolean_extension", witness=wb
        )
    return BooleanExtension(
        base=lat, boolean=boolean, eta=eta, rho=rho, irreducibles=irr
    )
