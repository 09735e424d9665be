"""Finite lattices as dense tables, and join/meet preserving maps between them.

Elements are integers ``0..n-1`` listed in a linear extension of the order,
so ``0`` is always the bottom and ``n-1`` the top.  The order is stored as
per-element up-set bitmasks; join and meet are total ``n x n`` tables.  All
values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .budget import DEFAULT_BUDGET, Budget
from .errors import (
    NotAFilter,
    NotAHomomorphism,
    NotAnIdeal,
    NotAnIsomorphism,
    NotALattice,
    NotAPartialOrder,
)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class FiniteLattice:
    """An explicit finite lattice: order bitmasks plus total join/meet tables."""

    n: int
    up: tuple[int, ...]
    joins: tuple[tuple[int, ...], ...]
    meets: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __hash__(self):
        return hash((self.n, self.up))

    # -- order ---------------------------------------------------------
    def leq(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def join(self, a: int, b: int) -> int:
        return self.joins[a][b]

    def meet(self, a: int, b: int) -> int:
        return self.meets[a][b]

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.n - 1

    def elements(self) -> range:
        return range(self.n)

    @cached_property
    def down(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for a in range(self.n):
            ua = self.up[a]
            for b in _bits(ua):
                masks[b] |= 1 << a
        return tuple(masks)

    def interval(self, a: int, c: int) -> int:
        """Bitmask of the interval [a, c]."""
        return self.up[a] & self.down[c]

    def ideal(self, a: int) -> tuple[int, ...]:
        """The principal ideal (a]."""
        return tuple(_bits(self.down[a]))

    def filter(self, a: int) -> tuple[int, ...]:
        """The principal filter [a)."""
        return tuple(_bits(self.up[a]))

    # -- structure -----------------------------------------------------
    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """All covering pairs (a, b) with a covered by b."""
        out = []
        for a in range(self.n):
            strict_up = self.up[a] & ~(1 << a)
            for b in _bits(strict_up):
                between = self.up[a] & self.down[b] & ~(1 << a) & ~(1 << b)
                if not between:
                    out.append((a, b))
        return tuple(out)

    def lower_covers(self, b: int) -> tuple[int, ...]:
        return tuple(a for a, c in self.covers if c == b)

    def upper_covers(self, a: int) -> tuple[int, ...]:
        return tuple(c for x, c in self.covers if x == a)

    @cached_property
    def atoms(self) -> tuple[int, ...]:
        return self.upper_covers(0)

    @cached_property
    def dual_atoms(self) -> tuple[int, ...]:
        return self.lower_covers(self.n - 1)

    @cached_property
    def join_irreducibles(self) -> tuple[int, ...]:
        """Non-bottom elements with exactly one lower cover."""
        return tuple(
            a for a in range(1, self.n) if len(self.lower_covers(a)) == 1
        )

    @cached_property
    def meet_irreducibles(self) -> tuple[int, ...]:
        return tuple(
            a for a in range(self.n - 1) if len(self.upper_covers(a)) == 1
        )

    @cached_property
    def height(self) -> int:
        # indices form a linear extension, so one ascending pass suffices
        h = [0] * self.n
        for a, b in sorted(self.covers, key=lambda c: c[1]):
            h[b] = max(h[b], h[a] + 1)
        return max(h) if self.n else 0

    def label(self, a: int) -> str:
        if self.labels is not None:
            return self.labels[a]
        return str(a)

    def __repr__(self):
        return f"FiniteLattice(n={self.n})"


# ---------------------------------------------------------------------------
# construction


def _toposort(n: int, up: Sequence[int]) -> list[int]:
    """Linear extension (smallest index first among available elements)."""
    down_count = [0] * n
    for a in range(n):
        for b in _bits(up[a]):
            if b != a:
                down_count[b] += 1
    import heapq

    ready = [a for a in range(n) if down_count[a] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        a = heapq.heappop(ready)
        order.append(a)
        for b in _bits(up[a]):
            if b != a:
                down_count[b] -= 1
                if down_count[b] == 0:
                    heapq.heappush(ready, b)
    if len(order) != n:
        raise NotAPartialOrder("cycle detected in order relation")
    return order


def build_lattice(
    n: int,
    up: Sequence[int],
    labels: Optional[Sequence[str]] = None,
    budget: Budget = DEFAULT_BUDGET,
) -> tuple[FiniteLattice, list[int]]:
    """Canonicalize an order given by up-set bitmasks into a FiniteLattice.

    Validates the partial-order axioms and the existence of unique joins and
    meets.  Returns the lattice and the permutation old-index -> new-index.
    """
    budget.check_elements(n)
    if n == 0:
        raise NotALattice("a lattice must be nonempty")
    for a in range(n):
        if not up[a] >> a & 1:
            raise NotAPartialOrder(f"order not reflexive at {a}")
        for b in _bits(up[a]):
            if b != a and up[b] >> a & 1:
                raise NotAPartialOrder(f"order not antisymmetric at ({a}, {b})")
            if up[b] & ~up[a]:
                raise NotAPartialOrder(f"order not transitive at ({a}, {b})")

    order = _toposort(n, up)
    perm = [0] * n  # old -> new
    for new, old in enumerate(order):
        perm[old] = new
    new_up = [0] * n
    for old in range(n):
        mask = 0
        for b in _bits(up[old]):
            mask |= 1 << perm[b]
        new_up[perm[old]] = mask

    down = [0] * n
    for a in range(n):
        for b in _bits(new_up[a]):
            down[b] |= 1 << a

    full = (1 << n) - 1
    if new_up[0] != full:
        # no least element: find a pair of minimal elements as witness
        raise NotALattice(
            "no bottom element", witness=_meetless_pair(n, new_up, down)
        )
    if down[n - 1] != full:
        raise NotALattice(
            "no top element", witness=_joinless_pair(n, new_up, down)
        )

    joins = []
    meets = []
    for a in range(n):
        ja = [0] * n
        ma = [0] * n
        for b in range(n):
            ub = new_up[a] & new_up[b]
            c = _lowest(ub)
            if ub & ~new_up[c]:
                raise NotALattice(
                    f"elements {a} and {b} have no least upper bound",
                    witness=(a, b),
                )
            ja[b] = c
            db = down[a] & down[b]
            d = db.bit_length() - 1
            if db & ~down[d]:
                raise NotALattice(
                    f"elements {a} and {b} have no greatest lower bound",
                    witness=(a, b),
                )
            ma[b] = d
        joins.append(tuple(ja))
        meets.append(tuple(ma))

    new_labels = None
    if labels is not None:
        new_labels = [""] * n
        for old, lab in enumerate(labels):
            new_labels[perm[old]] = str(lab)
        new_labels = tuple(new_labels)

    lat = FiniteLattice(
        n=n,
        up=tuple(new_up),
        joins=tuple(joins),
        meets=tuple(meets),
        labels=new_labels,
    )
    return lat, perm


def _joinless_pair(n, up, down):
    for a in range(n):
        for b in range(a + 1, n):
            ub = up[a] & up[b]
            if not ub or ub & ~up[_lowest(ub)]:
                return (a, b)
    return None


def _meetless_pair(n, up, down):
    for a in range(n):
        for b in range(a + 1, n):
            db = down[a] & down[b]
            if not db or db & ~down[db.bit_length() - 1]:
                return (a, b)
    return None


def from_covers(
    n: int,
    covers,
    labels: Optional[Sequence[str]] = None,
    budget: Budget = DEFAULT_BUDGET,
) -> FiniteLattice:
    """Lattice whose order is the reflexive-transitive closure of the covers."""
    budget.check_elements(n)
    up = [1 << a for a in range(n)]
    adj = [0] * n
    for a, b in covers:
        if not (0 <= a < n and 0 <= b < n):
            raise NotAPartialOrder(f"cover ({a}, {b}) out of range for n={n}")
        adj[a] |= 1 << b
    # closure in reverse topological passes; detect cycles via toposort later
    changed = True
    while changed:
        changed = False
        for a in range(n):
            mask = up[a]
            for b in _bits(adj[a]):
                mask |= up[b]
            if mask != up[a]:
                up[a] = mask
                changed = True
    for a in range(n):
        for b in _bits(adj[a]):
            if b != a and up[b] >> a & 1:
                raise NotAPartialOrder(f"cycle through cover ({a}, {b})")
    lat, _ = build_lattice(n, up, labels=labels, budget=budget)
    return lat


def chain(k: int, budget: Budget = DEFAULT_BUDGET) -> FiniteLattice:
    """The k-element chain."""
    return from_covers(k, [(i, i + 1) for i in range(k - 1)], budget=budget)


def boolean_lattice(k: int, budget: Budget = DEFAULT_BUDGET) -> FiniteLattice:
    """The powerset lattice 2^k, indexed by subset bitmask."""
    n = 1 << k
    budget.check_elements(n)
    if k == 0:
        return chain(1)
    up = [0] * n
    for a in range(n):
        mask = 0
        # supersets of a
        comp = (n - 1) & ~a
        s = comp
        while True:
            mask |= 1 << (a | s)
            if s == 0:
                break
            s = (s - 1) & comp
        up[a] = mask
    joins = tuple(tuple(a | b for b in range(n)) for a in range(n))
    meets = tuple(tuple(a & b for b in range(n)) for a in range(n))
    return FiniteLattice(n=n, up=tuple(up), joins=joins, meets=meets)


def m3() -> FiniteLattice:
    """The five-element nondistributive modular lattice."""
    return from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])


def n5() -> FiniteLattice:
    """The pentagon."""
    return from_covers(5, [(0, 1), (1, 3), (0, 2), (3, 4), (2, 4)])


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class LatticeMap:
    """A join- and meet-preserving map between two finite lattices."""

    domain: FiniteLattice
    codomain: FiniteLattice
    image: tuple[int, ...]

    def __post_init__(self):
        dom, cod, img = self.domain, self.codomain, self.image
        if len(img) != dom.n:
            raise NotAHomomorphism("image length does not match domain size")
        for a in range(dom.n):
            if not 0 <= img[a] < cod.n:
                raise NotAHomomorphism(f"image of {a} out of range")
            for b in range(a, dom.n):
                if img[dom.join(a, b)] != cod.join(img[a], img[b]):
                    raise NotAHomomorphism(
                        f"join not preserved at ({a}, {b})", witness=(a, b)
                    )
                if img[dom.meet(a, b)] != cod.meet(img[a], img[b]):
                    raise NotAHomomorphism(
                        f"meet not preserved at ({a}, {b})", witness=(a, b)
                    )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.image))

    def __call__(self, a: int) -> int:
        return self.image[a]

    @property
    def preserves_zero(self) -> bool:
        return self.image[0] == 0

    @cached_property
    def is_injective(self) -> bool:
        return len(set(self.image)) == self.domain.n

    @cached_property
    def is_embedding(self) -> bool:
        """Injective and order-reflecting."""
        if not self.is_injective:
            return False
        dom, cod = self.domain, self.codomain
        for a in range(dom.n):
            for b in range(dom.n):
                if cod.leq(self.image[a], self.image[b]) and not dom.leq(a, b):
                    return False
        return True

    @cached_property
    def is_isomorphism(self) -> bool:
        return (
            self.domain.n == self.codomain.n
            and self.is_embedding
        )

    def compose(self, earlier: "LatticeMap") -> "LatticeMap":
        """self o earlier."""
        if earlier.codomain != self.domain:
            raise NotAHomomorphism("composition domains do not match")
        return LatticeMap(
            domain=earlier.domain,
            codomain=self.codomain,
            image=tuple(self.image[x] for x in earlier.image),
        )

    def inverse(self) -> "LatticeMap":
        if not self.is_isomorphism:
            raise NotAnIsomorphism("map is not an isomorphism")
        inv = [0] * self.codomain.n
        for a, b in enumerate(self.image):
            inv[b] = a
        return LatticeMap(self.codomain, self.domain, tuple(inv))


def identity_map(lat: FiniteLattice) -> LatticeMap:
    return LatticeMap(lat, lat, tuple(range(lat.n)))


@dataclass(frozen=True)
class JoinZeroMap:
    """A map preserving joins and the bottom, but not necessarily meets."""

    domain: FiniteLattice
    codomain: FiniteLattice
    image: tuple[int, ...]

    def __post_init__(self):
        dom, cod, img = self.domain, self.codomain, self.image
        if len(img) != dom.n:
            raise NotAHomomorphism("image length does not match domain size")
        if img[0] != 0:
            raise NotAHomomorphism("bottom not preserved")
        for a in range(dom.n):
            if not 0 <= img[a] < cod.n:
                raise NotAHomomorphism(f"image of {a} out of range")
            for b in range(a, dom.n):
                if img[dom.join(a, b)] != cod.join(img[a], img[b]):
                    raise NotAHomomorphism(
                        f"join not preserved at ({a}, {b})", witness=(a, b)
                    )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.image))

    def __call__(self, a: int) -> int:
        return self.image[a]

    def compose(self, earlier) -> "JoinZeroMap":
        """self o earlier, where earlier is any map with an image tuple."""
        if earlier.codomain != self.domain:
            raise NotAHomomorphism("composition domains do not match")
        return JoinZeroMap(
            domain=earlier.domain,
            codomain=self.codomain,
            image=tuple(self.image[x] for x in earlier.image),
        )


# ---------------------------------------------------------------------------
# products


def product_many(
    factors: Sequence[FiniteLattice], budget: Budget = DEFAULT_BUDGET
) -> tuple[FiniteLattice, list[LatticeMap]]:
    """Direct product with componentwise tables, plus the projections."""
    size = 1
    for f in factors:
        size *= f.n
    budget.check_elements(size, "product")
    if not factors:
        return chain(1), []

    radices = [f.n for f in factors]
    k = len(factors)

    def decode(idx):
        out = [0] * k
        for i in range(k - 1, -1, -1):
            out[i] = idx % radices[i]
            idx //= radices[i]
        return out

    def encode(tup):
        idx = 0
        for i in range(k):
            idx = idx * radices[i] + tup[i]
        return idx

    tuples = [decode(i) for i in range(size)]

    # up-set of a product element = intersection of per-coordinate up-sets
    coord_masks = []
    for i, f in enumerate(factors):
        masks = [0] * f.n
        for idx, tup in enumerate(tuples):
            masks[tup[i]] |= 1 << idx
        geq = [0] * f.n
        for v in range(f.n):
            m = 0
            for w in _bits(f.up[v]):
                m |= masks[w]
            geq[v] = m
        coord_masks.append(geq)

    up = []
    for tup in tuples:
        m = coord_masks[0][tup[0]]
        for i in range(1, k):
            m &= coord_masks[i][tup[i]]
        up.append(m)

    joins = []
    meets = []
    for a, ta in enumerate(tuples):
        ja = [0] * size
        ma = [0] * size
        for b, tb in enumerate(tuples):
            ja[b] = encode([factors[i].join(ta[i], tb[i]) for i in range(k)])
            ma[b] = encode([factors[i].meet(ta[i], tb[i]) for i in range(k)])
        joins.append(tuple(ja))
        meets.append(tuple(ma))

    # mixed-radix index order is already a linear extension with bottom 0
    lat = FiniteLattice(
        n=size, up=tuple(up), joins=tuple(joins), meets=tuple(meets)
    )
    projections = []
    for i, f in enumerate(factors):
        projections.append(
            LatticeMap(lat, f, tuple(tup[i] for tup in tuples))
        )
    return lat, projections


def product(
    a: FiniteLattice, b: FiniteLattice, budget: Budget = DEFAULT_BUDGET
) -> tuple[FiniteLattice, LatticeMap, LatticeMap]:
    """Binary direct product with the two projections."""
    lat, projs = product_many([a, b], budget=budget)
    return lat, projs[0], projs[1]


def tuple_of(lat: FiniteLattice, factors: Sequence[FiniteLattice], coords):
    """Encode componentwise coordinates into a product lattice index."""
    idx = 0
    for f, c in zip(factors, coords):
        idx = idx * f.n + c
    return idx


# ---------------------------------------------------------------------------
# gluing


def glue(
    k0: FiniteLattice,
    filter_elems: Sequence[int],
    k1: FiniteLattice,
    ideal_elems: Sequence[int],
    iso: dict,
    budget: Budget = DEFAULT_BUDGET,
) -> tuple[FiniteLattice, LatticeMap, LatticeMap]:
    """Hall-Dilworth gluing of ``k1`` on top of ``k0``.

    ``filter_elems`` must be a filter of ``k0``, ``ideal_elems`` an ideal of
    ``k1``, and ``iso`` a dict realizing a lattice isomorphism between them.
    Returns the glued lattice and the canonical embeddings of ``k0`` and
    ``k1``.
    """
    h = frozenset(filter_elems)
    i_set = frozenset(ideal_elems)
    _check_filter(k0, h)
    _check_ideal(k1, i_set)
    if set(iso) != h or set(iso.values()) != i_set or len(iso) != len(i_set):
        raise NotAnIsomorphism("seam map is not a bijection filter -> ideal")
    for x in h:
        for y in h:
            if k0.leq(x, y) != k1.leq(iso[x], iso[y]):
                raise NotAnIsomorphism(
                    f"seam map does not preserve order at ({x}, {y})"
                )

    n0 = k0.n
    inv = {v: k for k, v in iso.items()}
    new_id = {}
    for y in range(k1.n):
        if y not in i_set:
            new_id[y] = n0 + len(new_id)
    n = n0 + k1.n - len(i_set)
    budget.check_elements(n, "glued lattice")

    def k1_elem(y):
        return inv[y] if y in i_set else new_id[y]

    up = [1 << a for a in range(n)]
    # inside k0
    for a in range(n0):
        up[a] |= k0.up[a]
    # inside k1 (including the seam copies living in k0)
    for y in range(k1.n):
        gy = k1_elem(y)
        for z in _bits(k1.up[y]):
            up[gy] |= 1 << k1_elem(z)
    # across the seam: x in k0, y strictly in k1, x <= y iff x <= z <= y for
    # some seam element z
    for x in range(n0):
        reach = 0
        for z in _bits(k0.up[x]):
            if z in h:
                for w in _bits(k1.up[iso[z]]):
                    reach |= 1 << k1_elem(w)
        up[x] |= reach

    lat, perm = build_lattice(n, up, budget=budget)
    e0 = LatticeMap(k0, lat, tuple(perm[a] for a in range(n0)))
    e1 = LatticeMap(k1, lat, tuple(perm[k1_elem(y)] for y in range(k1.n)))
    return lat, e0, e1


def _check_filter(lat: FiniteLattice, elems: frozenset):
    if not elems:
        raise NotAFilter("filter must be nonempty")
    for x in elems:
        for y in _bits(lat.up[x]):
            if y not in elems:
                raise NotAFilter(f"filter not upward closed at ({x}, {y})")
        for y in elems:
            if lat.meet(x, y) not in elems:
                raise NotAFilter(f"filter not meet closed at ({x}, {y})")


def _check_ideal(lat: FiniteLattice, elems: frozenset):
    if not elems:
        raise NotAnIdeal("ideal must be nonempty")
    for x in elems:
        for y in _bits(lat.down[x]):
            if y not in elems:
                raise NotAnIdeal(f"ideal not downward closed at ({x}, {y})")
        for y in elems:
            if lat.join(x, y) not in elems:
                raise NotAnIdeal(f"ideal not join closed at ({x}, {y})")


def interval_sublattice(
    lat: FiniteLattice, lo: int, hi: int
) -> tuple[FiniteLattice, tuple[int, ...]]:
    """The interval [lo, hi] as a lattice, with its elements in the ambient."""
    elems = tuple(_bits(lat.interval(lo, hi)))
    pos = {x: i for i, x in enumerate(elems)}
    up = [0] * len(elems)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            if lat.leq(x, y):
                up[i] |= 1 << j
    sub, perm = build_lattice(len(elems), up)
    ordered = [0] * len(elems)
    for old, x in enumerate(elems):
        ordered[perm[old]] = x
    return sub, tuple(ordered)


# ---------------------------------------------------------------------------
# structural predicates


@dataclass(frozen=True)
class StructureSummary:
    atoms: tuple[int, ...]
    dual_atoms: tuple[int, ...]
    join_irreducibles: tuple[int, ...]
    covers: tuple[tuple[int, int], ...]


def structure_queries(lat: FiniteLattice) -> StructureSummary:
    return StructureSummary(
        atoms=lat.atoms,
        dual_atoms=lat.dual_atoms,
        join_irreducibles=lat.join_irreducibles,
        covers=lat.covers,
    )


@dataclass(frozen=True)
class LatticeProperties:
    simple: bool
    atomistic: bool
    sectionally_complemented: bool
    relatively_complemented: bool
    distributive: bool
    boolean: bool
    witnesses: dict


def is_atomistic(lat: FiniteLattice) -> tuple[bool, Optional[int]]:
    atom_mask = 0
    for a in lat.atoms:
        atom_mask |= 1 << a
    for x in range(lat.n):
        j = 0
        for a in _bits(atom_mask & lat.down[x]):
            j = lat.join(j, a)
        if j != x:
            return False, x
    return True, None


def is_sectionally_complemented(lat: FiniteLattice):
    for b in range(lat.n):
        section = lat.down[b]
        for x in _bits(section):
            ok = False
            for y in _bits(section):
                if lat.meet(x, y) == 0 and lat.join(x, y) == b:
                    ok = True
                    break
            if not ok:
                return False, (x, b)
    return True, None


def is_relatively_complemented(lat: FiniteLattice):
    for a in range(lat.n):
        for c in _bits(lat.up[a]):
            box = lat.interval(a, c)
            for b in _bits(box):
                ok = False
                for x in _bits(box):
                    if lat.meet(x, b) == a and lat.join(x, b) == c:
                        ok = True
                        break
                if not ok:
                    return False, (a, b, c)
    return True, None


def is_distributive(lat: FiniteLattice):
    n = lat.n
    for a in range(n):
        ma = lat.meets[a]
        for b in range(n):
            ab = ma[b]
            for c in range(n):
                if ma[lat.join(b, c)] != lat.join(ab, ma[c]):
                    return False, (a, b, c)
    return True, None


def is_boolean(lat: FiniteLattice):
    ok, w = is_distributive(lat)
    if not ok:
        return False, w
    top = lat.n - 1
    for x in range(lat.n):
        if not any(
            lat.meet(x, y) == 0 and lat.join(x, y) == top
            for y in range(lat.n)
        ):
            return False, x
    return True, None


def check_properties(lat: FiniteLattice) -> LatticeProperties:
    """Exhaustively computed structural flags with witnesses for failures."""
    from .congruence import all_congruences  # cycle: congruences build lattices

    witnesses = {}
    simple = all_congruences(lat).lattice.n == 2
    atomistic, w = is_atomistic(lat)
    if w is not None:
        witnesses["atomistic"] = w
    sc, w = is_sectionally_complemented(lat)
    if w is not None:
        witnesses["sectionally_complemented"] = w
    rc, w = is_relatively_complemented(lat)
    if w is not None:
        witnesses["relatively_complemented"] = w
    dist, w = is_distributive(lat)
    if w is not None:
        witnesses["distributive"] = w
    boolean, w = is_boolean(lat)
    if w is not None:
        witnesses["boolean"] = w
    return LatticeProperties(
        simple=simple,
        atomistic=atomistic,
        sectionally_complemented=sc,
        relatively_complemented=rc,
        distributive=dist,
        boolean=boolean,
        witnesses=witnesses,
    )


def is_relatively_complemented_in(f: LatticeMap):
    """Relative complements in the codomain for images of comparable triples."""
    dom, cod = f.domain, f.codomain
    for a in range(dom.n):
        for c in _bits(dom.up[a]):
            for b in _bits(dom.interval(a, c)):
                fa, fb, fc = f(a), f(b), f(c)
                ok = False
                for x in _bits(cod.interval(fa, fc)):
                    if cod.meet(x, fb) == fa and cod.join(x, fb) == fc:
                        ok = True
                        break
                if not ok:
                    return False, (a, b, c)
    return True, None


# ---------------------------------------------------------------------------
# isomorphism search


def _signatures(lat: FiniteLattice) -> list:
    n = lat.n
    base = []
    lower = [0] * n
    upper = [0] * n
    for a, b in lat.covers:
        upper[a] += 1
        lower[b] += 1
    for a in range(n):
        base.append(
            (
                bin(lat.down[a]).count("1"),
                bin(lat.up[a]).count("1"),
                lower[a],
                upper[a],
            )
        )
    # one refinement round: multiset of neighbour signatures
    refined = []
    for a in range(n):
        lows = sorted(base[x] for x, y in lat.covers if y == a)
        highs = sorted(base[y] for x, y in lat.covers if x == a)
        refined.append((base[a], tuple(lows), tuple(highs)))
    return refined


def isomorphisms(a: FiniteLattice, b: FiniteLattice) -> Iterator[LatticeMap]:
    """Yield every isomorphism a -> b (exact backtracking)."""
    if a.n != b.n:
        return
    sig_a = _signatures(a)
    sig_b = _signatures(b)
    if sorted(sig_a) != sorted(sig_b):
        return
    n = a.n
    candidates = [
        [y for y in range(n) if sig_b[y] == sig_a[x]] for x in range(n)
    ]
    order = sorted(range(n), key=lambda x: len(candidates[x]))
    img = [-1] * n
    used = [False] * n

    def extend(pos):
        if pos == n:
            yield LatticeMap(a, b, tuple(img))
            return
        x = order[pos]
        for y in candidates[x]:
            if used[y]:
                continue
            ok = True
            for q in order[:pos]:
                iq = img[q]
                if a.leq(x, q) != b.leq(y, iq) or a.leq(q, x) != b.leq(iq, y):
                    ok = False
                    break
                j = a.join(x, q)
                if img[j] != -1 and img[j] != b.join(y, iq):
                    ok = False
                    break
                m = a.meet(x, q)
                if img[m] != -1 and img[m] != b.meet(y, iq):
                    ok = False
                    break
            if not ok:
                continue
            img[x] = y
            used[y] = True
            yield from extend(pos + 1)
            img[x] = -1
            used[y] = False

    yield from extend(0)


def is_isomorphic(a: FiniteLattice, b: FiniteLattice) -> Optional[LatticeMap]:
    """An isomorphism a -> b if one exists, else None."""
    for f in isomorphisms(a, b):
        return f
    return None
