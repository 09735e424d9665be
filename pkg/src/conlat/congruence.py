"""Congruences, congruence lattices, and the action of Con on homomorphisms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

from .budget import DEFAULT_BUDGET, Budget
from .core import (
    FiniteLattice,
    LatticeMap,
    _bits,
    build_lattice,
)
from .errors import (
    ConstructionUncertified,
    NotACongruence,
    NotAHomomorphism,
    NotAnEmbedding,
)


@dataclass(frozen=True)
class Congruence:
    """A lattice congruence in canonical form.

    ``rep[x]`` is the least element of the class of ``x``; two congruences on
    the same lattice are equal iff their rep arrays are.
    """

    lattice: FiniteLattice
    rep: tuple[int, ...]

    def __hash__(self):
        return hash(self.rep)

    def collapses(self, a: int, b: int) -> bool:
        return self.rep[a] == self.rep[b]

    def classes(self) -> list[list[int]]:
        by_rep: dict[int, list[int]] = {}
        for x, r in enumerate(self.rep):
            by_rep.setdefault(r, []).append(x)
        return [by_rep[r] for r in sorted(by_rep)]

    def refines(self, other: "Congruence") -> bool:
        o = other.rep
        return all(o[x] == o[r] for x, r in enumerate(self.rep))

    @property
    def is_identity(self) -> bool:
        return all(r == x for x, r in enumerate(self.rep))

    @property
    def is_full(self) -> bool:
        return all(r == 0 for r in self.rep)

    def __repr__(self):
        return f"Congruence({self.classes()})"


class _UnionFind:
    __slots__ = ("parent", "classes")

    def __init__(self, n):
        self.parent = list(range(n))
        self.classes = n

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return None
        if rx > ry:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.classes -= 1
        return (rx, ry)

    def canonical(self, n) -> tuple[int, ...]:
        # min-index representative; parents always point to smaller indices
        return tuple(self.find(x) for x in range(n))


def _closure(lat: FiniteLattice, seed_pairs) -> tuple[int, ...]:
    """Least congruence collapsing the seed pairs (fixpoint substitution)."""
    n = lat.n
    uf = _UnionFind(n)
    stack = []
    for a, b in seed_pairs:
        merged = uf.union(a, b)
        if merged:
            stack.append(merged)
    joins = lat.joins
    meets = lat.meets
    while stack:
        if uf.classes == 1:
            return (0,) * n
        x, y = stack.pop()
        jx, jy = joins[x], joins[y]
        mx, my = meets[x], meets[y]
        for z in range(n):
            merged = uf.union(jx[z], jy[z])
            if merged:
                stack.append(merged)
            merged = uf.union(mx[z], my[z])
            if merged:
                stack.append(merged)
            if uf.classes == 1:
                return (0,) * n
    return uf.canonical(n)


def identity_congruence(lat: FiniteLattice) -> Congruence:
    return Congruence(lat, tuple(range(lat.n)))


def full_congruence(lat: FiniteLattice) -> Congruence:
    return Congruence(lat, (0,) * lat.n)


def principal_congruence(lat: FiniteLattice, a: int, b: int) -> Congruence:
    """The least congruence collapsing a and b."""
    return Congruence(lat, _closure(lat, [(a, b)]))


def congruence_from_pairs(lat: FiniteLattice, pairs) -> Congruence:
    return Congruence(lat, _closure(lat, pairs))


def congruence_join(c1: Congruence, c2: Congruence) -> Congruence:
    # the transitive closure of the union is already compatible
    n = c1.lattice.n
    uf = _UnionFind(n)
    for x in range(n):
        uf.union(x, c1.rep[x])
        uf.union(x, c2.rep[x])
    return Congruence(c1.lattice, uf.canonical(n))

def congruence_meet(c1: Congruence, c2: Congruence) -> Congruence:
    n = c1.lattice.n
    first: dict[tuple[int, int], int] = {}
    rep = [0] * n
    for x in range(n):
        key = (c1.rep[x], c2.rep[x])
        rep[x] = first.setdefault(key, x)
    return Congruence(c1.lattice, tuple(rep))


def is_congruence(lat: FiniteLattice, rep: Sequence[int]) -> bool:
    n = lat.n
    if len(rep) != n:
        return False
    for x in range(n):
        if rep[rep[x]] != rep[x] or rep[x] > x:
            return False
    for x in range(n):
        r = rep[x]
        if r == x:
            continue
        for z in range(n):
            if rep[lat.join(x, z)] != rep[lat.join(r, z)]:
                return False
            if rep[lat.meet(x, z)] != rep[lat.meet(r, z)]:
                return False
    return True


@dataclass(frozen=True)
class CongruenceLattice:
    """All congruences of a base lattice, ordered by refinement."""

    base: FiniteLattice
    lattice: FiniteLattice
    table: tuple[Congruence, ...]

    def __hash__(self):
        return hash((self.base, self.lattice))

    def index_of(self, c: Congruence) -> int:
        return self._index[c.rep]

    @property
    def _index(self) -> dict:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {c.rep: i for i, c in enumerate(self.table)}
            self.__dict__["_index_cache"] = cached
        return cached

    @property
    def identity_index(self) -> int:
        return 0

    @property
    def full_index(self) -> int:
        return self.lattice.n - 1


def _cover_principals(lat: FiniteLattice) -> list[Congruence]:
    """Principal congruences of all covering pairs.

    Uses forcing between covering pairs: collapsing a cover collapses the
    covers along maximal chains of each join and meet translate.  The
    principal congruence of a cover corresponds to its reachability set, and
    x and y are congruent iff every cover on a maximal chain between them is
    collapsed.  Much faster than running the generic closure per cover.
    """
    n = lat.n
    covers = lat.covers
    m = len(covers)
    index = {c: i for i, c in enumerate(covers)}
    up_cover = [0] * n
    for a, b in covers:
        up_cover[a] |= 1 << b
    down = lat.down

    def chain_bits(p: int, q: int) -> int:
        # covers along one maximal chain from p up to q
        bits = 0
        x = p
        dq = down[q]
        while x != q:
            step = up_cover[x] & dq
            y = (step & -step).bit_length() - 1
            bits |= 1 << index[(x, y)]
            x = y
        return bits

    adj = [0] * m
    joins = lat.joins
    meets = lat.meets
    for i, (a, b) in enumerate(covers):
        ja, jb = joins[a], joins[b]
        ma, mb = meets[a], meets[b]
        acc = 0
        for z in range(n):
            p, q = ja[z], jb[z]
            if p != q:
                acc |= chain_bits(p, q)
            p, q = ma[z], mb[z]
            if p != q:
                acc |= chain_bits(p, q)
        adj[i] = acc | 1 << i

    # reachability fixpoint over the forcing graph
    reach = list(adj)
    changed = True
    while changed:
        changed = False
        for i in range(m):
            acc = reach[i]
            rest = acc
            while rest:
                low = rest & -rest
                rest ^= low
                acc |= reach[low.bit_length() - 1]
            if acc != reach[i]:
                reach[i] = acc
                changed = True

    out = {}
    for mask in set(reach):
        uf = _UnionFind(n)
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            a, b = covers[low.bit_length() - 1]
            uf.union(a, b)
        rep = uf.canonical(n)
        out[rep] = Congruence(lat, rep)
    return list(out.values())


@lru_cache(maxsize=None)
def all_congruences(lat: FiniteLattice) -> CongruenceLattice:
    """The congruence lattice, via join-closure of cover-principal congruences.

    Principal congruences of covering pairs generate every congruence; the
    partition-enumeration oracle lives in the test suite.
    """
    omega = identity_congruence(lat)
    found = {omega.rep: omega}
    principals = []
    for c in _cover_principals(lat):
        if c.rep not in found:
            found[c.rep] = c
            principals.append(c)

    frontier = list(found.values())
    while frontier:
        new = []
        for c in frontier:
            for p in principals:
                j = congruence_join(c, p)
                if j.rep not in found:
                    found[j.rep] = j
                    new.append(j)
        frontier = new

    cons = sorted(
        found.values(), key=lambda c: (sum(1 for x, r in enumerate(c.rep) if x == r), c.rep)
    )
    # refinement order: cons[i] <= cons[j] iff cons[i] refines cons[j]
    n = len(cons)
    up = [0] * n
    for i, ci in enumerate(cons):
        mask = 0
        for j, cj in enumerate(cons):
            if ci.refines(cj):
                mask |= 1 << j
        up[i] = mask
    lattice, perm = build_lattice(n, up)
    table = [None] * n
    for old, c in enumerate(cons):
        table[perm[old]] = c
    con_lat = CongruenceLattice(base=lat, lattice=lattice, table=tuple(table))

    from .core import is_distributive

    ok, witness = is_distributive(lattice)
    if not ok:
        raise ConstructionUncertified(
            "congruence lattice failed the distributivity check",
            step="all_congruences",
            witness=witness,
        )
    return con_lat


def kernel(f: LatticeMap) -> Congruence:
    """The congruence ker f on the domain."""
    n = f.domain.n
    first: dict[int, int] = {}
    rep = [0] * n
    for x in range(n):
        rep[x] = first.setdefault(f(x), x)
    c = Congruence(f.domain, tuple(rep))
    if not is_congruence(f.domain, c.rep):
        raise NotACongruence("kernel of map is not a congruence")
    return c


def quotient(
    lat: FiniteLattice, theta: Congruence, budget: Budget = DEFAULT_BUDGET
) -> tuple[FiniteLattice, LatticeMap]:
    """The quotient lattice and its canonical surjection."""
    if theta.lattice != lat or not is_congruence(lat, theta.rep):
        raise NotACongruence("not a congruence of this lattice")
    reps = sorted(set(theta.rep))
    pos = {r: i for i, r in enumerate(reps)}
    m = len(reps)
    up = [0] * m
    for i, r in enumerate(reps):
        mask = 0
        for j, s in enumerate(reps):
            # [r] <= [s] iff r v s is congruent to s
            if theta.rep[lat.join(r, s)] == theta.rep[s]:
                mask |= 1 << j
        up[i] = mask
    q, perm = build_lattice(m, up, budget=budget)
    image = tuple(perm[pos[theta.rep[x]]] for x in range(lat.n))
    pi = LatticeMap(lat, q, image)
    return q, pi


# ---------------------------------------------------------------------------
# Con as a functor


@dataclass(frozen=True)
class ConMap:
    """A join- and zero-preserving map from a congruence lattice.

    The target is a plain finite (distributive) lattice; when the map lands
    in another congruence lattice, ``target_con`` carries the back-reference.
    """

    source: CongruenceLattice
    target: FiniteLattice
    image: tuple[int, ...]
    target_con: Optional[CongruenceLattice] = None

    def __post_init__(self):
        src = self.source.lattice
        if len(self.image) != src.n:
            raise NotAHomomorphism("ConMap image length mismatch")
        if self.image[0] != 0:
            raise NotAHomomorphism("ConMap does not preserve zero")
        for i in range(src.n):
            for j in range(i, src.n):
                if (
                    self.image[src.join(i, j)]
                    != self.target.join(self.image[i], self.image[j])
                ):
                    raise NotAHomomorphism(
                        f"ConMap does not preserve the join at ({i}, {j})",
                        witness=(i, j),
                    )

    def __hash__(self):
        return hash((self.source, self.target, self.image))

    def __call__(self, i: int) -> int:
        return self.image[i]

    def apply(self, c: Congruence) -> int:
        return self.image[self.source.index_of(c)]

    @property
    def is_isomorphism(self) -> bool:
        src = self.source.lattice
        if src.n != self.target.n or len(set(self.image)) != src.n:
            return False
        for i in range(src.n):
            for j in range(src.n):
                if src.leq(i, j) != self.target.leq(self.image[i], self.image[j]):
                    return False
        return True

    def compose_con(self, earlier: "ConMap") -> "ConMap":
        """self o earlier, where earlier lands in self's source lattice."""
        if earlier.target != self.source.lattice:
            raise NotAHomomorphism("ConMap composition mismatch")
        return ConMap(
            source=earlier.source,
            target=self.target,
            image=tuple(self.image[x] for x in earlier.image),
            target_con=self.target_con,
        )

    def inverse(self) -> "ConMap":
        if not self.is_isomorphism or self.target_con is None:
            raise NotAnEmbedding("only congruence-lattice isomorphisms invert")
        inv = [0] * self.target.n
        for i, j in enumerate(self.image):
            inv[j] = i
        return ConMap(
            source=self.target_con,
            target=self.source.lattice,
            image=tuple(inv),
            target_con=self.source,
        )


def con_map(f: LatticeMap) -> ConMap:
    """The action of Con on a homomorphism.

    Sends each congruence of the domain to the congruence of the codomain
    generated by the images of its collapsed pairs.
    """
    src = all_congruences(f.domain)
    tgt = all_congruences(f.codomain)
    image = []
    for c in src.table:
        pairs = [(f(x), f(c.rep[x])) for x in range(f.domain.n) if c.rep[x] != x]
        gen = congruence_from_pairs(f.codomain, pairs)
        image.append(tgt.index_of(gen))
    return ConMap(source=src, target=tgt.lattice, image=tuple(image), target_con=tgt)


def identity_con_map(con: CongruenceLattice) -> ConMap:
    return ConMap(
        source=con,
        target=con.lattice,
        image=tuple(range(con.lattice.n)),
        target_con=con,
    )


def separates_zero(c: ConMap) -> bool:
    """True iff only the identity congruence maps to the target's bottom."""
    return all(v != 0 for i, v in enumerate(c.image) if i != 0)


def restrict_congruence(f: LatticeMap, theta: Congruence) -> Congruence:
    """Pull a codomain congruence back along f."""
    n = f.domain.n
    first: dict[int, int] = {}
    rep = [0] * n
    for x in range(n):
        rep[x] = first.setdefault(theta.rep[f(x)], x)
    return Congruence(f.domain, tuple(rep))


def is_congruence_preserving_extension(f: LatticeMap):
    """Whether restriction along f is a bijection Con(codomain) -> Con(domain).

    Returns (flag, witness); the witness is a domain congruence with zero or
    several extensions.
    """
    if not f.is_embedding:
        raise NotAnEmbedding("congruence-preserving extension needs an embedding")
    dom_con = all_congruences(f.domain)
    cod_con = all_congruences(f.codomain)
    counts: dict[tuple[int, ...], int] = {c.rep: 0 for c in dom_con.table}
    for phi in cod_con.table:
        r = restrict_congruence(f, phi).rep
        if r in counts:
            counts[r] += 1
        else:
            raise NotACongruence("restriction left the congruence lattice")
    for c in dom_con.table:
        if counts[c.rep] != 1:
            return False, c
    if cod_con.lattice.n != dom_con.lattice.n:
        return False, None
    return True, None


def meet_irreducible_congruences(lat: FiniteLattice) -> tuple[Congruence, ...]:
    """Congruences with exactly one upper cover (top excluded)."""
    con = all_congruences(lat)
    return tuple(con.table[i] for i in con.lattice.meet_irreducibles)


ConTarget = Union[CongruenceLattice, FiniteLattice]


def as_lattice(target: ConTarget) -> FiniteLattice:
    if isinstance(target, CongruenceLattice):
        return target.lattice
    return target
