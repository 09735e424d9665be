"""Building blocks: partition lattices, embedding searches, amalgams,
sectionally complemented representations, and chopped lattices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .budget import DEFAULT_BUDGET, Budget
from .congruence import (
    CongruenceLattice,
    ConMap,
    all_congruences,
    principal_congruence,
)
from .core import (
    FiniteLattice,
    LatticeMap,
    _bits,
    _lowest,
    _check_ideal,
    boolean_lattice,
    build_lattice,
    from_covers,
    is_atomistic,
    is_boolean,
    is_distributive,
    is_relatively_complemented,
    is_relatively_complemented_in,
    is_sectionally_complemented,
    isomorphisms,
    m3,
)
from .errors import (
    ConstructionUncertified,
    MeetUndefined,
    NotALattice,
    NotAnEmbedding,
    NotAnIdeal,
    NotAnIsomorphism,
    NotDistributive,
    SearchExhausted,
    SizeCapExceeded,
)


# ---------------------------------------------------------------------------
# partition lattices


def _rgs(m: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings, i.e. canonical block labelings."""

    def rec(prefix, top):
        if len(prefix) == m:
            yield tuple(prefix)
            return
        for v in range(top + 2):
            yield from rec(prefix + [v], max(top, v))

    yield from rec([0], 0)


def _blocks_to_rep(blocks: Sequence[int]) -> tuple[int, ...]:
    first: dict[int, int] = {}
    return tuple(first.setdefault(b, i) for i, b in enumerate(blocks))


@lru_cache(maxsize=None)
def _partition_lattice_cached(m: int) -> FiniteLattice:
    parts = sorted(
        (_blocks_to_rep(b) for b in _rgs(m)),
        key=lambda rep: (m - len(set(rep)), rep),
    )
    n = len(parts)
    up = [0] * n
    for i, p in enumerate(parts):
        mask = 0
        for j, q in enumerate(parts):
            # p refines q
            if all(q[p[x]] == q[x] for x in range(m)):
                mask |= 1 << j
        up[i] = mask
    lat, perm = build_lattice(n, up)
    assert all(perm[i] == i for i in range(n))  # key order is the extension
    _certify_partition_lattice(lat, m)
    return lat


def _certify_partition_lattice(lat: FiniteLattice, m: int):
    if not lat.dual_atoms and m >= 2:
        raise ConstructionUncertified(
            "partition lattice lacks a dual atom", step="partition_lattice"
        )
    if m <= 5:
        # full certification is affordable here
        simple = all_congruences(lat).lattice.n == min(lat.n, 2)
        sc, w = is_sectionally_complemented(lat)
        rc, w2 = is_relatively_complemented(lat)
        if not (simple and sc and rc):
            raise ConstructionUncertified(
                "partition lattice failed a structural check",
                step="partition_lattice",
                witness=w or w2,
            )
    else:
        # larger sizes: spot checks that stay polynomial and small
        at, w = is_atomistic(lat)
        if not at:
            raise ConstructionUncertified(
                "partition lattice not atomistic",
                step="partition_lattice",
                witness=w,
            )
        for a in lat.atoms:
            if not principal_congruence(lat, a, 0).is_full:
                raise ConstructionUncertified(
                    "atom congruence not full in partition lattice",
                    step="partition_lattice",
                    witness=a,
                )


def partition_lattice(m: int, budget: Budget = DEFAULT_BUDGET) -> FiniteLattice:
    """The lattice of equivalence relations on an m-element set."""
    if m < 1:
        raise NotALattice("partition lattice needs m >= 1")
    if m > budget.max_partition_size:
        raise SizeCapExceeded(
            f"partition base size {m} exceeds cap {budget.max_partition_size}",
            size=m,
            cap=budget.max_partition_size,
        )
    lat = _partition_lattice_cached(m)
    budget.check_elements(lat.n, "partition lattice")
    return lat


# ---------------------------------------------------------------------------
# embedding search


def embeddings(
    dom: FiniteLattice,
    cod: FiniteLattice,
    pins: Optional[dict] = None,
    budget: Budget = DEFAULT_BUDGET,
) -> Iterator[LatticeMap]:
    """All lattice embeddings dom -> cod respecting the pinned images.

    Elements are assigned in index order and candidate images tried in index
    order, so embeddings stream in lexicographic image order.
    """
    n = dom.n
    pins = pins or {}
    img = [-1] * n
    used = [False] * cod.n

    # pairs whose join lands at x, for join forcing
    forcing: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            j = dom.join(a, b)
            if j != a and j != b:
                forcing[j].append((a, b))

    def candidates(x):
        for a, b in forcing[x]:
            return [cod.join(img[a], img[b])]
        if x in pins:
            return [pins[x]]
        return range(cod.n)

    def consistent(x, c):
        if used[c]:
            return False
        if x in pins and pins[x] != c:
            return False
        for a, b in forcing[x]:
            if cod.join(img[a], img[b]) != c:
                return False
        for q in range(x):
            iq = img[q]
            if dom.leq(q, x) != cod.leq(iq, c):
                return False
            if dom.leq(x, q) != cod.leq(c, iq):
                return False
            if img[dom.meet(q, x)] != cod.meet(iq, c):
                return False
        return True

    def extend(x):
        if x == n:
            yield LatticeMap(dom, cod, tuple(img))
            return
        budget.check_time("embedding search")
        for c in candidates(x):
            if consistent(x, c):
                img[x] = c
                used[c] = True
                yield from extend(x + 1)
                img[x] = -1
                used[c] = False

    yield from extend(0)


def find_embedding(
    dom: FiniteLattice,
    cod: FiniteLattice,
    pins: Optional[dict] = None,
    budget: Budget = DEFAULT_BUDGET,
) -> Optional[LatticeMap]:
    for f in embeddings(dom, cod, pins=pins, budget=budget):
        return f
    return None


# ---------------------------------------------------------------------------
# simple sectionally complemented extensions


def simple_sc_extension(
    lat: FiniteLattice, budget: Budget = DEFAULT_BUDGET
) -> tuple[FiniteLattice, LatticeMap, int]:
    """Embed a lattice, zero-preservingly, into the smallest partition lattice
    that accepts it.  The host is simple, sectionally complemented, and has a
    dual atom; the embedding is relatively complemented in the host."""
    largest = 0
    for m in range(2, budget.max_partition_size + 1):
        host = partition_lattice(m, budget=budget)
        if host.n < lat.n:
            continue
        largest = m
        emb = find_embedding(lat, host, pins={0: 0}, budget=budget)
        if emb is None:
            continue
        ok, w = is_relatively_complemented_in(emb)
        if not ok:
            raise ConstructionUncertified(
                "embedding not relatively complemented in host",
                step="simple_sc_extension",
                witness=w,
            )
        return host, emb, host.dual_atoms[0]
    raise SearchExhausted(
        f"no zero-preserving embedding into partition lattices up to size "
        f"{budget.max_partition_size}",
        largest_tried=largest,
    )


# ---------------------------------------------------------------------------
# sublattices and amalgamation


def sublattice(
    ambient: FiniteLattice, seed: Sequence[int], budget: Budget = DEFAULT_BUDGET
) -> tuple[FiniteLattice, LatticeMap, dict]:
    """The sublattice generated by the seed elements.

    Returns the generated lattice, its inclusion into the ambient lattice,
    and the ambient-index -> sublattice-index dictionary.
    """
    elems = set(seed)
    frontier = list(elems)
    while frontier:
        new = []
        for x in frontier:
            for y in list(elems):
                for z in (ambient.join(x, y), ambient.meet(x, y)):
                    if z not in elems:
                        elems.add(z)
                        new.append(z)
        frontier = new
        budget.check_elements(len(elems), "generated sublattice")
    order = sorted(elems)
    pos = {x: i for i, x in enumerate(order)}
    up = [0] * len(order)
    for i, x in enumerate(order):
        for j, y in enumerate(order):
            if ambient.leq(x, y):
                up[i] |= 1 << j
    lat, perm = build_lattice(len(order), up, budget=budget)
    index = {x: perm[pos[x]] for x in order}
    back = [0] * lat.n
    for x, i in index.items():
        back[i] = x
    inclusion = LatticeMap(lat, ambient, tuple(back))
    return lat, inclusion, index


@dataclass(frozen=True)
class Amalgam:
    """A lattice amalgamating two lattices over a common one, with the ambient
    partition lattice the search landed in."""

    k: FiniteLattice
    a1: LatticeMap
    a2: LatticeMap
    ambient: FiniteLattice
    inclusion: LatticeMap


def amalgamate(
    eta1: LatticeMap, eta2: LatticeMap, budget: Budget = DEFAULT_BUDGET
) -> Amalgam:
    """Joint embedding of the two codomains into a partition lattice agreeing
    on the images of the common domain; the amalgam is the generated
    sublattice.  Both bottoms are pinned to the discrete partition when both
    inputs preserve zero."""
    if eta1.domain != eta2.domain:
        raise NotAnEmbedding("the maps must share their domain")
    if not eta1.is_embedding or not eta2.is_embedding:
        raise NotAnEmbedding("both maps must be embeddings")
    l0, l1, l2 = eta1.domain, eta1.codomain, eta2.codomain
    pin_zero = eta1.preserves_zero and eta2.preserves_zero
    largest = 0
    for m in range(2, budget.max_partition_size + 1):
        host = partition_lattice(m, budget=budget)
        if host.n < max(l1.n, l2.n):
            continue
        largest = m
        pins1 = {0: 0} if pin_zero else None
        for g1 in embeddings(l1, host, pins=pins1, budget=budget):
            pins2 = {eta2(x): g1(eta1(x)) for x in l0.elements()}
            if len(set(pins2.values())) != len(pins2):
                continue
            if pin_zero:
                if pins2.get(0, 0) != 0:
                    continue
                pins2[0] = 0
            g2 = find_embedding(l2, host, pins=pins2, budget=budget)
            if g2 is None:
                continue
            seed = set(g1.image) | set(g2.image)
            k, inc, index = sublattice(host, seed, budget=budget)
            a1 = LatticeMap(l1, k, tuple(index[g1(x)] for x in l1.elements()))
            a2 = LatticeMap(l2, k, tuple(index[g2(x)] for x in l2.elements()))
            for x in l0.elements():
                if a1(eta1(x)) != a2(eta2(x)):
                    raise ConstructionUncertified(
                        "amalgam square does not commute",
                        step="amalgamate",
                        witness=x,
                    )
            return Amalgam(k=k, a1=a1, a2=a2, ambient=host, inclusion=inc)
    raise SearchExhausted(
        "no joint embedding into partition lattices within the cap",
        largest_tried=largest,
    )


# ---------------------------------------------------------------------------
# chopped lattices


@dataclass(frozen=True)
class ChoppedLattice:
    """A bottomed poset with all meets and with joins of bounded pairs.

    ``joins[a][b]`` is -1 when a and b have no common upper bound.
    """

    n: int
    up: tuple[int, ...]
    meets: tuple[tuple[int, ...], ...]
    joins: tuple[tuple[int, ...], ...]

    def __hash__(self):
        return hash((self.n, self.up))

    def leq(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    @property
    def down(self) -> tuple[int, ...]:
        cached = self.__dict__.get("_down")
        if cached is None:
            masks = [0] * self.n
            for a in range(self.n):
                for b in _bits(self.up[a]):
                    masks[b] |= 1 << a
            cached = tuple(masks)
            self.__dict__["_down"] = cached
        return cached

    @property
    def is_lattice(self) -> bool:
        return all(v >= 0 for row in self.joins for v in row)


def chopped_from_order(
    n: int, up: Sequence[int], budget: Budget = DEFAULT_BUDGET
) -> tuple[ChoppedLattice, list[int]]:
    """Canonicalize an order into a chopped lattice, validating total meets."""
    budget.check_elements(n, "chopped lattice")
    from .core import _toposort, NotAPartialOrder

    for a in range(n):
        if not up[a] >> a & 1:
            raise NotAPartialOrder(f"order not reflexive at {a}")
        for b in _bits(up[a]):
            if b != a and up[b] >> a & 1:
                raise NotAPartialOrder(f"order not antisymmetric at ({a}, {b})")
            if up[b] & ~up[a]:
                raise NotAPartialOrder(f"order not transitive at ({a}, {b})")
    order = _toposort(n, up)
    perm = [0] * n
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
    if new_up[0] != (1 << n) - 1:
        raise MeetUndefined("no global bottom element")

    meets = []
    joins = []
    for a in range(n):
        ma = [0] * n
        ja = [0] * n
        for b in range(n):
            db = down[a] & down[b]
            d = db.bit_length() - 1
            if db & ~down[d]:
                raise MeetUndefined(
                    f"elements {a} and {b} have no meet", witness=(a, b)
                )
            ma[b] = d
            ub = new_up[a] & new_up[b]
            if ub:
                c = _lowest(ub)
                if ub & ~new_up[c]:
                    # with total meets, the meet of all upper bounds is least
                    c = _fold_meet(down, ub)
                ja[b] = c
            else:
                ja[b] = -1
        meets.append(tuple(ma))
        joins.append(tuple(ja))
    chopped = ChoppedLattice(
        n=n, up=tuple(new_up), meets=tuple(meets), joins=tuple(joins)
    )
    return chopped, perm


def _fold_meet(down: Sequence[int], ub: int) -> int:
    mask = (1 << len(down)) - 1
    acc = mask
    for u in _bits(ub):
        acc &= down[u]
    d = acc.bit_length() - 1
    if acc & ~down[d] or not ub >> d & 1:
        raise MeetUndefined("bounded pair has no least upper bound")
    return d


def chopped_from_pieces(
    pieces: Sequence[tuple[FiniteLattice, Sequence]],
    budget: Budget = DEFAULT_BUDGET,
) -> tuple[ChoppedLattice, list[tuple[int, ...]]]:
    """Union of lattices identified along shared element names.

    Each piece comes with one hashable name per element; equal names are the
    same chopped element.  Name index 0 of every piece must be the common
    bottom.  The overlap of any two pieces must be an ideal of both with the
    same induced order.  Returns the chopped lattice plus, per piece, the map
    from piece indices to chopped indices.
    """
    bottom_name = pieces[0][1][0]
    names: dict = {bottom_name: 0}
    for lat, nm in pieces:
        if len(nm) != lat.n or nm[0] != bottom_name:
            raise NotAnIsomorphism("piece naming must start at the shared bottom")
        for x in nm:
            names.setdefault(x, len(names))
    n = len(names)
    budget.check_elements(n, "chopped lattice")

    piece_idx = [tuple(names[x] for x in nm) for _, nm in pieces]

    # overlap validation
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            common = set(piece_idx[i]) & set(piece_idx[j])
            for pi, pj in ((i, j), (j, i)):
                lat = pieces[pi][0]
                local = [x for x in range(lat.n) if piece_idx[pi][x] in common]
                _check_ideal(lat, frozenset(local))
            lat_i, lat_j = pieces[i][0], pieces[j][0]
            back_i = {g: x for x, g in enumerate(piece_idx[i])}
            back_j = {g: x for x, g in enumerate(piece_idx[j])}
            for g in common:
                for h in common:
                    if lat_i.leq(back_i[g], back_i[h]) != lat_j.leq(
                        back_j[g], back_j[h]
                    ):
                        raise NotAnIsomorphism(
                            f"piece overlap orders disagree at ({g}, {h})"
                        )

    up = [1 << a for a in range(n)]
    for (lat, _), idx in zip(pieces, piece_idx):
        for x in range(lat.n):
            for y in _bits(lat.up[x]):
                up[idx[x]] |= 1 << idx[y]
    # transitive closure across pieces
    changed = True
    while changed:
        changed = False
        for a in range(n):
            mask = up[a]
            for b in _bits(mask):
                mask |= up[b]
            if mask != up[a]:
                up[a] = mask
                changed = True

    chopped, perm = chopped_from_order(n, up, budget=budget)
    maps = [tuple(perm[g] for g in idx) for idx in piece_idx]
    return chopped, maps


def merge_chopped(
    a: FiniteLattice,
    ideal_a: Sequence[int],
    b: FiniteLattice,
    ideal_b: Sequence[int],
    iso: dict,
    budget: Budget = DEFAULT_BUDGET,
) -> tuple[ChoppedLattice, tuple[int, ...], tuple[int, ...]]:
    """Merge two lattices into a chopped lattice along isomorphic ideals."""
    set_a, set_b = frozenset(ideal_a), frozenset(ideal_b)
    _check_ideal(a, set_a)
    _check_ideal(b, set_b)
    if set(iso) != set_a or set(iso.values()) != set_b or len(iso) != len(set_b):
        raise NotAnIsomorphism("seam map is not a bijection ideal -> ideal")
    for x in set_a:
        for y in set_a:
            if a.leq(x, y) != b.leq(iso[x], iso[y]):
                raise NotAnIsomorphism(
                    f"seam map does not preserve order at ({x}, {y})"
                )
    names_a = [("s", iso[x]) if x in set_a else ("a", x) for x in range(a.n)]
    names_b = [("s", y) if y in set_b else ("b", y) for y in range(b.n)]
    names_a[0] = names_b[0] = ("s", 0)
    chopped, maps = chopped_from_pieces(
        [(a, names_a), (b, names_b)], budget=budget
    )
    return chopped, maps[0], maps[1]


def ideal_lattice_of_chopped(
    c: ChoppedLattice, budget: Budget = DEFAULT_BUDGET
) -> tuple[FiniteLattice, tuple[int, ...]]:
    """All ideals of a chopped lattice ordered by inclusion, plus the
    embedding of the chopped elements as principal ideals."""
    down = c.down

    def closure(mask: int) -> int:
        while True:
            add = 0
            members = list(_bits(mask))
            for i, x in enumerate(members):
                jr = c.joins[x]
                for y in members[i:]:
                    j = jr[y]
                    if j >= 0 and not mask >> j & 1:
                        add |= down[j]
            if not add:
                return mask
            mask |= add

    bottom = down[0]
    seen = {bottom}
    queue = [bottom]
    while queue:
        cur = queue.pop()
        for x in range(c.n):
            if cur >> x & 1:
                continue
            nxt = closure(cur | down[x])
            if nxt not in seen:
                seen.add(nxt)
                budget.check_elements(len(seen), "ideal lattice")
                queue.append(nxt)
    ideals = sorted(seen, key=lambda m: (bin(m).count("1"), m))
    pos = {m: i for i, m in enumerate(ideals)}
    nn = len(ideals)
    up = [0] * nn
    for i, mi in enumerate(ideals):
        for j, mj in enumerate(ideals):
            if mi & ~mj == 0:
                up[i] |= 1 << j
    lat, perm = build_lattice(nn, up, budget=budget)
    emb = tuple(perm[pos[down[x]]] for x in range(c.n))
    return lat, emb


# ---------------------------------------------------------------------------
# sectionally complemented representations


# smallest sectionally complemented lattice whose congruence lattice is a
# 3-element chain: one extra atom (index 3) over a copy of the five-element
# modular lattice, joined to a new top.  collapsing atom 3 is the full
# congruence; collapsing atom 1 is the middle one.
_FORCING_COVERS = ((0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 5), (4, 5))
_FORCER = 3  # collapsing this atom collapses everything
_FORCED = 1  # collapsing this atom is the middle congruence


def forcing_gadget() -> FiniteLattice:
    return from_covers(6, _FORCING_COVERS)


@dataclass(frozen=True)
class Representation:
    """A sectionally complemented lattice realizing a distributive lattice as
    its congruence lattice.

    ``atoms[i]`` is the atom whose principal congruence maps under ``alpha``
    to the i-th join irreducible of ``d``; these atoms generate a boolean
    ideal of ``l``.
    """

    d: FiniteLattice
    l: FiniteLattice
    alpha: ConMap
    atoms: tuple[int, ...]

    @property
    def boolean_ideal_top(self) -> int:
        t = 0
        for a in self.atoms:
            t = self.l.join(t, a)
        return t


def _certified_representation(
    d: FiniteLattice, l: FiniteLattice, atoms: Sequence[int], step: str
) -> Representation:
    """Build alpha from the atom assignment and verify everything."""
    irr = d.join_irreducibles
    if len(atoms) != len(irr):
        raise ConstructionUncertified("atom count mismatch", step=step)
    con = all_congruences(l)
    image = []
    for c in con.table:
        v = 0
        for i, a in enumerate(atoms):
            if c.collapses(a, 0):
                v = d.join(v, irr[i])
        image.append(v)
    alpha = ConMap(source=con, target=d, image=tuple(image))
    if not alpha.is_isomorphism:
        raise ConstructionUncertified(
            "congruence map is not an isomorphism", step=step
        )
    sc, w = is_sectionally_complemented(l)
    if not sc:
        raise ConstructionUncertified(
            "lattice is not sectionally complemented", step=step, witness=w
        )
    for i, a in enumerate(atoms):
        if a not in l.atoms:
            raise ConstructionUncertified(
                "designated element is not an atom", step=step, witness=a
            )
        theta = principal_congruence(l, a, 0)
        if alpha.apply(theta) != irr[i]:
            raise ConstructionUncertified(
                "atom congruence does not hit its join irreducible",
                step=step,
                witness=a,
            )
    # the atoms must generate a boolean ideal
    t = 0
    for a in atoms:
        t = l.join(t, a)
    section = [x for x in range(l.n) if l.leq(x, t)]
    pos = {x: i for i, x in enumerate(section)}
    up = [0] * len(section)
    for i, x in enumerate(section):
        for j, y in enumerate(section):
            if l.leq(x, y):
                up[i] |= 1 << j
    ideal, perm = build_lattice(len(section), up)
    okb, wb = is_boolean(ideal)
    if not okb or ideal.n != 1 << len(atoms):
        raise ConstructionUncertified(
            "atoms do not generate a boolean ideal", step=step, witness=wb
        )
    return Representation(d=d, l=l, alpha=alpha, atoms=tuple(atoms))


def _represent_boolean(d: FiniteLattice) -> Representation:
    k = len(d.atoms)
    l = boolean_lattice(k)
    return _certified_representation(
        d, l, tuple(1 << i for i in range(k)), step="represent_sc:boolean"
    )


def _represent_gadget(d: FiniteLattice, budget: Budget) -> Representation:
    """One private atom per join irreducible, tied through a simple modular
    piece to a shared forcing network with one gadget per covering pair."""
    irr = d.join_irreducibles
    covers_p = [
        (q, p)
        for q in irr
        for p in irr
        if d.lt(q, p)
        and not any(d.lt(q, r) and d.lt(r, p) for r in irr)
    ]
    in_gadget = {p for qp in covers_p for p in qp}

    tie = m3()  # indices: 0, atoms 1 2 3, top 4
    two = from_covers(2, [(0, 1)])
    gadget = forcing_gadget()

    pieces = []
    atom_name = {}
    for p in irr:
        atom_name[p] = ("d", p)
        if p in in_gadget:
            nm = [0, ("a", p), ("d", p), ("c", p), ("t", p)]
            pieces.append((tie, nm))
        else:
            pieces.append((two, [0, ("d", p)]))
    for q, p in covers_p:
        nm = [0] * 6
        nm[_FORCER] = ("a", p)
        nm[_FORCED] = ("a", q)
        for x in range(6):
            if x and nm[x] == 0:
                nm[x] = ("g", q, p, x)
        pieces.append((gadget, nm))

    chopped, maps = chopped_from_pieces(pieces, budget=budget)
    l, emb = ideal_lattice_of_chopped(chopped, budget=budget)
    atoms = []
    for i, p in enumerate(irr):
        local = pieces[i][1].index(("d", p))
        atoms.append(emb[maps[i][local]])
    return _certified_representation(d, l, tuple(atoms), step="represent_sc:gadget")


# Sectionally complemented hosts found offline by exhausting atomistic
# lattices (intersection-closed families over five atoms), written as closed
# atom sets.  They carry certified representations of the two congruence
# lattices below whose minimal hosts beat the forcing-network construction by
# more than an order of magnitude.
_SEED_FAMILIES: tuple[tuple[tuple[int, ...], ...], ...] = (
    # Con is the three-element chain
    ((), (0,), (1,), (2,), (3,), (0, 1), (0, 2), (1, 2, 3), (0, 1, 2, 3)),
    # Con has join irreducibles p < q, p < r
    ((), (0,), (1,), (2,), (3,), (4,), (0, 1), (0, 2), (0, 3), (1, 2),
     (1, 3), (0, 1, 2), (0, 1, 3), (2, 3, 4), (0, 2, 3, 4), (1, 2, 3, 4),
     (0, 1, 2, 3, 4)),
    # Con has join irreducibles p < q plus an isolated r
    ((), (0,), (1,), (2,), (3,), (4,), (0, 1), (0, 2), (0, 3), (0, 4),
     (1, 2), (1, 3), (0, 1, 2), (0, 1, 3), (2, 3, 4), (0, 2, 3, 4),
     (1, 2, 3, 4), (0, 1, 2, 3, 4)),
)


@lru_cache(maxsize=None)
def _seed_hosts() -> tuple[FiniteLattice, ...]:
    hosts = []
    for fam in _SEED_FAMILIES:
        sets = [frozenset(s) for s in fam]
        n = len(sets)
        up = [0] * n
        for i in range(n):
            for j in range(n):
                if sets[i] <= sets[j]:
                    up[i] |= 1 << j
        hosts.append(build_lattice(n, up)[0])
    return tuple(hosts)


def _try_host(d: FiniteLattice, l: FiniteLattice, step: str):
    """A certified representation of d on the host l, or None."""
    irr = d.join_irreducibles
    con = all_congruences(l)
    if con.lattice.n != d.n:
        return None
    for f in isomorphisms(con.lattice, d):
        cand_lists = []
        for p in irr:
            cand = [
                a
                for a in l.atoms
                if f(con.index_of(principal_congruence(l, a, 0))) == p
            ]
            if not cand:
                break
            cand_lists.append(cand)
        if len(cand_lists) != len(irr):
            continue
        for atoms in itertools.product(*cand_lists):
            try:
                return _certified_representation(d, l, atoms, step=step)
            except ConstructionUncertified:
                continue
    return None


def _represent_search(
    d: FiniteLattice, budget: Budget, max_n: int = 9
) -> Representation:
    from .catalog import small_lattices

    for l in _seed_hosts():
        rep = _try_host(d, l, step="represent_sc:seed")
        if rep is not None:
            return rep
    for n in range(1, max_n + 1):
        budget.check_time("representation search")
        for l in small_lattices(n):
            sc, _ = is_sectionally_complemented(l)
            if not sc:
                continue
            rep = _try_host(d, l, step="represent_sc:search")
            if rep is not None:
                return rep
    raise SearchExhausted("no small sectionally complemented representation")


@lru_cache(maxsize=None)
def _represent_sc_cached(d: FiniteLattice) -> Representation:
    ok, w = is_distributive(d)
    if not ok:
        raise NotDistributive(f"distributivity fails at {w}")
    budget = DEFAULT_BUDGET
    okb, _ = is_boolean(d)
    if okb:
        return _represent_boolean(d)
    if len(d.join_irreducibles) <= 3:
        # the seed and catalog search finds far smaller hosts when it applies
        try:
            return _represent_search(d, budget, max_n=8)
        except SearchExhausted:
            pass
    try:
        return _represent_gadget(d, budget)
    except (ConstructionUncertified, MeetUndefined):
        return _represent_search(d, budget)


def represent_sc(d: FiniteLattice, budget: Budget = DEFAULT_BUDGET) -> Representation:
    """A certified sectionally complemented lattice with the given congruence
    lattice, including atoms realizing the join irreducibles."""
    budget.check_elements(1 << len(d.join_irreducibles), "representation")
    return _represent_sc_cached(d)
