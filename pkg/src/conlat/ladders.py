"""Direct systems of amalgamations indexed by a 2-ladder.

A k-ladder is a poset in which every element has at most k lower covers.
`run_ladder_system` walks such an index poset in a linear extension and
builds, by repeated amalgamation, a compatible system of lattices L_i whose
congruence lattices track a growing chain of join-subsemilattices S_i of a
fixed distributive lattice S.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .birkhoff import Poset
from .budget import DEFAULT_BUDGET, Budget
from .congruence import (
    ConMap,
    all_congruences,
    con_map,
    is_congruence_preserving_extension,
)
from .core import (
    FiniteLattice,
    JoinZeroMap,
    LatticeMap,
    build_lattice,
    chain,
    identity_map,
    is_relatively_complemented_in,
)
from .errors import ConstructionUncertified, IncoherentPresentation
from .extensions import cp_sc_extension
from .pipeline import AmalgamationProblem, CheckResult, Report, solve_general

__all__ = [
    "is_k_ladder",
    "build_2_ladder",
    "DirectSystem",
    "run_ladder_system",
    "verify_direct_system",
]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _down_masks(p: Poset) -> list[int]:
    down = [0] * p.n
    for a in range(p.n):
        for b in _bits(p.up[a]):
            down[b] |= 1 << a
    return down


def is_k_ladder(p: Poset, k: int):
    """Whether every element has at most k lower covers.

    Returns (flag, witness); the witness is an offending element.
    """
    for a, covs in enumerate(_covers_table(p)):
        if len(covs) > k:
            return False, a
    return True, None


def _covers_table(p: Poset) -> list[list[int]]:
    down = _down_masks(p)
    table = []
    for a in range(p.n):
        strict = down[a] & ~(1 << a)
        covs = [
            b
            for b in _bits(strict)
            if not any(c != b and p.leq(b, c) for c in _bits(strict) if c != a)
        ]
        table.append(covs)
    return table


def build_2_ladder(steps: int) -> Poset:
    """A finite 2-ladder: a grid of `steps` + 1 chains, each chain attached
    elementwise to the previous one.  With zero steps this is a plain chain."""
    rows = steps + 2
    cols = steps + 1
    n = rows * cols

    def idx(r: int, c: int) -> int:
        return c * rows + r

    pairs = []
    for c in range(cols):
        for r in range(rows - 1):
            pairs.append((idx(r, c), idx(r + 1, c)))
        if c:
            for r in range(rows):
                pairs.append((idx(r, c - 1), idx(r, c)))
    return Poset.from_pairs(n, pairs)


def _linear_extension(p: Poset) -> list[int]:
    down = _down_masks(p)
    return sorted(range(p.n), key=lambda a: (bin(down[a]).count("1"), a))


def _poset_meet(p: Poset, a: int, b: int):
    down = _down_masks(p)
    common = down[a] & down[b]
    if not common:
        return None
    best = None
    for c in _bits(common):
        if all(p.leq(x, c) for x in _bits(common)):
            best = c
    return best


@dataclass
class DirectSystem:
    """The data accumulated while running a ladder-indexed system."""

    index: Poset
    lattices: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)  # (i, j) -> LatticeMap, i <= j
    targets: dict = field(default_factory=dict)  # i -> S_i as a lattice
    target_elems: dict = field(default_factory=dict)  # i -> ambient elements
    target_maps: dict = field(default_factory=dict)  # (i, j) -> JoinZeroMap
    epsilons: dict = field(default_factory=dict)  # i -> ConMap onto S_i


def _stage_lattice(s: FiniteLattice, elems) -> tuple[FiniteLattice, list[int]]:
    """The join-subsemilattice as a lattice of its own, with the element
    list in the new index order."""
    elems = sorted(set(elems))
    pos = {x: i for i, x in enumerate(elems)}
    n = len(elems)
    up = [0] * n
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            if s.leq(x, y):
                up[i] |= 1 << j
    lat, perm = build_lattice(n, up)
    ordered = [0] * n
    for old, new in enumerate(perm):
        ordered[new] = elems[old]
    return lat, ordered


def _validate_stages(index: Poset, s: FiniteLattice, stages: dict) -> None:
    ok, w = is_k_ladder(index, 2)
    if not ok:
        raise IncoherentPresentation(f"index poset is not a 2-ladder at {w}")
    down = _down_masks(index)
    bottoms = [a for a in range(index.n) if down[a] == 1 << a]
    if len(bottoms) != 1:
        raise IncoherentPresentation("index poset needs a unique least element")
    if set(stages) != set(range(index.n)):
        raise IncoherentPresentation("one stage per index element is required")
    for i, elems in stages.items():
        es = set(elems)
        if 0 not in es:
            raise IncoherentPresentation(f"stage {i} misses the bottom of S")
        for x in es:
            for y in es:
                if s.join(x, y) not in es:
                    raise IncoherentPresentation(
                        f"stage {i} is not join closed at ({x}, {y})"
                    )
    if set(stages[bottoms[0]]) != {0}:
        raise IncoherentPresentation("the bottom stage must be trivial")
    for i in range(index.n):
        for j in range(index.n):
            if index.leq(i, j) and not set(stages[i]) <= set(stages[j]):
                raise IncoherentPresentation(
                    f"stages do not grow along {i} <= {j}"
                )
    for a, covs in enumerate(_covers_table(index)):
        if len(covs) == 2 and _poset_meet(index, *covs) is None:
            raise IncoherentPresentation(
                f"lower covers of {a} have no meet in the index poset"
            )


def _compose_target(phi: JoinZeroMap, eps: ConMap) -> ConMap:
    return ConMap(
        source=eps.source,
        target=phi.codomain,
        image=tuple(phi(x) for x in eps.image),
    )


def _apply_condition_e(sys_lat, g1, g2, eps, budget):
    """Post-compose with a congruence-preserving sectionally complemented
    extension until both structure maps are relatively complemented in the
    ambient lattice (two rounds at most)."""
    for _ in range(2):
        ok1, _ = is_relatively_complemented_in(g1)
        ok2, _ = is_relatively_complemented_in(g2)
        if ok1 and ok2:
            break
        bigger, emb = cp_sc_extension(sys_lat, budget)
        if emb.domain.n == emb.codomain.n:
            break
        cm = con_map(emb)
        eps = eps.compose_con(cm.inverse())
        g1 = emb.compose(g1)
        g2 = emb.compose(g2)
        sys_lat = bigger
    return sys_lat, g1, g2, eps


def run_ladder_system(
    index: Poset,
    s: FiniteLattice,
    stages: dict,
    budget: Budget = DEFAULT_BUDGET,
) -> tuple[DirectSystem, Report]:
    """Build the direct system of lattices over a 2-ladder index poset.

    `stages` assigns to each index element the elements of its
    join-subsemilattice of s; the stages must contain 0, be join closed,
    grow along the order, and start trivial.
    """
    _validate_stages(index, s, stages)
    sys = DirectSystem(index=index)
    for i in range(index.n):
        lat, elems = _stage_lattice(s, stages[i])
        sys.targets[i] = lat
        sys.target_elems[i] = elems
    for i in range(index.n):
        for j in range(index.n):
            if index.leq(i, j):
                pos = {x: a for a, x in enumerate(sys.target_elems[j])}
                sys.target_maps[(i, j)] = JoinZeroMap(
                    domain=sys.targets[i],
                    codomain=sys.targets[j],
                    image=tuple(pos[x] for x in sys.target_elems[i]),
                )

    covers = _covers_table(index)
    for i in _linear_extension(index):
        budget.check_time("ladder system")
        lows = covers[i]
        if not lows:
            lat = chain(1)
            sys.lattices[i] = lat
            sys.maps[(i, i)] = identity_map(lat)
            sys.epsilons[i] = ConMap(
                source=all_congruences(lat), target=sys.targets[i], image=(0,)
            )
            continue
        if len(lows) == 1:
            base = i1 = i2 = lows[0]
        else:
            i1, i2 = lows
            base = _poset_meet(index, i1, i2)
        eta1 = sys.maps[(base, i1)]
        eta2 = sys.maps[(base, i2)]
        psi1 = _compose_target(sys.target_maps[(i1, i)], sys.epsilons[i1])
        psi2 = _compose_target(sys.target_maps[(i2, i)], sys.epsilons[i2])
        problem = AmalgamationProblem(
            l0=sys.lattices[base],
            l1=sys.lattices[i1],
            l2=sys.lattices[i2],
            eta1=eta1,
            eta2=eta2,
            d=sys.targets[i],
            psi1=psi1,
            psi2=psi2,
            zero_mode=True,
        )
        sol = solve_general(problem, budget)
        lat, g1, g2, eps = _apply_condition_e(
            sol.l, sol.phi1, sol.phi2, sol.alpha, budget
        )
        sys.lattices[i] = lat
        sys.epsilons[i] = eps
        sys.maps[(i, i)] = identity_map(lat)
        routes = {}
        routes[i1] = g1
        if len(lows) == 2:
            routes[i2] = g2
        for j in range(index.n):
            if j == i or not index.leq(j, i):
                continue
            candidates = []
            for c, g in routes.items():
                if index.leq(j, c):
                    candidates.append(g.compose(sys.maps[(j, c)]))
            if not candidates:
                raise IncoherentPresentation(
                    f"no route from {j} to {i} through a lower cover"
                )
            for other in candidates[1:]:
                if other.image != candidates[0].image:
                    raise ConstructionUncertified(
                        "routes through the two lower covers disagree",
                        step="run_ladder_system",
                        witness=(j, i),
                    )
            sys.maps[(j, i)] = candidates[0]
    return sys, verify_direct_system(sys)


def verify_direct_system(sys: DirectSystem) -> Report:
    """Recheck the direct-system laws and the congruence bookkeeping."""
    index = sys.index
    pairs = [
        (i, j)
        for i in range(index.n)
        for j in range(index.n)
        if index.leq(i, j)
    ]
    checks = []

    w = next((i for i in range(index.n)
              if sys.maps[(i, i)].image != tuple(range(sys.lattices[i].n))),
             None)
    checks.append(CheckResult("identity_maps", w is None, w))

    w = None
    for i, j in pairs:
        for k in range(index.n):
            if index.leq(j, k):
                lhs = sys.maps[(j, k)].compose(sys.maps[(i, j)])
                if lhs.image != sys.maps[(i, k)].image:
                    w = (i, j, k)
                    break
        if w:
            break
    checks.append(CheckResult("composition", w is None, w))

    w = next(
        (
            (i, j)
            for i, j in pairs
            if not sys.maps[(i, j)].is_embedding
            or not sys.maps[(i, j)].preserves_zero
        ),
        None,
    )
    checks.append(CheckResult("zero_preserving_embeddings", w is None, w))

    w = next(
        (i for i in range(index.n) if not sys.epsilons[i].is_isomorphism),
        None,
    )
    checks.append(CheckResult("epsilon_isomorphisms", w is None, w))

    w = None
    for i, j in pairs:
        lhs = sys.epsilons[j].compose_con(con_map(sys.maps[(i, j)]))
        rhs = _compose_target(sys.target_maps[(i, j)], sys.epsilons[i])
        if lhs.image != rhs.image:
            w = (i, j)
            break
    checks.append(CheckResult("congruence_naturality", w is None, w))

    w = next(
        (
            (i, j)
            for i, j in pairs
            if i != j and not is_relatively_complemented_in(sys.maps[(i, j)])[0]
        ),
        None,
    )
    checks.append(CheckResult("relative_complementation", w is None, w))

    down = _down_masks(index)
    tops = [a for a in range(index.n) if down[a].bit_count() == index.n]
    if tops:
        t = tops[0]
        ok = sys.epsilons[t].is_isomorphism and (
            all_congruences(sys.lattices[t]).lattice.n == sys.targets[t].n
        )
        checks.append(CheckResult("terminal_congruence_lattice", ok, t))
    return Report(checks=tuple(checks))
