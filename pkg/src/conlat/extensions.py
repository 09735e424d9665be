"""Congruence-preserving extensions and extension towers.

The centerpiece is `cp_sc_extension`: every finite lattice embeds, with the
same congruence lattice, into a finite sectionally complemented lattice.  The
host is assembled by gluing a sectionally complemented representation of the
congruence lattice to the rectangular hull of the simple quotients, and every
claimed property is re-checked on the result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .budget import DEFAULT_BUDGET, Budget
from .congruence import (
    ConMap,
    all_congruences,
    con_map,
    identity_con_map,
    is_congruence_preserving_extension,
    quotient,
)
from .constructions import (
    ideal_lattice_of_chopped,
    merge_chopped,
    represent_sc,
    simple_sc_extension,
)
from .core import (
    FiniteLattice,
    LatticeMap,
    identity_map,
    is_atomistic,
    is_boolean,
    is_relatively_complemented,
    is_relatively_complemented_in,
    is_sectionally_complemented,
    product_many,
)
from .errors import ConstructionUncertified, PreconditionFailed
from .pipeline import (
    AmalgamationProblem,
    CheckResult,
    Report,
    solve_general,
)

__all__ = [
    "rectangular_extension",
    "cp_sc_extension",
    "Tower",
    "rc_tower",
    "TowerStep",
    "tower_step",
]


def _encode(factors, coords) -> int:
    v = 0
    for f, c in zip(factors, coords):
        v = v * f.n + c
    return v


def rectangular_extension(
    k: FiniteLattice, budget: Budget = DEFAULT_BUDGET
) -> tuple[FiniteLattice, LatticeMap]:
    """The product of the quotients by the meet-irreducible congruences,
    together with the diagonal embedding."""
    con = all_congruences(k)
    mis = con.lattice.meet_irreducibles
    quots = [quotient(k, con.table[m], budget) for m in mis]
    factors = [q for q, _ in quots]
    r, _ = product_many(factors, budget)
    image = tuple(
        _encode(factors, [pi(x) for _, pi in quots]) for x in range(k.n)
    )
    diag = LatticeMap(domain=k, codomain=r, image=image)
    if k.n > 1 and not diag.is_embedding:
        # the meet-irreducible congruences always separate the elements
        raise ConstructionUncertified(
            "diagonal is not an embedding", step="rectangular_extension"
        )
    return r, diag


def _largest_avoiding(d: FiniteLattice, p: int) -> int:
    """The largest element of the distributive lattice d not above p."""
    m = 0
    for x in range(d.n):
        if not d.leq(p, x):
            m = d.join(m, x)
    if d.leq(p, m):
        raise ConstructionUncertified(
            "no unique maximal element avoiding a join irreducible",
            step="cp_sc_extension",
            witness=p,
        )
    return m


def _certify_cp_sc(k: FiniteLattice, kp: FiniteLattice, emb: LatticeMap) -> None:
    okc, w = is_congruence_preserving_extension(emb)
    if not okc:
        raise ConstructionUncertified(
            "extension is not congruence preserving",
            step="cp_sc_extension",
            witness=w,
        )
    sc, w = is_sectionally_complemented(kp)
    if not sc:
        raise ConstructionUncertified(
            "host is not sectionally complemented",
            step="cp_sc_extension",
            witness=w,
        )
    at, w = is_atomistic(kp)
    if not at:
        raise ConstructionUncertified(
            "host is not atomistic", step="cp_sc_extension", witness=w
        )
    rc, w = is_relatively_complemented_in(emb)
    if not rc:
        raise ConstructionUncertified(
            "image is not relatively complemented in the host",
            step="cp_sc_extension",
            witness=w,
        )


def _cp_sc_attempt(
    k: FiniteLattice,
    rep,
    pairing: tuple[int, ...],
    budget: Budget,
) -> tuple[FiniteLattice, LatticeMap]:
    """One gluing attempt with a fixed pairing of the join irreducibles of
    Con k to its meet-irreducible congruences."""
    con = all_congruences(k)
    factors = []
    coord_maps = []
    seam_atoms = []
    for m in pairing:
        q, pi = quotient(k, con.table[m], budget)
        host, e, _ = simple_sc_extension(q, budget)
        factors.append(host)
        coord_maps.append(lambda x, e=e, pi=pi: e(pi(x)))
        seam_atoms.append(host.atoms[0])
    rhat, _ = product_many(factors, budget)
    remb = LatticeMap(
        domain=k,
        codomain=rhat,
        image=tuple(
            _encode(factors, [c(x) for c in coord_maps]) for x in range(k.n)
        ),
    )
    if not remb.is_embedding:
        raise ConstructionUncertified(
            "rectangular map is not an embedding", step="cp_sc_extension"
        )

    # identify the boolean ideal of atoms in the representation with the
    # ideal of the chosen coordinate atoms in the rectangular hull
    nirr = len(rep.atoms)
    iso = {}
    for bits in range(1 << nirr):
        x = 0
        for i in range(nirr):
            if (bits >> i) & 1:
                x = rep.l.join(x, rep.atoms[i])
        y = _encode(
            factors,
            [seam_atoms[i] if (bits >> i) & 1 else 0 for i in range(nirr)],
        )
        iso[x] = y
    chopped, _, map_b = merge_chopped(
        rep.l, list(iso), rhat, list(iso.values()), iso, budget
    )
    kp, idl = ideal_lattice_of_chopped(chopped, budget)
    emb = LatticeMap(
        domain=k,
        codomain=kp,
        image=tuple(idl[map_b[remb(x)]] for x in range(k.n)),
    )
    _certify_cp_sc(k, kp, emb)
    return kp, emb


def cp_sc_extension(
    k: FiniteLattice, budget: Budget = DEFAULT_BUDGET
) -> tuple[FiniteLattice, LatticeMap]:
    """A congruence-preserving embedding into a finite sectionally
    complemented, atomistic lattice."""
    con = all_congruences(k)
    sc, _ = is_sectionally_complemented(k)
    if sc and con.lattice.n <= 2:
        return k, identity_map(k)
    d = con.lattice
    rep = represent_sc(d, budget)
    irr = d.join_irreducibles
    canonical = tuple(_largest_avoiding(d, p) for p in irr)
    last = None
    tried = set()
    for perm in itertools.permutations(canonical):
        if perm in tried:
            continue
        tried.add(perm)
        budget.check_time("congruence-preserving extension")
        try:
            return _cp_sc_attempt(k, rep, perm, budget)
        except ConstructionUncertified as exc:
            last = exc
    raise last if last is not None else ConstructionUncertified(
        "no pairing certified", step="cp_sc_extension"
    )


@dataclass(frozen=True)
class Tower:
    stages: tuple[FiniteLattice, ...]
    maps: tuple[LatticeMap, ...]
    stabilized: bool


def rc_tower(
    k: FiniteLattice, depth: int, budget: Budget = DEFAULT_BUDGET
) -> Tower:
    """Iterate `cp_sc_extension`, stopping once a stage is relatively
    complemented.  A relatively complemented stage must have a boolean
    congruence lattice; that invariant is asserted."""
    stages = [k]
    maps = []
    stabilized = False
    cur = k
    for _ in range(depth):
        rc, _ = is_relatively_complemented(cur)
        if rc:
            okb, w = is_boolean(all_congruences(cur).lattice)
            if not okb:
                raise ConstructionUncertified(
                    "relatively complemented stage with non-boolean "
                    "congruence lattice",
                    step="rc_tower",
                    witness=w,
                )
            stages.append(cur)
            maps.append(identity_map(cur))
            stabilized = True
            continue
        cur, emb = cp_sc_extension(cur, budget)
        stages.append(cur)
        maps.append(emb)
    return Tower(stages=tuple(stages), maps=tuple(maps), stabilized=stabilized)


@dataclass(frozen=True)
class TowerStep:
    l_next: FiniteLattice
    f: LatticeMap
    u_next: LatticeMap
    alpha: ConMap
    certificate: Report


def tower_step(
    u: LatticeMap, e: LatticeMap, budget: Budget = DEFAULT_BUDGET
) -> TowerStep:
    """Extend a congruence-preserving embedding u: K -> L along an
    embedding e: K -> K' to a congruence-preserving u': K' -> L' with a
    commuting square f: L -> L'."""
    if u.domain != e.domain:
        raise PreconditionFailed("the two maps must share their domain")
    if not u.is_embedding or not e.is_embedding:
        raise PreconditionFailed("both maps must be embeddings")
    okc, w = is_congruence_preserving_extension(u)
    if not okc:
        raise PreconditionFailed(
            f"base map is not congruence preserving (witness {w})"
        )
    cmu = con_map(u)
    if not cmu.is_isomorphism:
        raise PreconditionFailed("Con of the base map is not an isomorphism")
    cme = con_map(e)
    con_next = all_congruences(e.codomain)
    psi1 = cme.compose_con(cmu.inverse())
    psi2 = identity_con_map(con_next)
    problem = AmalgamationProblem(
        l0=u.domain,
        l1=u.codomain,
        l2=e.codomain,
        eta1=u,
        eta2=e,
        d=con_next.lattice,
        psi1=psi1,
        psi2=psi2,
        zero_mode=u.preserves_zero and e.preserves_zero,
    )
    sol = solve_general(problem, budget)
    okn, wn = is_congruence_preserving_extension(sol.phi2)
    checks = list(sol.certificate.checks) + [
        CheckResult("next_map_congruence_preserving", okn, wn),
        CheckResult("square_map_embedding", sol.phi1.is_embedding),
    ]
    report = Report(checks=tuple(checks))
    if not report.all_passed:
        bad = [c.name for c in report.checks if not c.passed]
        raise ConstructionUncertified(
            f"tower step checks failed: {bad}", step="tower_step"
        )
    return TowerStep(
        l_next=sol.l,
        f=sol.phi1,
        u_next=sol.phi2,
        alpha=sol.alpha,
        certificate=report,
    )
