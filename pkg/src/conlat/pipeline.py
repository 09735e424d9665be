"""Amalgamation over a prescribed distributive congruence lattice.

Given homomorphisms eta_i: L0 -> L_i and join-zero maps psi_i: Con L_i -> D
with psi1 o Con eta1 = psi2 o Con eta2, produce a finite lattice L, maps
phi_i: L_i -> L with phi1 o eta1 = phi2 o eta2, and an isomorphism
alpha: Con L -> D with alpha o Con phi_i = psi_i.  Every solution carries a
recomputed certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .birkhoff import boolean_extension
from .budget import DEFAULT_BUDGET, Budget
from .congruence import (
    ConMap,
    all_congruences,
    con_map,
    congruence_join,
    identity_congruence,
    principal_congruence,
    quotient,
    restrict_congruence,
)
from .constructions import amalgamate, partition_lattice, represent_sc
from .core import (
    FiniteLattice,
    LatticeMap,
    _bits,
    chain,
    glue,
    interval_sublattice,
    is_boolean,
    is_distributive,
    product_many,
)
from .errors import (
    ConstructionUncertified,
    GluingSeamMismatch,
    IncoherentProblem,
    NotDistributive,
)


@dataclass(frozen=True)
class AmalgamationProblem:
    """Inputs of the amalgamation: the hypotheses are checked eagerly."""

    l0: FiniteLattice
    l1: FiniteLattice
    l2: FiniteLattice
    eta1: LatticeMap
    eta2: LatticeMap
    d: FiniteLattice
    psi1: ConMap
    psi2: ConMap
    zero_mode: bool = False

    def __post_init__(self):
        if (
            self.eta1.domain != self.l0
            or self.eta2.domain != self.l0
            or self.eta1.codomain != self.l1
            or self.eta2.codomain != self.l2
        ):
            raise IncoherentProblem("eta maps do not fit the lattices")
        ok, w = is_distributive(self.d)
        if not ok:
            raise NotDistributive(f"target lattice not distributive at {w}")
        if self.psi1.target != self.d or self.psi2.target != self.d:
            raise IncoherentProblem("psi maps do not land in the target")
        if (
            self.psi1.source.base != self.l1
            or self.psi2.source.base != self.l2
        ):
            raise IncoherentProblem("psi maps do not start at the right lattices")
        c1 = self.psi1.compose_con(con_map(self.eta1))
        c2 = self.psi2.compose_con(con_map(self.eta2))
        if c1.image != c2.image:
            raise IncoherentProblem(
                "psi1 o Con eta1 differs from psi2 o Con eta2"
            )


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: object = None


@dataclass(frozen=True)
class Report:
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "witness": repr(c.witness)}
                for c in self.checks
            ],
        }


@dataclass(frozen=True)
class AmalgamationSolution:
    l: FiniteLattice
    phi1: LatticeMap
    phi2: LatticeMap
    alpha: ConMap
    certificate: Report
    # target-atom-aligned distinguished elements, when the construction
    # produces them (boolean case and the general gluing)
    dual_atoms: Optional[tuple[int, ...]] = None
    details: dict = field(default_factory=dict, compare=False)


def verify_solution(p: AmalgamationProblem, s: AmalgamationSolution) -> Report:
    """Independent recheck of every claimed property."""
    checks = []

    w = next(
        (x for x in p.l0.elements() if s.phi1(p.eta1(x)) != s.phi2(p.eta2(x))),
        None,
    )
    checks.append(CheckResult("commuting_square", w is None, w))

    checks.append(
        CheckResult("alpha_isomorphism", s.alpha.is_isomorphism, None)
    )

    for name, phi, psi in (
        ("alpha_con_phi1_is_psi1", s.phi1, p.psi1),
        ("alpha_con_phi2_is_psi2", s.phi2, p.psi2),
    ):
        got = s.alpha.compose_con(con_map(phi))
        w = next(
            (i for i in range(len(psi.image)) if got.image[i] != psi.image[i]),
            None,
        )
        checks.append(CheckResult(name, w is None, w))

    if p.zero_mode and p.eta1.preserves_zero and p.eta2.preserves_zero:
        ok = s.phi1.preserves_zero and s.phi2.preserves_zero
        checks.append(CheckResult("zero_preservation", ok, None))

    return Report(tuple(checks))


def _finish(p, l, phi1, phi2, alpha, dual_atoms=None, details=None):
    sol = AmalgamationSolution(
        l=l,
        phi1=phi1,
        phi2=phi2,
        alpha=alpha,
        certificate=Report(()),
        dual_atoms=dual_atoms,
        details=details or {},
    )
    report = verify_solution(p, sol)
    if not report.all_passed:
        bad = [c for c in report.checks if not c.passed]
        raise ConstructionUncertified(
            f"solution failed verification: {bad}", step="pipeline"
        )
    return AmalgamationSolution(
        l=l,
        phi1=phi1,
        phi2=phi2,
        alpha=alpha,
        certificate=report,
        dual_atoms=dual_atoms,
        details=details or {},
    )


# ---------------------------------------------------------------------------
# target = the 2-element chain


def solve_two(
    p: AmalgamationProblem, budget: Budget = DEFAULT_BUDGET
) -> AmalgamationSolution:
    """Collapse everything the psi maps kill, amalgamate the quotients, and
    land in a partition lattice, which is simple and has a dual atom."""
    if p.d.n != 2:
        raise IncoherentProblem("solve_two needs the 2-element chain target")

    thetas = []
    pis = []
    quots = []
    for li, psi in ((p.l1, p.psi1), (p.l2, p.psi2)):
        con = all_congruences(li)
        theta = identity_congruence(li)
        for i, c in enumerate(con.table):
            if psi.image[i] == 0:
                theta = congruence_join(theta, c)
        q, pi = quotient(li, theta, budget=budget)
        thetas.append(theta)
        pis.append(pi)
        quots.append(q)

    r1 = restrict_congruence(p.eta1, thetas[0])
    r2 = restrict_congruence(p.eta2, thetas[1])
    if r1.rep != r2.rep:
        raise IncoherentProblem(
            "the collapsed congruences restrict differently to the base"
        )
    q0, pi0 = quotient(p.l0, r1, budget=budget)
    etap1 = LatticeMap(
        q0, quots[0], _induced_image(q0, pi0, pis[0], p.eta1)
    )
    etap2 = LatticeMap(
        q0, quots[1], _induced_image(q0, pi0, pis[1], p.eta2)
    )

    am = amalgamate(etap1, etap2, budget=budget)
    host = am.ambient
    phi1 = am.inclusion.compose(am.a1).compose(pis[0])
    phi2 = am.inclusion.compose(am.a2).compose(pis[1])

    con_host = all_congruences(host)
    if con_host.lattice.n != 2:
        raise ConstructionUncertified(
            "host partition lattice is not simple", step="solve_two"
        )
    alpha = ConMap(source=con_host, target=p.d, image=(0, 1))

    return _finish(
        p,
        host,
        phi1,
        phi2,
        alpha,
        dual_atoms=(host.dual_atoms[0],),
        details={"amalgam": am, "pis": tuple(pis), "thetas": tuple(thetas)},
    )


def _induced_image(q0, pi0, pi, eta):
    image = [None] * q0.n
    for x in eta.domain.elements():
        image[pi0(x)] = pi(eta(x))
    if any(v is None for v in image):
        raise IncoherentProblem("quotient surjection missed a class")
    return tuple(image)


# ---------------------------------------------------------------------------
# target boolean


def solve_boolean(
    p: AmalgamationProblem, budget: Budget = DEFAULT_BUDGET
) -> AmalgamationSolution:
    """One two-element subproblem per atom of the target; the solution is the
    product, with one dual atom per target atom."""
    okb, w = is_boolean(p.d)
    if not okb:
        raise IncoherentProblem(f"target is not boolean (witness {w})")
    atoms = p.d.atoms
    two = chain(2)

    factors = []
    factor_phis = []
    factor_duals = []
    for a in atoms:
        beta = tuple(1 if p.d.leq(a, x) else 0 for x in range(p.d.n))
        sub = AmalgamationProblem(
            l0=p.l0,
            l1=p.l1,
            l2=p.l2,
            eta1=p.eta1,
            eta2=p.eta2,
            d=two,
            psi1=ConMap(p.psi1.source, two, tuple(beta[v] for v in p.psi1.image)),
            psi2=ConMap(p.psi2.source, two, tuple(beta[v] for v in p.psi2.image)),
            zero_mode=p.zero_mode,
        )
        sol = solve_two(sub, budget=budget)
        factors.append(sol.l)
        factor_phis.append((sol.phi1, sol.phi2))
        factor_duals.append(sol.dual_atoms[0])

    if not factors:
        lat1 = chain(1)
        alpha = ConMap(all_congruences(lat1), p.d, (0,))
        cphi = LatticeMap(p.l1, lat1, (0,) * p.l1.n)
        return _finish(p, lat1, cphi, LatticeMap(p.l2, lat1, (0,) * p.l2.n), alpha)

    l, projections = product_many(factors, budget=budget)

    def tuple_map(src, idx):
        image = []
        for x in src.elements():
            v = 0
            for i, f in enumerate(factors):
                v = v * f.n + factor_phis[i][idx](x)
            image.append(v)
        return LatticeMap(src, l, tuple(image))

    phi1 = tuple_map(p.l1, 0)
    phi2 = tuple_map(p.l2, 1)

    con_l = all_congruences(l)
    proj_cons = [con_map(pr) for pr in projections]
    image = []
    for i in range(con_l.lattice.n):
        v = 0
        for k, a in enumerate(atoms):
            # factor congruence lattices are 2-element: nonzero means full
            if proj_cons[k].image[i] != 0:
                v = p.d.join(v, a)
        image.append(v)
    alpha = ConMap(source=con_l, target=p.d, image=tuple(image))

    # distinguished dual atoms: the factor dual atom at its own coordinate,
    # the top everywhere else
    dual_atoms = []
    for k in range(len(atoms)):
        v = 0
        for i, f in enumerate(factors):
            v = v * f.n + (factor_duals[i] if i == k else f.n - 1)
        dual_atoms.append(v)

    _certify_boolean_addition(p.d, atoms, l, alpha, dual_atoms)
    return _finish(
        p,
        l,
        phi1,
        phi2,
        alpha,
        dual_atoms=tuple(dual_atoms),
        details={"factors": tuple(factors)},
    )


def _certify_boolean_addition(d, atoms, l, alpha, dual_atoms):
    for a, da in zip(atoms, dual_atoms):
        theta = principal_congruence(l, da, l.top)
        if alpha.apply(theta) != a:
            raise ConstructionUncertified(
                "dual atom congruence does not match its target atom",
                step="solve_boolean",
                witness=da,
            )
    h = l.top
    for da in dual_atoms:
        h = l.meet(h, da)
    filt, elems = interval_sublattice(l, h, l.top)
    okb, wb = is_boolean(filt)
    if not okb or filt.n != 1 << len(atoms):
        raise ConstructionUncertified(
            "distinguished elements do not generate a boolean dual ideal",
            step="solve_boolean",
            witness=wb,
        )
    if set(dual_atoms) != {elems[x] for x in filt.dual_atoms}:
        raise ConstructionUncertified(
            "dual ideal coatoms differ from the distinguished elements",
            step="solve_boolean",
        )


# ---------------------------------------------------------------------------
# general distributive target


def solve_general(
    p: AmalgamationProblem, budget: Budget = DEFAULT_BUDGET
) -> AmalgamationSolution:
    """Boolean case over the powerset of the join irreducibles, then a gluing
    with a sectionally complemented realization of the target."""
    okb, _ = is_boolean(p.d)
    if okb:
        return solve_boolean(p, budget=budget)

    be = boolean_extension(p.d, budget=budget)
    b = be.boolean
    lift = AmalgamationProblem(
        l0=p.l0,
        l1=p.l1,
        l2=p.l2,
        eta1=p.eta1,
        eta2=p.eta2,
        d=b,
        psi1=ConMap(
            p.psi1.source, b, tuple(be.eta(v) for v in p.psi1.image)
        ),
        psi2=ConMap(
            p.psi2.source, b, tuple(be.eta(v) for v in p.psi2.image)
        ),
        zero_mode=p.zero_mode,
    )
    sol0 = solve_boolean(lift, budget=budget)
    k0 = sol0.l
    alpha0 = sol0.alpha
    dprimes = sol0.dual_atoms  # aligned with atoms of b, i.e. with J(d)

    rep = represent_sc(p.d, budget=budget)
    k1 = rep.l
    s = rep.boolean_ideal_top
    k = len(rep.atoms)
    if len(dprimes) != k:
        raise GluingSeamMismatch(
            "irreducible counts of the boolean stage and the representation differ"
        )

    # ideal of the representation: below the join of its atoms; its dual
    # atoms are complements of the atoms within that boolean ideal
    d_atoms_i = []
    for i in range(k):
        v = 0
        for j, t in enumerate(rep.atoms):
            if j != i:
                v = k1.join(v, t)
        d_atoms_i.append(v)

    # seam: the boolean filter of k0 over the meet of the d'_q, matched to the
    # boolean ideal of k1 below s
    h = k0.top
    for da in dprimes:
        h = k0.meet(h, da)
    filter_elems = k0.filter(h)
    ideal_elems = k1.ideal(s)
    if len(filter_elems) != 1 << k or len(ideal_elems) != 1 << k:
        raise GluingSeamMismatch("seam pieces are not boolean of matching rank")

    iso = {}
    for subset in range(1 << k):
        x = k0.top
        y = s
        for i in range(k):
            if subset >> i & 1:
                x = k0.meet(x, dprimes[i])
                y = k1.meet(y, d_atoms_i[i])
        iso[x] = y
    if len(iso) != 1 << k or set(iso) != set(filter_elems):
        raise GluingSeamMismatch("seam map is not a bijection")

    l, eps0, eps1 = glue(k0, filter_elems, k1, ideal_elems, iso, budget=budget)

    phi1 = eps0.compose(sol0.phi1)
    phi2 = eps0.compose(sol0.phi2)

    cm1 = con_map(eps1)
    if not cm1.is_isomorphism:
        raise ConstructionUncertified(
            "upper gluing embedding is not congruence preserving",
            step="solve_general",
        )
    alpha = rep.alpha.compose_con(cm1.inverse())

    # retraction identity on the whole boolean stage
    cm0 = con_map(eps0)
    alpha0_inv = {v: i for i, v in enumerate(alpha0.image)}
    for x in range(b.n):
        got = alpha.image[cm0.image[alpha0_inv[x]]]
        if got != be.rho(x):
            raise ConstructionUncertified(
                "retraction identity fails on the boolean stage",
                step="solve_general",
                witness=x,
            )

    dual_atoms = tuple(eps1(d_atoms_i[i]) for i in range(k))
    return _finish(
        p,
        l,
        phi1,
        phi2,
        alpha,
        dual_atoms=dual_atoms,
        details={
            "boolean_stage": sol0,
            "representation": rep,
            "eps0": eps0,
            "eps1": eps1,
            "boolean_ext": be,
        },
    )
