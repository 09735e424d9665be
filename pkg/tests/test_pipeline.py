import dataclasses

import pytest

from conlat.congruence import ConMap, all_congruences, con_map
from conlat.core import (
    LatticeMap,
    boolean_lattice,
    chain,
    is_isomorphic,
    m3,
    n5,
)
from conlat.errors import IncoherentProblem, NotDistributive
from conlat.pipeline import (
    AmalgamationProblem,
    solve_boolean,
    solve_general,
    solve_two,
    verify_solution,
)

from problem_utils import coherent_problems, join_zero_maps

TWO = chain(2)


def _bounds(l0, lat):
    return LatticeMap(l0, lat, (0, lat.n - 1))


def test_problem_rejects_non_distributive_target():
    eta = _bounds(TWO, m3())
    psi = join_zero_maps(m3(), TWO)[0]
    with pytest.raises(NotDistributive):
        AmalgamationProblem(TWO, m3(), m3(), eta, eta, m3(), psi, psi)


def test_problem_rejects_incoherent_psis():
    eta1 = LatticeMap(TWO, chain(3), (0, 2))
    eta2 = LatticeMap(TWO, chain(2), (0, 1))
    con3 = all_congruences(chain(3))
    con2 = all_congruences(chain(2))
    psi1 = ConMap(con3, TWO, (0, 0, 1, 1))
    # restricts to the constant-zero map on the base, unlike psi1
    psi2 = ConMap(con2, TWO, (0, 0))
    with pytest.raises(IncoherentProblem):
        AmalgamationProblem(TWO, chain(3), chain(2), eta1, eta2, TWO, psi1, psi2)


def test_solve_two_identity_case():
    eta = LatticeMap(chain(1), TWO, (0,))
    psi = ConMap(all_congruences(TWO), TWO, (0, 1))
    p = AmalgamationProblem(chain(1), TWO, TWO, eta, eta, TWO, psi, psi)
    s = solve_two(p)
    assert s.l.n == 2 and s.certificate.all_passed
    assert verify_solution(p, s).all_passed
    assert s.dual_atoms == (0,)


def test_solve_two_killing_psi_collapses_everything():
    eta = LatticeMap(chain(1), TWO, (0,))
    psi = ConMap(all_congruences(TWO), TWO, (0, 0))
    p = AmalgamationProblem(chain(1), TWO, TWO, eta, eta, TWO, psi, psi)
    s = solve_two(p)
    assert verify_solution(p, s).all_passed
    assert not s.phi1.is_embedding  # both sides were collapsed


def test_solve_two_m3_and_n5_over_bounds():
    eta1 = _bounds(TWO, m3())
    eta2 = _bounds(TWO, n5())
    problems = coherent_problems(TWO, eta1, eta2, TWO)
    assert len(problems) == 4
    for p in problems:
        s = solve_two(p)
        assert s.certificate.all_passed
        assert verify_solution(p, s).all_passed
        # the solution is simple: its congruence lattice is the target
        assert all_congruences(s.l).lattice.n == 2
        assert s.dual_atoms and len(s.dual_atoms) == 1


def test_solve_two_rejects_large_target():
    eta = _bounds(TWO, m3())
    psi = join_zero_maps(m3(), boolean_lattice(2))[0]
    with pytest.raises(IncoherentProblem):
        solve_two(
            AmalgamationProblem(
                TWO, m3(), m3(), eta, eta, boolean_lattice(2), psi, psi
            )
        )


def test_solve_boolean_square_target():
    eta1 = _bounds(TWO, m3())
    eta2 = _bounds(TWO, n5())
    d = boolean_lattice(2)
    problems = coherent_problems(TWO, eta1, eta2, d, limit=6)
    for p in problems:
        s = solve_boolean(p)
        assert verify_solution(p, s).all_passed
        assert len(s.dual_atoms) == len(d.atoms)
        # each dual atom determines a two-element quotient
        for da in s.dual_atoms:
            assert s.l.leq(da, s.l.n - 1) and da != s.l.n - 1


def test_solve_boolean_rejects_chain_target():
    eta1 = LatticeMap(TWO, chain(3), (0, 2))
    psi = join_zero_maps(chain(3), chain(3))[0]
    with pytest.raises(IncoherentProblem):
        solve_boolean(
            AmalgamationProblem(
                TWO, chain(3), chain(3), eta1, eta1, chain(3), psi, psi
            )
        )


def test_solve_general_three_chain_target():
    eta1 = _bounds(TWO, m3())
    eta2 = _bounds(TWO, n5())
    d = chain(3)
    problems = coherent_problems(TWO, eta1, eta2, d, limit=4)
    assert problems
    for p in problems:
        s = solve_general(p)
        assert verify_solution(p, s).all_passed
        assert is_isomorphic(all_congruences(s.l).lattice, d) is not None


def test_solve_general_delegates_boolean_targets():
    eta = _bounds(TWO, m3())
    d = boolean_lattice(2)
    p = coherent_problems(TWO, eta, eta, d, limit=1)[0]
    s = solve_general(p)
    assert verify_solution(p, s).all_passed
    assert s.dual_atoms is not None


def test_solve_general_records_stage_details():
    eta1 = _bounds(TWO, m3())
    eta2 = _bounds(TWO, boolean_lattice(2))
    p = coherent_problems(TWO, eta1, eta2, chain(3), limit=1)[0]
    s = solve_general(p)
    for key in ("boolean_stage", "representation", "eps0", "eps1", "boolean_ext"):
        assert key in s.details


def test_verify_flags_broken_alpha():
    eta = LatticeMap(chain(1), TWO, (0,))
    psi = ConMap(all_congruences(TWO), TWO, (0, 1))
    p = AmalgamationProblem(chain(1), TWO, TWO, eta, eta, TWO, psi, psi)
    s = solve_two(p)
    bad = dataclasses.replace(
        s, alpha=ConMap(s.alpha.source, s.alpha.target, (0, 0))
    )
    report = verify_solution(p, bad)
    assert not report.all_passed
    failed = {c.name for c in report.checks if not c.passed}
    assert "alpha_isomorphism" in failed


def test_verify_flags_broken_square():
    eta1 = _bounds(TWO, m3())
    eta2 = _bounds(TWO, n5())
    p = coherent_problems(TWO, eta1, eta2, TWO)[0]
    s = solve_two(p)
    bad = dataclasses.replace(
        s, phi1=LatticeMap(m3(), s.l, (0,) * m3().n)
    )
    report = verify_solution(p, bad)
    failed = {c.name: c for c in report.checks if not c.passed}
    assert failed  # at least the square or the psi equation breaks
    assert any(c.witness is not None for c in failed.values())


def test_zero_mode_adds_zero_check_and_passes():
    eta1 = LatticeMap(TWO, m3(), (0, 4))
    eta2 = LatticeMap(TWO, n5(), (0, 4))
    p = coherent_problems(TWO, eta1, eta2, chain(3), zero_mode=True, limit=1)[0]
    s = solve_general(p)
    report = verify_solution(p, s)
    assert report.all_passed
    assert "zero_preservation" in {c.name for c in report.checks}
    assert s.phi1(0) == 0 and s.phi2(0) == 0


def test_injective_psi_yields_embeddings():
    eta1 = _bounds(TWO, chain(3))
    eta2 = _bounds(TWO, boolean_lattice(2))
    for p in coherent_problems(TWO, eta1, eta2, boolean_lattice(2)):
        if len(set(p.psi1.image)) == p.psi1.source.lattice.n and len(
            set(p.psi2.image)
        ) == p.psi2.source.lattice.n:
            s = solve_general(p)
            assert verify_solution(p, s).all_passed
            assert s.phi1.is_embedding and s.phi2.is_embedding
