"""Command-line front end.

Every subcommand prints a human-readable report by default, a single JSON
document with ``--json``, and optional Hasse-diagram PNGs with
``--figures DIR``.  Exit status: 0 on success, 1 when a certificate check
fails, 2 on input or search errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .budget import Budget
from .birkhoff import Poset, boolean_extension
from .catalog import small_lattices
from .congruence import (
    all_congruences,
    is_congruence_preserving_extension,
)
from .constructions import (
    amalgamate,
    find_embedding,
    represent_sc,
    simple_sc_extension,
)
from .core import (
    LatticeMap,
    check_properties,
    identity_map,
    is_distributive,
    is_sectionally_complemented,
    structure_queries,
)
from .errors import LatticeError
from .extensions import cp_sc_extension, rc_tower, tower_step
from .io import (
    congruence_to_json,
    emit_lat,
    lattice_from_json,
    lattice_to_json,
    load_lattice,
    problem_from_json,
    save_lattice,
    solution_from_json,
    solution_to_json,
    to_dot,
)
from .ladders import run_ladder_system
from .pipeline import Report, solve_general, verify_solution

__all__ = ["main"]


def _budget(args) -> Budget:
    return Budget(
        max_elements=args.max_elements,
        max_partition_size=args.max_partition_size,
        timeout_ms=args.timeout_ms,
        seed=args.seed,
    )


def _figures(args, lattices: dict) -> None:
    if not args.figures:
        return
    from .plotting import render_hasse

    os.makedirs(args.figures, exist_ok=True)
    for name, lat in lattices.items():
        render_hasse(lat, os.path.join(args.figures, f"{name}.png"), name)


def _emit(args, human_lines, payload) -> None:
    if args.json:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        for line in human_lines:
            sys.stdout.write(line + "\n")


def _report_lines(report: Report) -> list[str]:
    out = []
    for c in report.checks:
        mark = "PASS" if c.passed else f"FAIL (witness {c.witness!r})"
        out.append(f"  {c.name}: {mark}")
    out.append("certificate: " + ("all passed" if report.all_passed else "FAILED"))
    return out


def _cmd_con(args) -> int:
    lat = load_lattice(args.lattice)
    con = all_congruences(lat)
    lines = [emit_lat(con.lattice).rstrip()]
    for i, c in enumerate(con.table):
        lines.append(f"theta {i}: {congruence_to_json(c)['classes']}")
    _emit(args, lines, {
        "con": lattice_to_json(con.lattice),
        "congruences": [congruence_to_json(c) for c in con.table],
    })
    _figures(args, {"lattice": lat, "con": con.lattice})
    return 0


def _cmd_check(args) -> int:
    lat = load_lattice(args.lattice)
    props = check_properties(lat)
    summary = structure_queries(lat)
    flags = {
        "simple": props.simple,
        "atomistic": props.atomistic,
        "sectionally_complemented": props.sectionally_complemented,
        "relatively_complemented": props.relatively_complemented,
        "distributive": props.distributive,
        "boolean": props.boolean,
    }
    lines = [f"n = {lat.n}"]
    lines += [f"{k}: {v}" for k, v in flags.items()]
    lines.append(f"atoms: {list(summary.atoms)}")
    lines.append(f"dual_atoms: {list(summary.dual_atoms)}")
    lines.append(f"join_irreducibles: {list(summary.join_irreducibles)}")
    _emit(args, lines, {
        "n": lat.n,
        **flags,
        "witnesses": {k: repr(v) for k, v in props.witnesses.items()},
        "atoms": list(summary.atoms),
        "dual_atoms": list(summary.dual_atoms),
        "join_irreducibles": list(summary.join_irreducibles),
    })
    _figures(args, {"lattice": lat})
    return 0


def _cmd_boolext(args) -> int:
    lat = load_lattice(args.lattice)
    be = boolean_extension(lat, _budget(args))
    retract_ok = all(be.rho(be.eta(x)) == x for x in range(lat.n))
    lines = [
        f"base n = {lat.n}, boolean n = {be.boolean.n}",
        f"eta: {list(be.eta.image)}",
        f"rho: {list(be.rho.image)}",
        f"retraction identity: {'PASS' if retract_ok else 'FAIL'}",
    ]
    _emit(args, lines, {
        "boolean": lattice_to_json(be.boolean),
        "eta": list(be.eta.image),
        "rho": list(be.rho.image),
        "irreducibles": list(be.irreducibles),
        "retraction_ok": retract_ok,
    })
    _figures(args, {"base": lat, "boolean": be.boolean})
    return 0 if retract_ok else 1


def _cmd_represent(args) -> int:
    d = load_lattice(args.lattice)
    rep = represent_sc(d, _budget(args))
    ok = rep.alpha.is_isomorphism and is_sectionally_complemented(rep.l)[0]
    lines = [
        f"host n = {rep.l.n}",
        emit_lat(rep.l).rstrip(),
        f"atoms: {list(rep.atoms)}",
        f"alpha: {list(rep.alpha.image)}",
        f"certificate: {'all passed' if ok else 'FAILED'}",
    ]
    _emit(args, lines, {
        "host": lattice_to_json(rep.l),
        "atoms": list(rep.atoms),
        "alpha": list(rep.alpha.image),
        "certified": ok,
    })
    _figures(args, {"d": d, "host": rep.l})
    return 0 if ok else 1


def _cmd_extendsc(args) -> int:
    lat = load_lattice(args.lattice)
    host, emb, dual = simple_sc_extension(lat, _budget(args))
    ok = (
        emb.is_embedding
        and emb.preserves_zero
        and all_congruences(host).lattice.n == 2
        and is_sectionally_complemented(host)[0]
    )
    lines = [
        f"host n = {host.n}, dual atom {dual}",
        f"embedding: {list(emb.image)}",
        f"certificate: {'all passed' if ok else 'FAILED'}",
    ]
    _emit(args, lines, {
        "host": lattice_to_json(host),
        "embedding": list(emb.image),
        "dual_atom": dual,
        "certified": ok,
    })
    _figures(args, {"lattice": lat, "host": host})
    return 0 if ok else 1


def _parse_images(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(",", " ").split())


def _cmd_amalgamate(args) -> int:
    l0 = load_lattice(args.l0)
    l1 = load_lattice(args.l1)
    l2 = load_lattice(args.l2)
    eta1 = LatticeMap(l0, l1, _parse_images(args.eta1))
    eta2 = LatticeMap(l0, l2, _parse_images(args.eta2))
    am = amalgamate(eta1, eta2, _budget(args))
    square = all(
        am.a1(eta1(x)) == am.a2(eta2(x)) for x in range(l0.n)
    )
    ok = square and am.a1.is_embedding and am.a2.is_embedding
    lines = [
        f"amalgam n = {am.k.n} inside ambient n = {am.ambient.n}",
        f"a1: {list(am.a1.image)}",
        f"a2: {list(am.a2.image)}",
        f"certificate: {'all passed' if ok else 'FAILED'}",
    ]
    _emit(args, lines, {
        "amalgam": lattice_to_json(am.k),
        "ambient": lattice_to_json(am.ambient),
        "a1": list(am.a1.image),
        "a2": list(am.a2.image),
        "certified": ok,
    })
    _figures(args, {"amalgam": am.k})
    return 0 if ok else 1


def _cmd_amalgam_con(args) -> int:
    with open(args.problem, "r", encoding="utf-8") as fh:
        problem = problem_from_json(json.load(fh))
    if args.verify_only:
        if not args.solution:
            raise LatticeError("--verify-only needs a stored solution file")
        with open(args.solution, "r", encoding="utf-8") as fh:
            sol = solution_from_json(json.load(fh), problem)
        report = verify_solution(problem, sol)
    else:
        sol = solve_general(problem, _budget(args))
        report = sol.certificate
    if args.out:
        doc = solution_to_json(sol)
        doc["certificate"] = report.as_dict()
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    lines = [f"solution n = {sol.l.n}"] + _report_lines(report)
    payload = solution_to_json(sol)
    payload["certificate"] = report.as_dict()
    _emit(args, lines, payload)
    _figures(args, {"solution": sol.l})
    return 0 if report.all_passed else 1


def _cmd_cpext(args) -> int:
    lat = load_lattice(args.lattice)
    host, emb = cp_sc_extension(lat, _budget(args))
    ok = is_congruence_preserving_extension(emb)[0]
    lines = [
        f"host n = {host.n}",
        emit_lat(host).rstrip(),
        f"embedding: {list(emb.image)}",
        f"certificate: {'all passed' if ok else 'FAILED'}",
    ]
    _emit(args, lines, {
        "host": lattice_to_json(host),
        "embedding": list(emb.image),
        "certified": ok,
    })
    _figures(args, {"lattice": lat, "host": host})
    return 0 if ok else 1


def _cmd_tower(args) -> int:
    budget = _budget(args)
    lats = [load_lattice(p) for p in args.lattices]
    outdir = args.out or "."
    os.makedirs(outdir, exist_ok=True)
    lines = []
    payload = {"stages": [], "certified": True}
    if len(lats) == 1:
        tw = rc_tower(lats[0], args.depth, budget)
        for i, stage in enumerate(tw.stages):
            save_lattice(stage, os.path.join(outdir, f"stage{i}.lat"))
            lines.append(f"stage {i}: n = {stage.n}")
            payload["stages"].append(lattice_to_json(stage))
        lines.append(f"stabilized: {tw.stabilized}")
        payload["stabilized"] = tw.stabilized
        _emit(args, lines, payload)
        _figures(args, {f"stage{i}": s for i, s in enumerate(tw.stages)})
        return 0
    u = identity_map(lats[0])
    hosts = [lats[0]]
    ok = True
    for i in range(len(lats) - 1):
        e = find_embedding(lats[i], lats[i + 1], budget=budget)
        if e is None:
            raise LatticeError(
                f"no embedding of stage {i} into stage {i + 1}"
            )
        step = tower_step(u, e, budget)
        hosts.append(step.l_next)
        ok = ok and step.certificate.all_passed
        lines.append(
            f"step {i}: L{i + 1} n = {step.l_next.n}, "
            f"{'all passed' if step.certificate.all_passed else 'FAILED'}"
        )
        payload["stages"].append({
            "l": lattice_to_json(step.l_next),
            "f": list(step.f.image),
            "u_next": list(step.u_next.image),
            "alpha": list(step.alpha.image),
            "certificate": step.certificate.as_dict(),
        })
        u = step.u_next
    payload["certified"] = ok
    for i, h in enumerate(hosts):
        save_lattice(h, os.path.join(outdir, f"host{i}.lat"))
    lines.append(f"certificate: {'all passed' if ok else 'FAILED'}")
    _emit(args, lines, payload)
    _figures(args, {f"host{i}": h for i, h in enumerate(hosts)})
    return 0 if ok else 1


def _cmd_ladder(args) -> int:
    with open(args.system, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    index = Poset.from_pairs(
        int(doc["index"]["n"]),
        [(int(a), int(b)) for a, b in doc["index"]["pairs"]],
    )
    s = lattice_from_json(doc["s"])
    stages = {int(k): [int(x) for x in v] for k, v in doc["stages"].items()}
    system, report = run_ladder_system(index, s, stages, _budget(args))
    lines = []
    outdir = args.out
    for i in range(index.n):
        lat = system.lattices[i]
        lines.append(f"index {i}: n = {lat.n}, target n = {system.targets[i].n}")
        if outdir:
            os.makedirs(outdir, exist_ok=True)
            save_lattice(lat, os.path.join(outdir, f"index{i}.lat"))
    lines += _report_lines(report)
    _emit(args, lines, {
        "lattices": {i: lattice_to_json(system.lattices[i]) for i in range(index.n)},
        "maps": {f"{i}->{j}": list(m.image) for (i, j), m in system.maps.items()},
        "report": report.as_dict(),
    })
    _figures(args, {f"index{i}": system.lattices[i] for i in range(index.n)})
    return 0 if report.all_passed else 1


def _cmd_enum(args) -> int:
    if args.max_n > 7:
        raise LatticeError("enumeration is capped at 7 elements")
    counts = {}
    lines = []
    blocks = []
    for n in range(1, args.max_n + 1):
        lats = small_lattices(n)
        counts[n] = len(lats)
        lines.append(f"n = {n}: {len(lats)} lattices")
        if args.emit:
            for lat in lats:
                blocks.append(emit_lat(lat).rstrip())
    if args.emit:
        lines += blocks
    _emit(args, lines, {"counts": counts})
    return 0


def _cmd_dot(args) -> int:
    lat = load_lattice(args.lattice)
    sys.stdout.write(to_dot(lat))
    _figures(args, {"lattice": lat})
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-elements", type=int, default=4096)
    common.add_argument("--max-partition-size", type=int, default=7)
    common.add_argument("--timeout-ms", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true")
    common.add_argument("--figures", metavar="DIR", default=None,
                        help="render Hasse-diagram PNGs into DIR")

    p = argparse.ArgumentParser(prog="conlat",
                                description="finite lattice congruence toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("con", parents=[common],
                        help="congruence lattice and class tables")
    sp.add_argument("lattice")
    sp.set_defaults(func=_cmd_con)

    sp = sub.add_parser("check", parents=[common],
                        help="structural properties")
    sp.add_argument("lattice")
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("boolext", parents=[common],
                        help="boolean extension of a distributive lattice")
    sp.add_argument("lattice")
    sp.set_defaults(func=_cmd_boolext)

    sp = sub.add_parser("represent", parents=[common],
                        help="sectionally complemented representation")
    sp.add_argument("lattice")
    sp.set_defaults(func=_cmd_represent)

    sp = sub.add_parser("extendsc", parents=[common],
                        help="embed into a simple sectionally complemented host")
    sp.add_argument("lattice")
    sp.set_defaults(func=_cmd_extendsc)

    sp = sub.add_parser("amalgamate", parents=[common],
                        help="amalgamate two lattices over a common one")
    sp.add_argument("l0")
    sp.add_argument("l1")
    sp.add_argument("l2")
    sp.add_argument("--eta1", required=True, help="image list for l0 -> l1")
    sp.add_argument("--eta2", required=True, help="image list for l0 -> l2")
    sp.set_defaults(func=_cmd_amalgamate)

    sp = sub.add_parser("amalgam-con", parents=[common],
                        help="solve an amalgamation problem over Con")
    sp.add_argument("problem")
    sp.add_argument("solution", nargs="?", default=None,
                    help="stored solution for --verify-only")
    sp.add_argument("--verify-only", action="store_true")
    sp.add_argument("--out", default=None, help="write solution JSON here")
    sp.set_defaults(func=_cmd_amalgam_con)

    sp = sub.add_parser("cpext", parents=[common],
                        help="congruence-preserving sectionally complemented extension")
    sp.add_argument("lattice")
    sp.set_defaults(func=_cmd_cpext)

    sp = sub.add_parser("tower", parents=[common],
                        help="extension towers")
    sp.add_argument("lattices", nargs="+")
    sp.add_argument("--depth", type=int, default=1)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_tower)

    sp = sub.add_parser("ladder", parents=[common],
                        help="run a ladder-indexed direct system")
    sp.add_argument("system", help="JSON presentation")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_ladder)

    sp = sub.add_parser("enum", parents=[common],
                        help="enumerate small lattices up to isomorphism")
    sp.add_argument("--max-n", type=int, default=6)
    sp.add_argument("--emit", action="store_true",
                    help="also print each lattice")
    sp.set_defaults(func=_cmd_enum)

    sp = sub.add_parser("dot", parents=[common],
                        help="DOT export of the Hasse diagram")
    sp.add_argument("lattice")
    sp.set_defaults(func=_cmd_dot)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LatticeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
