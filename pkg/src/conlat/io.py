"""Text and JSON formats for lattices, maps, and problems.

The .lat format is one header line ``lat <n>`` followed by cover
declarations ``c <a> <b>``; ``#`` starts a comment.  The JSON mirror carries
``n``, ``covers``, and ``labels``.  Emitters are deterministic so equal
inputs produce byte-equal output.
"""

from __future__ import annotations

import json
from typing import Optional

from .congruence import ConMap, Congruence, all_congruences
from .core import FiniteLattice, LatticeMap, from_covers
from .errors import ParseError

__all__ = [
    "parse_lat",
    "emit_lat",
    "lattice_to_json",
    "lattice_from_json",
    "congruence_to_json",
    "to_dot",
    "load_lattice",
    "save_lattice",
    "problem_from_json",
    "solution_from_json",
    "solution_to_json",
]


def parse_lat(text: str) -> FiniteLattice:
    """Parse the .lat cover-list format."""
    n: Optional[int] = None
    covers = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "lat" or len(parts) != 2:
                raise ParseError(
                    "expected header 'lat <n>'", line=lineno, column=1
                )
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(
                    "element count is not a decimal integer",
                    line=lineno,
                    column=line.index(parts[1]) + 1,
                )
            if n < 1:
                raise ParseError("need at least one element", line=lineno, column=5)
            continue
        if parts[0] != "c":
            raise ParseError(
                f"unknown directive {parts[0]!r}", line=lineno, column=1
            )
        if len(parts) != 3:
            raise ParseError(
                "cover line needs exactly two indices", line=lineno,
                column=len(line) + 1,
            )
        pair = []
        for tok in parts[1:]:
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(
                    f"bad index {tok!r}", line=lineno,
                    column=line.index(tok) + 1,
                )
            if not 0 <= v < n:
                raise ParseError(
                    f"index {v} out of range 0..{n - 1}", line=lineno,
                    column=line.index(tok) + 1,
                )
            pair.append(v)
        covers.append((pair[0], pair[1]))
    if n is None:
        raise ParseError("empty input", line=1, column=1)
    return from_covers(n, covers)


def emit_lat(lat: FiniteLattice) -> str:
    lines = [f"lat {lat.n}"]
    for a, b in sorted(lat.covers):
        lines.append(f"c {a} {b}")
    return "\n".join(lines) + "\n"


def lattice_to_json(lat: FiniteLattice) -> dict:
    return {
        "n": lat.n,
        "covers": [list(c) for c in sorted(lat.covers)],
        "labels": list(lat.labels) if lat.labels else None,
    }


def lattice_from_json(obj: dict) -> FiniteLattice:
    try:
        n = int(obj["n"])
        covers = [(int(a), int(b)) for a, b in obj["covers"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad lattice object: {exc}")
    labels = obj.get("labels")
    return from_covers(n, covers, labels=labels)


def congruence_to_json(c: Congruence) -> dict:
    classes = {}
    for x, r in enumerate(c.rep):
        classes.setdefault(r, []).append(x)
    return {
        "representatives": list(c.rep),
        "classes": [classes[r] for r in sorted(classes)],
    }


def to_dot(lat: FiniteLattice, name: str = "lattice") -> str:
    """Hasse diagram as DOT, drawn bottom-up."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for x in range(lat.n):
        label = lat.labels[x] if lat.labels else str(x)
        lines.append(f'  v{x} [label="{label}"];')
    for a, b in sorted(lat.covers):
        lines.append(f"  v{a} -> v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_lattice(path: str) -> FiniteLattice:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return lattice_from_json(json.loads(text))
    return parse_lat(text)


def save_lattice(lat: FiniteLattice, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if path.endswith(".json"):
            json.dump(lattice_to_json(lat), fh, indent=2, sort_keys=True)
            fh.write("\n")
        else:
            fh.write(emit_lat(lat))


def _map_from_json(obj, domain: FiniteLattice, codomain: FiniteLattice):
    return LatticeMap(
        domain=domain, codomain=codomain, image=tuple(int(x) for x in obj)
    )


def problem_from_json(obj: dict):
    """An amalgamation problem from its JSON presentation.

    Fields: l0, l1, l2, d (lattice objects), eta1, eta2 (image arrays on
    l0), psi1, psi2 (image arrays indexed by the congruence lattices of l1
    and l2 in their canonical order), zero_mode.
    """
    from .pipeline import AmalgamationProblem

    try:
        l0 = lattice_from_json(obj["l0"])
        l1 = lattice_from_json(obj["l1"])
        l2 = lattice_from_json(obj["l2"])
        d = lattice_from_json(obj["d"])
        eta1 = _map_from_json(obj["eta1"], l0, l1)
        eta2 = _map_from_json(obj["eta2"], l0, l2)
        psi1 = ConMap(
            source=all_congruences(l1),
            target=d,
            image=tuple(int(x) for x in obj["psi1"]),
        )
        psi2 = ConMap(
            source=all_congruences(l2),
            target=d,
            image=tuple(int(x) for x in obj["psi2"]),
        )
        zero_mode = bool(obj.get("zero_mode", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad problem object: {exc}")
    return AmalgamationProblem(
        l0=l0, l1=l1, l2=l2, eta1=eta1, eta2=eta2, d=d,
        psi1=psi1, psi2=psi2, zero_mode=zero_mode,
    )


def solution_from_json(obj: dict, problem):
    """Rebuild a stored solution against its problem, for re-verification."""
    from .pipeline import AmalgamationSolution, Report

    try:
        l = lattice_from_json(obj["l"])
        phi1 = _map_from_json(obj["phi1"], problem.l1, l)
        phi2 = _map_from_json(obj["phi2"], problem.l2, l)
        alpha = ConMap(
            source=all_congruences(l),
            target=problem.d,
            image=tuple(int(x) for x in obj["alpha"]),
        )
        duals = obj.get("dual_atoms")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad solution object: {exc}")
    return AmalgamationSolution(
        l=l,
        phi1=phi1,
        phi2=phi2,
        alpha=alpha,
        certificate=Report(checks=()),
        dual_atoms=tuple(duals) if duals else None,
    )


def solution_to_json(sol) -> dict:
    return {
        "l": lattice_to_json(sol.l),
        "phi1": list(sol.phi1.image),
        "phi2": list(sol.phi2.image),
        "alpha": list(sol.alpha.image),
        "dual_atoms": list(sol.dual_atoms) if sol.dual_atoms else None,
        "certificate": sol.certificate.as_dict(),
    }
