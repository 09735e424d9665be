import json

import pytest

from conlat.cli import main
from conlat.congruence import all_congruences, principal_congruence
from conlat.core import boolean_lattice, chain, m3, n5
from conlat.errors import ParseError
from conlat.io import (
    congruence_to_json,
    emit_lat,
    lattice_from_json,
    lattice_to_json,
    parse_lat,
    to_dot,
)


def test_parse_emit_roundtrip():
    for lat in (chain(3), m3(), n5(), boolean_lattice(3)):
        assert parse_lat(emit_lat(lat)) == lat


def test_emit_is_byte_stable():
    text = emit_lat(m3())
    assert text == emit_lat(parse_lat(text))
    assert text.startswith("lat 5\n")
    assert "c 0 1" in text


def test_parse_accepts_comments_and_blank_lines():
    lat = parse_lat("# a square\nlat 4\n\nc 0 1\nc 0 2\nc 1 3\nc 2 3\n")
    assert lat == boolean_lattice(2)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_lat("lat 2\nc 0\n")
    assert exc.value.line == 2


def test_parse_rejects_bad_header():
    with pytest.raises(ParseError) as exc:
        parse_lat("lattice 2\n")
    assert exc.value.line == 1


def test_json_roundtrip():
    for lat in (chain(4), n5(), boolean_lattice(2)):
        assert lattice_from_json(lattice_to_json(lat)) == lat


def test_congruence_json_shape():
    theta = principal_congruence(chain(3), 0, 1)
    obj = congruence_to_json(theta)
    assert obj["representatives"] == [0, 0, 2]
    assert [sorted(c) for c in obj["classes"]] == [[0, 1], [2]]


def test_dot_output_mentions_every_cover():
    dot = to_dot(m3())
    assert dot.startswith("digraph")
    for a, b in m3().covers:
        assert f"v{a} -> v{b}" in dot


def _write(tmp_path, name, lat):
    path = tmp_path / name
    path.write_text(emit_lat(lat))
    return str(path)


def test_cli_con(tmp_path, capsys):
    path = _write(tmp_path, "m3.lat", m3())
    assert main(["con", path]) == 0
    out = capsys.readouterr().out
    # the congruence lattice of M3 is the 2-chain, with both class tables
    assert "lat 2" in out
    assert "theta 1: [[0, 1, 2, 3, 4]]" in out


def test_cli_check_json(tmp_path, capsys):
    path = _write(tmp_path, "b2.lat", boolean_lattice(2))
    assert main(["check", "--json", path]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["boolean"] is True
    assert payload["simple"] is False


def test_cli_enum_counts(capsys):
    assert main(["enum", "--max-n", "5"]) == 0
    out = capsys.readouterr().out
    assert "n = 5: 5 lattices" in out


def test_cli_dot(tmp_path, capsys):
    path = _write(tmp_path, "c3.lat", chain(3))
    assert main(["dot", path]) == 0
    assert "digraph" in capsys.readouterr().out


def test_cli_parse_error_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.lat"
    bad.write_text("lat x\n")
    assert main(["con", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_amalgamate(tmp_path, capsys):
    l0 = _write(tmp_path, "l0.lat", chain(2))
    l1 = _write(tmp_path, "l1.lat", m3())
    l2 = _write(tmp_path, "l2.lat", n5())
    rc = main([
        "amalgamate", l0, l1, l2, "--eta1", "0,4", "--eta2", "0,4",
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert "amalgam n = 6" in out and "all passed" in out


def test_cli_amalgam_con_solve_verify_roundtrip(tmp_path, capsys):
    problem = {
        "l0": lattice_to_json(chain(2)),
        "l1": lattice_to_json(m3()),
        "l2": lattice_to_json(n5()),
        "d": lattice_to_json(chain(2)),
        "eta1": [0, 4],
        "eta2": [0, 4],
        "psi1": [0, 1],
        "psi2": [0, 0, 0, 1, 1],
    }
    ppath = tmp_path / "problem.json"
    ppath.write_text(json.dumps(problem))
    spath = tmp_path / "solution.json"
    assert main(["amalgam-con", str(ppath), "--out", str(spath)]) == 0
    capsys.readouterr()

    assert main(["amalgam-con", str(ppath), str(spath), "--verify-only"]) == 0
    capsys.readouterr()

    # perturb the stored solution: verification must fail with exit code 1
    sol = json.loads(spath.read_text())
    sol["alpha"] = [0] * len(sol["alpha"])
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(sol))
    assert main(["amalgam-con", str(ppath), str(broken), "--verify-only"]) == 1


def test_cli_figures_render_pngs(tmp_path, capsys):
    path = _write(tmp_path, "n5.lat", n5())
    figs = tmp_path / "figs"
    assert main(["con", "--figures", str(figs), path]) == 0
    pngs = list(figs.glob("*.png"))
    assert pngs
    for png in pngs:
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_cli_cpext(tmp_path, capsys):
    path = _write(tmp_path, "c3.lat", chain(3))
    assert main(["cpext", path]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out or "pass" in out


def test_cli_represent(tmp_path, capsys):
    path = _write(tmp_path, "c3.lat", chain(3))
    assert main(["represent", "--json", path]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["host"]["n"] == 9
