import json
import math
import subprocess
import sys

import pytest

from skeincount.cli import main
from skeincount.curvecount import ModuliSet, single_cylinder_moduli
from skeincount.tables import knot, link


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_homfly_examples(capsys):
    assert run(["homfly", "PD[]"], capsys)[:2] == (0, "1")
    assert run(["homfly", "BR[1,[]]"], capsys)[:2] == (0, "a*z^-1 - a^-1*z^-1")
    code, out, _ = run(["homfly", "BR[2,[1,1,1]]", "--zero-framed"], capsys)
    assert out == "a^-1*z - a^-3*z + 2*a^-1*z^-1 - 3*a^-3*z^-1 + a^-5*z^-1"


def test_homfly_json(capsys):
    code, out, _ = run(["homfly", "BR[2,[1,1,1]]", "--json"], capsys)
    data = json.loads(out)
    assert data["framing"] == [3]
    assert set(data) >= {"framed", "zero_framed"}


def test_homfly_parse_error(capsys):
    code, _, err = run(["homfly", "PD[X[1,2"], capsys)
    assert code == 2
    assert "line 1" in err and "column" in err


def test_usage_error(capsys):
    assert run(["nonsense"], capsys)[0] == 1
    assert run([], capsys)[0] == 1


@pytest.fixture
def files(tmp_path):
    unk = tmp_path / "unk.json"
    unk.write_text(single_cylinder_moduli(knot("0_1")).dumps())
    hopf = tmp_path / "hopf.json"
    hopf.write_text(single_cylinder_moduli(link("hopf")).dumps())
    ev = tmp_path / "ev.json"
    ev.write_text(json.dumps({"kind": "Hyperbolic", "site": {"record": 0, "brane": 0, "crossing": 1}, "direction": 1}))
    el = tmp_path / "el.json"
    el.write_text(json.dumps([{"kind": "Elliptic", "site": {"record": 0, "brane": 1}, "direction": 1},
                              {"kind": "FramingChange", "site": {"record": 0, "brane": 0, "component": 0},
                               "direction": -1}]))
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"branes": [], "records": []}))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"branes": [{"name": "L"}], "records": [{"chi": "x", "boundary": [None]}]}))
    return {p.stem: str(p) for p in (unk, hopf, ev, el, empty, bad)}


def test_count_unknot(files, capsys):
    code, out, _ = run(["count", files["unk"], "--collapse-s3"], capsys)
    assert (code, out) == (0, "(a*z^-1 - a^-1*z^-1) * l1")


def test_count_wall_invariant(files, capsys):
    base = run(["count", files["hopf"], "--collapse-s3"], capsys)[1]
    assert run(["count", files["hopf"], "--collapse-s3", "--wall", files["ev"]], capsys)[1] == base
    assert run(["count", files["hopf"], "--collapse-s3", "--wall", files["el"]], capsys)[1] == base


def test_count_partition_empty(files, capsys):
    assert run(["count", files["empty"], "--partition"], capsys)[:2] == (0, "1")


def test_count_conifold_and_reduce(files, capsys):
    code, out, _ = run(["count", files["unk"], "--conifold"], capsys)
    assert code == 0 and "a^3" in out
    code, out, _ = run(["count", files["unk"], "--partition", "--reduce-by", files["unk"]], capsys)
    assert (code, out) == (0, "1")


def test_count_schema_error(files, capsys):
    code, _, err = run(["count", files["bad"]], capsys)
    assert code == 2
    assert "records[0]" in err


def test_count_bad_wall_site(files, tmp_path, capsys):
    ev = tmp_path / "far.json"
    ev.write_text(json.dumps({"kind": "Elliptic", "site": {"record": 3, "brane": 0}, "direction": 1}))
    assert run(["count", files["unk"], "--wall", str(ev)], capsys)[0] == 3


def test_count_json_roundtrip(files, capsys):
    code, out, _ = run(["count", files["hopf"], "--json"], capsys)
    data = json.loads(out)
    assert ModuliSet.from_json(data["moduli"]).to_json() == data["moduli"]


def test_localmodel_through_gamma(capsys):
    code, out, _ = run(["localmodel", "through-gamma", "--t", "-1", "--t", "1", "--check"], capsys)
    assert code == 0
    assert json.loads(out)["check"]["passed"]


def test_localmodel_tangency(capsys):
    code, out, _ = run(["localmodel", "tangency", "--branch", "+", "--s", "1"], capsys)
    data = json.loads(out)
    assert code == 0 and len(data["points"]) == 1


def test_localmodel_elliptic_nodal_report(capsys):
    code, out, _ = run(["localmodel", "elliptic-nodal", "--rho", "3"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["radius"] == pytest.approx(2 * math.exp(-3), abs=1e-14)
    assert data["total"] == 0


def test_localmodel_nontransverse(capsys):
    assert run(["localmodel", "elliptic-cylinder", "--t", "0"], capsys)[0] == 3


def test_index_cli(capsys):
    code, out, _ = run(["index", "--weights", "-1", "-1", "--numeric"], capsys)
    assert (code, out) == (0, "index = 1 (C), numeric = 1")
    code, out, _ = run(["index", "--weights", "1", "1", "--type", "strip", "--json"], capsys)
    assert json.loads(out)["index"] == -1
    assert run(["index", "--weights", "0", "1"], capsys)[0] == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "skeincount", "homfly", "PD[]"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "1"
