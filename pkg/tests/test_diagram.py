import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skeincount.diagram import (
    ANNULUS,
    DiagramError,
    FramedDiagram,
    ParseError,
    braid_closure,
    parse_braid,
    parse_diagram,
    parse_pd,
    unknot,
)
from skeincount.skein import evaluate_s3, evaluate_zero_framed
from skeincount.tables import knot, link
from strategies import diagrams, nonempty_diagrams

HOPF_PD = "PD[X[1,4,2,3], X[3,2,4,1]]"


def test_parse_hopf_pd():
    d = parse_pd(HOPF_PD)
    assert d.n_components == 2
    assert d.n_crossings == 2
    assert abs(d.linking_matrix()[0][1]) == 1


def test_parse_empty():
    d = parse_pd("PD[]")
    assert d.is_empty()
    assert d.n_components == 0


@pytest.mark.parametrize("text, sign", [("PD[X[1,1,2,2]]", 1), ("PD[X[1,2,2,1]]", -1)])
def test_kink_diagrams(text, sign):
    d = parse_pd(text)
    assert d.n_components == 1
    assert d.n_crossings == 1
    assert d.writhe() == sign
    assert d.framing() == [sign]
    assert evaluate_zero_framed(d) == evaluate_zero_framed(unknot())


def test_parse_braid_examples():
    h = parse_braid("BR[2, [1,1]]")
    assert h.n_components == 2
    assert [c[4] for c in h.crossings] == [1, 1]
    t = parse_braid("BR[2,[1,1,1]]")
    assert t.n_components == 1
    assert t.writhe() == 3
    u = parse_braid("BR[1, []]")
    assert u.n_components == 1 and u.n_crossings == 0


def test_braid_generator_out_of_range():
    with pytest.raises(ParseError):
        parse_braid("BR[2,[2]]")
    with pytest.raises(DiagramError):
        braid_closure(3, [0])


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_pd("PD[X[1,2,3,4],\n  Y[1]]")
    assert info.value.line == 2
    assert info.value.column >= 3


def test_parse_rejects_bad_labels():
    with pytest.raises(ParseError):
        parse_pd("PD[X[1,2,3,4]]")
    with pytest.raises(ParseError):
        parse_diagram("GARBAGE")


def test_whitespace_insensitive():
    assert parse_braid(" BR [ 2 , [ 1 , 1 , 1 ] ] ").canonical_code() == parse_braid("BR[2,[1,1,1]]").canonical_code()


def test_switch_involution_and_codes():
    t = knot("3_1")
    for c in range(t.n_crossings):
        s = t.switch_crossing(c)
        assert s.switch_crossing(c).canonical_code() == t.canonical_code()
        assert s.canonical_code() != t.canonical_code()


def test_trefoil_switch_is_unknot():
    s = knot("3_1").switch_crossing(0)
    assert evaluate_zero_framed(s) == evaluate_zero_framed(unknot())


def test_hopf_switch_is_unlink():
    s = link("hopf").switch_crossing(0)
    d = evaluate_zero_framed(unknot())
    assert evaluate_zero_framed(s) == d * d


def test_smoothing_examples():
    h = link("hopf")
    assert h.smooth_crossing(0).n_components == 1
    t = knot("3_1")
    for c in range(3):
        s = t.smooth_crossing(c)
        assert s.n_crossings == 2
        assert s.n_components == 2


def test_unknown_crossing():
    with pytest.raises((DiagramError, IndexError)):
        knot("3_1").switch_crossing(7)


def test_writhe_examples():
    t = knot("3_1")
    assert t.writhe() == 3
    assert t.mirror().writhe() == -3
    assert t.split_union(link("hopf")).writhe() == 3 + link("hopf").writhe()


def test_canonical_code_relabel():
    t = knot("4_1")
    edges = t.edges
    perm = edges[:]
    random.Random(3).shuffle(perm)
    r = t.relabel(dict(zip(edges, [p + 100 for p in perm])))
    assert r.canonical_code() == t.canonical_code()
    assert knot("3_1").canonical_code() != link("hopf").canonical_code()


def test_crossing_order_irrelevant():
    t = knot("5_2")
    rev = FramedDiagram(tuple(reversed(t.crossings)), t.loops)
    assert rev.canonical_code() == t.canonical_code()


def test_json_roundtrip():
    d = knot("3_1").with_framing_change(0, 2)
    data = d.to_json()
    assert set(data) >= {"crossings", "framing", "ambient", "winding"}
    e = FramedDiagram.from_json(json.dumps(data))
    assert e.canonical_code() == d.canonical_code()
    assert e.framing() == [5]


def test_framing_change_and_zero_framed():
    t = knot("3_1")
    assert t.framing() == [3]
    assert t.zero_framed().framing() == [0]
    assert t.with_framing_change(0, -1).framing() == [2]


def test_annular_closure_winding():
    d = parse_braid("ABR[3,[1,-2,1]]")
    assert d.ambient == ANNULUS
    assert sum(d.winding()) == 3
    u = parse_diagram("PD[Loop[1], Ray[1]]")
    assert u.winding() == [1]


def test_frame_token():
    d = parse_diagram("PD[Loop[1], Frame[1,2]]")
    assert d.framing() == [2]
    assert evaluate_s3(d) == evaluate_s3(unknot(2))


# -- properties -------------------------------------------------------------

@given(diagrams())
def test_render_parse_roundtrip(d):
    back = parse_diagram(d.render())
    assert back.canonical_code() == d.canonical_code()


@given(nonempty_diagrams(), st.data())
def test_switch_properties(d, data):
    if d.n_crossings == 0:
        return
    c = data.draw(st.integers(0, d.n_crossings - 1))
    s = d.switch_crossing(c)
    sign = d.crossings[c][4]
    assert s.n_components == d.n_components
    assert s.writhe() == d.writhe() - 2 * sign
    assert s.switch_crossing(c).canonical_code() == d.canonical_code()


@given(nonempty_diagrams(), st.data())
def test_smoothing_changes_components_by_one(d, data):
    if d.n_crossings == 0:
        return
    c = data.draw(st.integers(0, d.n_crossings - 1))
    s = d.smooth_crossing(c)
    assert s.n_crossings == d.n_crossings - 1
    assert abs(s.n_components - d.n_components) == 1


@given(diagrams(), diagrams())
def test_split_union_writhe_additive(d1, d2):
    u = d1.split_union(d2)
    assert u.writhe() == d1.writhe() + d2.writhe()
    assert u.n_components == d1.n_components + d2.n_components


@given(diagrams())
def test_mirror_negates_writhe(d):
    assert d.mirror().writhe() == -d.writhe()
    assert d.mirror().mirror().canonical_code() == d.canonical_code()
