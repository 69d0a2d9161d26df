import json

import pytest
from hypothesis import given, settings, strategies as st

from kirbylab.links import (
    InvalidComponent,
    LinkDiagram,
    LinkParseError,
    OpenStrand,
    WidthUnderflow,
    chain,
    disjoint_union,
    empty,
    handle_slide,
    hopf_link,
    linking_data,
    parse_diagram,
    parse_link_spec,
    stabilize,
    trefoil,
    unknot,
    writhes,
)
from kirbylab.evaluator import whitney_degrees


def congruence(M, i, j):
    n = len(M)
    E = [[int(a == b) for b in range(n)] for a in range(n)]
    E[i][j] += 1
    return tuple(tuple(sum(E[a][k] * M[k][l] * E[b][l] for k in range(n) for l in range(n)) for b in range(n)) for a in range(n))


def test_linking_matrices():
    assert linking_data(unknot(-2)).matrix == ((-2,),)
    assert linking_data(unknot(0)).b_minus == 0
    assert linking_data(unknot(-1)).b_minus == 1
    assert linking_data(hopf_link(1, -1)).matrix == ((1, 1), (1, -1))
    assert linking_data(hopf_link(1, -1)).b_minus == 1
    assert linking_data(chain(3)).matrix == ((0, 1, 0), (1, 0, 1), (0, 1, 0))
    assert linking_data(trefoil()).matrix == ((3,),)
    assert linking_data(trefoil(-1)).matrix == ((-3,),)
    assert writhes(hopf_link(2, -1)) == [2, -1]
    assert empty().n_components == 0


def test_reversal_flips_linking_signs():
    L = chain(3).with_orientation([True, False, False])
    assert linking_data(L).matrix == ((0, -1, 0), (-1, 0, 1), (0, 1, 0))
    # framings do not depend on orientation
    assert writhes(trefoil().with_orientation([True])) == [3]


def test_whitney_degrees():
    assert whitney_degrees(unknot(0)) == [-1]
    assert whitney_degrees(unknot(0).with_orientation([True])) == [1]
    assert len(whitney_degrees(chain(3))) == 3


def test_parse_forms():
    text = "cup 0\nx+ 0  # a kink\ncap 0"
    L = parse_diagram(text)
    assert L == unknot(1)
    assert parse_diagram(json.dumps(L.to_json())) == L
    assert parse_diagram([("cup", 0), ("pos", 0), ("cap", 0)]) == L
    assert parse_diagram(chain(3).to_json()) == chain(3)
    R = chain(3).with_orientation([False, True, False])
    assert parse_diagram(R.to_json()) == R
    assert parse_diagram(L.to_text()) == L


@pytest.mark.parametrize("text,err", [
    ("cup 0\ncap 1", WidthUnderflow),
    ("cup 0", OpenStrand),
    ("cup 0\nflip 0\ncap 0", LinkParseError),
    ("cup zero", LinkParseError),
    ('{"events": [{"kind": "cup"}]}', LinkParseError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_diagram(text)


def test_geometric_constructor_refuses_signs():
    with pytest.raises(LinkParseError):
        LinkDiagram([("cup", 0), ("x+", 0), ("cap", 0)])
    with pytest.raises(InvalidComponent):
        LinkDiagram([("cup", 0), ("cap", 0)], reversed=[True, False])


def test_shorthand():
    assert parse_link_spec("unknot:+1") == unknot(1)
    assert parse_link_spec("hopf:1,-1") == hopf_link(1, -1)
    assert parse_link_spec("chain:3") == chain(3)
    assert parse_link_spec("trefoil:-1") == trefoil(-1)
    assert parse_link_spec("empty").n_components == 0
    with pytest.raises(LinkParseError):
        parse_link_spec("hopf:1")
    with pytest.raises(LinkParseError):
        parse_link_spec("unknot:x")


def test_stabilize():
    L = stabilize(hopf_link(0, 0), -1)
    assert L.n_components == 3
    assert linking_data(L).matrix[2] == (0, 0, -1)
    with pytest.raises(ValueError):
        stabilize(L, 2)


def test_handle_slide_errors():
    with pytest.raises(InvalidComponent):
        handle_slide(hopf_link(), 0, 0)
    with pytest.raises(InvalidComponent):
        handle_slide(hopf_link(), 0, 2)


pieces = st.sampled_from(["unknot", "hopf", "trefoil", "chain"])
fr = st.integers(-2, 2)


@st.composite
def links_strategy(draw):
    parts = draw(st.lists(st.tuples(pieces, fr, fr, st.sampled_from([1, -1])), min_size=1, max_size=2))
    L = empty()
    for kind, a, b, s in parts:
        if kind == "unknot":
            P = unknot(a)
        elif kind == "hopf":
            P = hopf_link(a, b)
        elif kind == "trefoil":
            P = trefoil(s)
        else:
            P = chain(2, [a, b])
        L = disjoint_union(L, P)
    n = L.n_components
    rev = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return L.with_orientation(rev)


@settings(max_examples=40, deadline=None)
@given(L=links_strategy(), data=st.data())
def test_handle_slide_changes_linking_by_congruence(L, data):
    n = L.n_components
    if n < 2:
        return
    i = data.draw(st.integers(0, n - 1))
    j = data.draw(st.sampled_from([k for k in range(n) if k != i]))
    L2 = handle_slide(L, i, j)
    assert L2.n_components == n
    M = linking_data(L).matrix
    assert linking_data(L2).matrix == congruence(M, i, j)
    assert linking_data(L2).b_minus == linking_data(L).b_minus
