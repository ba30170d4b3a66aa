import io
import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxcut_cvp.common import CapExceeded, Decision, ParseError
from strategies import graphs

from maxcut_cvp.graph import (
    GapSpec,
    Partition,
    WeightedGraph,
    cut_value,
    decide_gap_maxcut,
    max_cut,
    max_cut_ratio,
    normalize_weights,
    read_graph,
    write_graph,
)


def naive_max_ratio(g):
    best = Fraction(0)
    for bits in itertools.product((0, 1), repeat=g.n):
        val = sum((w for u, v, w in g.edges if bits[u - 1] != bits[v - 1]), Fraction(0))
        best = max(best, val)
    return best / g.w_tot


@pytest.mark.parametrize("weights,expected", [
    ((2, 4, 6), (1, 2, 3)),
    ((1, 1), (1, 1)),
    ((Fraction(3, 2), 3), (1, 2)),
])
def test_normalize_weights(weights, expected):
    edges = [(1, 2), (2, 3), (3, 1)][:len(weights)]
    n = 3 if len(weights) > 2 else 2
    if len(weights) == 2:
        edges = [(1, 2), (2, 1)]
    g = WeightedGraph(n, tuple((u, v, Fraction(w)) for (u, v), w in zip(edges, weights)))
    out = normalize_weights(g)
    assert out.weights == tuple(Fraction(x) for x in expected)
    assert [e[:2] for e in out.edges] == [e[:2] for e in g.edges]


def test_graph_rejects_bad_input():
    with pytest.raises(ValueError):
        WeightedGraph(2, ((1, 1, Fraction(1)),))
    with pytest.raises(ValueError):
        WeightedGraph(2, ((1, 3, Fraction(1)),))
    with pytest.raises(ValueError):
        WeightedGraph(2, ((1, 2, Fraction(0)),))
    with pytest.raises(ValueError):
        WeightedGraph(3, ((1, 2, Fraction(1)),))


def test_cut_value_examples(triangle, weighted_triangle):
    assert cut_value(triangle, Partition(3, frozenset())) == 0
    assert cut_value(triangle, Partition(3, frozenset({1}))) == 2
    assert cut_value(weighted_triangle, Partition(3, frozenset({1}))) == 3


def test_max_cut_ratio_examples(single_edge, triangle):
    assert max_cut_ratio(single_edge) == 1
    assert max_cut_ratio(triangle) == Fraction(2, 3)
    c4 = WeightedGraph.unweighted(4, [(1, 2), (2, 3), (3, 4), (4, 1)])
    assert max_cut_ratio(c4) == 1


def test_max_cut_returns_maximising_partition(weighted_triangle):
    value, part = max_cut(weighted_triangle)
    assert value == cut_value(weighted_triangle, part) == 5
    assert 1 not in part.members


def test_max_cut_cap():
    g = WeightedGraph.unweighted(5, [(1, 2), (2, 3), (3, 4), (4, 5)])
    with pytest.raises(CapExceeded):
        max_cut_ratio(g, cap=4)


def test_decide_gap_maxcut(single_edge, triangle):
    assert decide_gap_maxcut(single_edge, GapSpec(Fraction(1, 4), Fraction(1, 2))) is Decision.YES
    # 1 - (1/4)^(1/2) = 1/2 <= 2/3 < 3/4
    assert decide_gap_maxcut(triangle, GapSpec(Fraction(1, 4), Fraction(1, 2))) is Decision.PROMISE_VIOLATION
    assert decide_gap_maxcut(triangle, GapSpec(Fraction(3, 10), 1)) is Decision.NO


def test_gapspec_domain():
    with pytest.raises(ValueError):
        GapSpec(0, Fraction(1, 2))
    with pytest.raises(ValueError):
        GapSpec(Fraction(1, 2), 0)
    with pytest.raises(ValueError):
        GapSpec(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    assert GapSpec(Fraction(1, 4), Fraction(1, 2)).eps_c == Fraction(1, 2)
    assert isinstance(GapSpec(Fraction(1, 10), Fraction(1, 2)).eps_c, float)


@settings(max_examples=60, deadline=None)
@given(graphs(), st.data())
def test_cut_properties(g, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
    part = Partition.from_membership(bits)
    val = cut_value(g, part)
    assert val == cut_value(g, part.complement())
    assert 0 <= val <= g.w_tot


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6), st.fractions(min_value=Fraction(1, 10), max_value=10))
def test_max_cut_ratio_properties(g, scale):
    ratio = max_cut_ratio(g)
    assert ratio == naive_max_ratio(g)
    assert Fraction(1, 2) <= ratio <= 1
    scaled = WeightedGraph(g.n, tuple((u, v, w * scale) for u, v, w in g.edges))
    assert max_cut_ratio(scaled) == ratio
    once = normalize_weights(g)
    assert normalize_weights(once) == once
    assert once.w_min == 1


def test_graph_format_round_trip(weighted_triangle):
    spec = GapSpec(Fraction(3, 10), Fraction(1, 2), Fraction(2))
    buf = io.StringIO()
    write_graph(buf, weighted_triangle, spec)
    g, s = read_graph(io.StringIO("# comment\n" + buf.getvalue()))
    assert g == weighted_triangle and s == spec


@pytest.mark.parametrize("text", [
    "maxcut 2 1 2 1/4 1/2\nmaxcut 2 1 2 1/4 1/2\ne 1 2 1\n",
    "maxcut 2 1 2 1/4 1/2\ne 1 3 1\n",
    "maxcut 2 1 2 1/4 1/2\ne 1 1 1\n",
    "maxcut 2 2 2 1/4 1/2\ne 1 2 1\n",
    "e 1 2 1\n",
    "maxcut 2 1 2 1/4 1/2\ne 1 2 x\n",
])
def test_graph_parser_rejects(text):
    with pytest.raises(ParseError):
        read_graph(io.StringIO(text))
