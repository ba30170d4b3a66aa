import random
from fractions import Fraction

import pytest

from maxcut_cvp.common import Decision
from maxcut_cvp.graph import GapSpec, WeightedGraph
from maxcut_cvp.lattice import decide_cvp
from maxcut_cvp.mitm import choose_split, solve_binary_cvp_mitm, split_columns
from maxcut_cvp.oracles import brute_binary_cvp
from maxcut_cvp.reduction import ReductionParams, reduce_graph
from strategies import graphs
from hypothesis import given, settings, strategies as st

SPEC = GapSpec(Fraction(1, 4), Fraction(1, 2), 2)


def brute_decision(inst):
    dist, _ = brute_binary_cvp(inst)
    return decide_cvp(inst, dist)


def test_single_edge(single_edge):
    inst = reduce_graph(single_edge, SPEC, ReductionParams(2))
    res = solve_binary_cvp_mitm(inst, split_columns(2, Fraction(1, 2)))
    assert res.decision == Decision.YES
    assert res.witness in ((0, 1), (1, 0))
    assert res.witness_dist_pow == 1


def test_triangle_matches_brute(triangle):
    for spec in (SPEC, GapSpec(Fraction(1, 2), Fraction(1, 2), 2), GapSpec(Fraction(1, 10), 1, 1)):
        inst = reduce_graph(triangle, spec, ReductionParams(4))
        for a in (Fraction(1, 3), Fraction(2, 3)):
            assert solve_binary_cvp_mitm(inst, split_columns(3, a)).decision == brute_decision(inst)


def test_audit_query_count():
    rng = random.Random(3)
    edges = [(i, i + 1, Fraction(1)) for i in range(1, 10)]
    edges += [(rng.randint(1, 5), rng.randint(6, 10), Fraction(1)) for _ in range(5)]
    g = WeightedGraph(10, tuple(edges))
    inst = reduce_graph(g, SPEC, ReductionParams(2))
    res = solve_binary_cvp_mitm(inst, split_columns(10, Fraction(1, 2)), audit=True)
    assert res.stats["queries"] == 32
    assert res.stats["points"] == 32
    assert res.decision == brute_decision(inst)


def test_choose_split():
    s = choose_split(10)
    assert s.left == (0, 1, 2, 3, 4) and s.right == (5, 6, 7, 8, 9)
    assert choose_split(10, 1, 0).a == Fraction(1, 2)
    assert choose_split(10, 1, 1).a == Fraction(2, 3)
    with pytest.raises(ValueError):
        choose_split(1)


def test_split_validation():
    with pytest.raises(ValueError):
        split_columns(4, Fraction(1, 2), left=(0,))
    with pytest.raises(ValueError):
        split_columns(4, 0)
    s = split_columns(4, Fraction(1, 2), left=(3, 1))
    assert s.left == (1, 3) and s.right == (0, 2)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6), st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)]),
       st.randoms(use_true_random=False))
def test_split_invariance(g, a, rnd):
    if g.n < 2:
        return
    spec = GapSpec(Fraction(1, 3), Fraction(1, 2), 2)
    inst = reduce_graph(g, spec, ReductionParams(4))
    size = int(a * g.n)
    left = rnd.sample(range(g.n), size)
    res = solve_binary_cvp_mitm(inst, split_columns(g.n, a, left=left), audit=True)
    assert res.decision == brute_decision(inst)
    assert res.stats["queries"] == 2 ** (g.n - size)


def test_lsh_backend_never_false_yes(triangle):
    spec = GapSpec(Fraction(1, 2), Fraction(1, 2), 2)
    inst = reduce_graph(triangle, spec, ReductionParams(16))
    truth = brute_decision(inst)
    res = solve_binary_cvp_mitm(inst, split_columns(3, Fraction(1, 3)), backend="lsh", seed=2)
    if res.decision == Decision.YES:
        assert truth == Decision.YES
        assert res.witness_dist_pow <= inst.r_pow
    assert "lsh_tables" in res.stats
