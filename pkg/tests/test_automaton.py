from functools import reduce
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from treelcl.automaton import (FlexAutomaton, FlexibilityError, build_rooted_automaton,
                               build_unrooted_automaton, component_states, cycle_gcd,
                               flexibility_index, is_flexible, scc_report, scc_rooted,
                               scc_unrooted, to_dot)
from treelcl.parser import parse_problem
from treelcl.problem import UnrootedProblem

import oracles
from problems import AB, INTRO, TWO_COLORING
from strategies import unrooted_problems

MIS_STATES = ["00", "01", "10"]
MIS_EDGES = [("00", "01"), ("01", "10"), ("10", "00"), ("10", "01")]


def mis():
    return FlexAutomaton.from_edges(MIS_STATES, MIS_EDGES)


def test_empty_configs_give_empty_automaton():
    p = parse_problem(TWO_COLORING)
    D, a = build_unrooted_automaton(p, [])
    assert D == frozenset() and a.states == ()


def test_single_label_self_loop():
    p = UnrootedProblem(3, ["a"], {(0, 0, 0)}, {(0, 0)})
    D, a = build_unrooted_automaton(p, p.node_configs)
    assert D == {(0, 0)}
    assert a.edges() == [((0, 0), (0, 0))]
    assert scc_unrooted(D, a) == [frozenset({(0, 0)})]
    comp = scc_unrooted(D, a)[0]
    assert is_flexible(a, comp) and flexibility_index(a, comp) == 1


def test_two_coloring_automaton():
    p = parse_problem(TWO_COLORING)
    D, a = build_unrooted_automaton(p, p.node_configs)
    assert D == {(0, 0), (1, 1)}
    assert set(a.edges()) == {((0, 0), (1, 1)), ((1, 1), (0, 0))}
    classes = scc_unrooted(D, a)
    assert classes == [frozenset({(0, 0), (1, 1)})]
    assert not is_flexible(a, classes[0])


def test_lone_state_without_loop_has_no_class():
    p = UnrootedProblem(3, ["a"], {(0, 0, 0)}, set())
    D, a = build_unrooted_automaton(p, p.node_configs)
    assert scc_unrooted(D, a) == []


def test_rooted_automaton_examples():
    p = parse_problem(INTRO)
    a = build_rooted_automaton(p, {0, 1})
    assert set(a.edges()) == {(0, 0), (1, 0), (0, 1)}
    assert scc_rooted(a) == [frozenset({0, 1})]
    q = parse_problem(AB)
    b = build_rooted_automaton(q, {0, 1})
    assert set(b.edges()) == {(1, 0), (0, 1)}
    assert scc_rooted(b) == [frozenset({0, 1})]
    assert not is_flexible(b, frozenset({0, 1}))
    c = build_rooted_automaton(q, {0})
    assert c.states == (0,) and c.edges() == []
    assert scc_rooted(c) == []


def test_mis_state_01_flexible():
    a = mis()
    comp = scc_rooted(a)[0]
    assert comp == {"00", "01", "10"}
    assert is_flexible(a, comp)


def test_mis_return_walks_from_length_5_on():
    A, idx = oracles.adjacency(MIS_STATES, MIS_EDGES)
    lengths = oracles.return_lengths(A, idx["01"], 20)
    assert all(k in lengths for k in range(5, 21))


def test_mis_flexibility_index_is_5():
    # oracle: matrix powers up to length 20 give the last all-pairs-bad length
    A, _ = oracles.adjacency(MIS_STATES, MIS_EDGES)
    assert oracles.brute_flexibility_index(A, [0, 1, 2], 20) == 5
    a = mis()
    assert flexibility_index(a, scc_rooted(a)[0]) == 5


def test_inflexible_index_raises():
    a = FlexAutomaton.from_edges("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(FlexibilityError):
        flexibility_index(a, {"a", "b"})


def test_self_loop_index():
    a = FlexAutomaton.from_edges("a", [("a", "a")])
    assert flexibility_index(a, {"a"}) == 1


@st.composite
def automata(draw, max_states):
    n = draw(st.integers(1, max_states))
    pairs = [(i, j) for i in range(n) for j in range(n)]
    edges = draw(st.sets(st.sampled_from(pairs)))
    return n, sorted(edges)


@settings(max_examples=200)
@given(automata(8))
def test_gcd_truncation_matches_longer_window(data):
    n, edges = data
    a = FlexAutomaton.from_edges(range(n), edges)
    A, _ = oracles.adjacency(list(range(n)), edges)
    for comp in scc_rooted(a):
        for s in comp:
            long = reduce(gcd, oracles.return_lengths(A, s, 4 * n), 0)
            assert cycle_gcd(a, s) == long


@settings(max_examples=200)
@given(automata(6))
def test_flexibility_agrees_with_walk_definition(data):
    n, edges = data
    a = FlexAutomaton.from_edges(range(n), edges)
    A, _ = oracles.adjacency(list(range(n)), edges)
    for comp in scc_rooted(a):
        members = sorted(comp)
        brute = oracles.brute_flexible(A, members, 4 * n * n)
        assert is_flexible(a, comp) == bool(brute)
        if brute:
            K = flexibility_index(a, comp)
            assert K == oracles.brute_flexibility_index(A, members, 4 * n * n)
            # the window after K is all good
            assert all(brute[K - 1:K + len(members) ** 2])


@settings(max_examples=100)
@given(unrooted_problems(max_labels=3))
def test_unrooted_structure(p):
    D, a = build_unrooted_automaton(p, p.node_configs)
    for x, y in a.states:
        assert (y, x) in a.succ
    partners = p.partners
    for s in a.states:
        for t in a.states:
            assert (t in a.succ[s]) == (t[0] in partners[s[1]])
    classes = scc_unrooted(D, a)
    seen = set()
    for cls in classes:
        assert not (cls & seen)
        seen |= cls
        flex = {is_flexible(a, frozenset([m])) and is_flexible(a, cls) for m in cls}
        assert len(flex) == 1
        for m in cls:
            x, y = m
            # both orientations agree
            assert cycle_gcd(a, (x, y)) == cycle_gcd(a, (y, x))


@settings(max_examples=100)
@given(unrooted_problems(max_labels=3))
def test_unrooted_index_against_oracle(p):
    D, a = build_unrooted_automaton(p, p.node_configs)
    A, idx = oracles.adjacency(list(a.states), a.edges())
    for comp in scc_report(a, D).flexible:
        members = [idx[s] for s in component_states(a, comp.members)]
        m = len(members)
        assert comp.flexibility_index == oracles.brute_flexibility_index(A, members, 4 * m * m + 4)


def test_dot_output_for_mis():
    a = mis()
    dot = to_dot(a, scc_report(a))
    assert dot.count("->") == 4
    assert "flexible K=5" in dot
    node_lines = [ln for ln in dot.splitlines() if ln.strip().endswith('";') and "->" not in ln
                  and "label=" not in ln]
    assert len(node_lines) == 3


def test_dot_renders_pairs():
    p = parse_problem(TWO_COLORING)
    D, a = build_unrooted_automaton(p, p.node_configs)
    dot = to_dot(a, scc_report(a, D), p.names)
    assert '"1|1" -> "2|2"' in dot
