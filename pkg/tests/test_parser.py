import json
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from treelcl.decomposition import decompose_rooted
from treelcl.labeling import Labeling
from treelcl.parser import (DuplicateConfigWarning, ParseError, parse_decomposition_dump,
                            parse_labeling, parse_problem, parse_tree, serialize_decomposition,
                            serialize_labeling, serialize_problem, serialize_tree)
from treelcl.problem import RootedConfig
from treelcl.trees import complete_tree, lower_bound_tree_unrooted, random_tree

from problems import INTRO, SINKLESS, TWO_COLORING
from strategies import problems


def test_compact_rooted_notation():
    p = parse_problem(INTRO)
    assert p.kind == "rooted" and p.delta == 2
    assert p.names == ("1", "2")
    assert p.configs == {RootedConfig(0, (0, 1)), RootedConfig(1, (0, 0))}


def test_spaced_and_compact_agree():
    spaced = INTRO.replace("1 : 12", "1 : 1 2").replace("2 : 11", "2 : 1 1")
    assert parse_problem(spaced) == parse_problem(INTRO)


def test_unrooted_text():
    p = parse_problem(TWO_COLORING)
    assert p.node_configs == {(0, 0, 0), (1, 1, 1)}
    assert p.edge_configs == {(0, 1)}


def test_comments_and_blank_lines():
    text = "# two colors\n\n" + TWO_COLORING.replace("edge : 1 2", "edge : 2 1  # reversed")
    assert parse_problem(text) == parse_problem(TWO_COLORING)


def test_json_form():
    doc = {"kind": "rooted", "delta": 2, "labels": ["1", "2"],
           "configs": [{"label": "1", "children": ["1", "2"]},
                       {"label": "2", "children": ["1", "1"]}]}
    assert parse_problem(json.dumps(doc)) == parse_problem(INTRO)


@pytest.mark.parametrize("text, needle", [
    ("", "empty"),
    ("rooted delta=2\n", "missing labels"),
    ("tree rooted n=3\n", "header"),
    ("rooted delta=2\nlabels = a\na : a\n", "arity"),
    ("rooted delta=2\nlabels = a\na : a b\n", "unknown label"),
    ("unrooted delta=3\nlabels = a\nnode : a a a\nedge : a a a\n", "arity"),
    ("unrooted delta=3\nlabels = a\nvertex : a a a\n", "node"),
    ("unrooted delta=1\nlabels = a\n", "delta"),
    ("rooted delta=2\nlabels = a,a\n", "duplicate label"),
    ("rooted delta=2\nlabels = a\na b b\n", "expected"),
    ('{"kind": "rooted", "delta": 2', "invalid JSON"),
    ('{"kind": "star", "delta": 2, "labels": ["a"]}', "kind"),
    ('{"kind": "rooted", "delta": 2, "labels": ["a"], "configs": [{"label": "a", "children": ["a", "q"]}]}',
     "unknown label"),
])
def test_parse_errors(text, needle):
    with pytest.raises(ParseError) as exc:
        parse_problem(text)
    assert needle in str(exc.value)


def test_error_carries_line_number():
    with pytest.raises(ParseError) as exc:
        parse_problem("rooted delta=2\nlabels = a\n\na : a q\n")
    assert exc.value.line == 4
    assert str(exc.value).startswith("line 4:")


def test_duplicate_config_warns_once_and_is_dropped():
    text = INTRO + "1 : 2 1\n"
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        p = parse_problem(text)
    assert [w.category for w in caught] == [DuplicateConfigWarning]
    assert len(p.configs) == 2


@settings(max_examples=150)
@given(problems(max_labels=4))
def test_problem_round_trip(p):
    assert parse_problem(serialize_problem(p)) == p
    assert parse_problem(serialize_problem(p, "json")) == p


@given(problems(max_labels=3))
def test_serialization_is_stable(p):
    text = serialize_problem(p)
    assert serialize_problem(parse_problem(text)) == text


@pytest.mark.filterwarnings("ignore::treelcl.parser.DuplicateConfigWarning")
@settings(max_examples=200)
@given(st.text(alphabet="rootedunrltabs=0123:, \n#abc", max_size=80))
def test_fuzz_never_crashes_unexpectedly(text):
    try:
        parse_problem(text)
    except ParseError:
        pass


@pytest.mark.filterwarnings("ignore::treelcl.parser.DuplicateConfigWarning")
@given(st.data())
def test_fuzz_mutations_of_valid_text(data):
    base = SINKLESS
    i = data.draw(st.integers(0, len(base) - 1))
    ch = data.draw(st.sampled_from(list("IOX :=,\n0123abc")))
    mutated = base[:i] + ch + base[i + 1:]
    try:
        parse_problem(mutated)
    except ParseError:
        pass


# trees

@pytest.mark.parametrize("tree", [
    complete_tree("rooted", 2, 3),
    complete_tree("unrooted", 3, 2, starred=True),
    random_tree(40, "rooted", 3, seed=5),
    random_tree(40, "unrooted", 4, seed=6),
    lower_bound_tree_unrooted(1, 1, 1, s=4),
])
def test_tree_round_trip(tree):
    back = parse_tree(serialize_tree(tree))
    assert back.kind == tree.kind and back.n == tree.n
    assert back.adj == tree.adj and back.parent == tree.parent
    assert back.layer == tree.layer and back.role == tree.role


@pytest.mark.parametrize("text, needle", [
    ("tree rooted n=3\n0 -> 1\n0 -> 2\n", "outdegree"),
    ("tree unrooted n=3\n0 -- 1\n1 -- 0\n", "duplicate edge"),
    ("tree unrooted n=3\n0 -- 1\n1 -- 2\n2 -- 0\n", "cycle"),
    ("tree unrooted n=4\n0 -- 1\n2 -- 3\n", "disconnected"),
    ("tree unrooted n=2\n0 -> 1\n", "arrow"),
    ("tree unrooted n=2\n0 -- 5\n", "outside"),
    ("tree unrooted n=5 max_degree=3\n0 -- 1, 0 -- 2, 0 -- 3, 0 -- 4\n", "degree bound"),
    ("tree rooted n=2\n1 => 0\n", "cannot parse"),
])
def test_tree_errors(text, needle):
    with pytest.raises(ParseError) as exc:
        parse_tree(text)
    assert needle in str(exc.value)


def test_multiple_roots():
    # two components that are each rooted are caught as multiple roots
    with pytest.raises(ParseError) as exc:
        parse_tree("tree rooted n=4\n1 -> 0\n3 -> 2\n")
    assert "multiple roots" in str(exc.value)


# labelings

def test_labeling_round_trip_unrooted():
    p = parse_problem(TWO_COLORING)
    tree = complete_tree("unrooted", 3, 1, starred=True)
    lab = Labeling("unrooted", p.names)
    for v in range(tree.n):
        for u in tree.adj[v]:
            lab[(v, u)] = 0 if v == 0 else 1
    text = serialize_labeling(lab, tree)
    assert parse_labeling(text, p, tree) == lab


def test_labeling_errors():
    p = parse_problem(INTRO)
    tree = complete_tree("rooted", 2, 1)
    with pytest.raises(ParseError):
        parse_labeling("0 9\n", p, tree)
    with pytest.raises(ParseError):
        parse_labeling("0 1\n0 2\n", p, tree)
    with pytest.raises(ParseError):
        parse_labeling("7 1\n", p, tree)


def test_decomposition_dump_round_trip():
    tree = complete_tree("rooted", 2, 3)
    dec = decompose_rooted(tree, 1, 2)
    rows = parse_decomposition_dump(serialize_decomposition(dec))
    assert [(tag, idx) for _, tag, idx, _ in rows] == list(dec.layer)
    assert [v for v, *_ in rows] == list(range(tree.n))
