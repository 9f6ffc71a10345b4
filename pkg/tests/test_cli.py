import json

import pytest

from treelcl.cli import EXIT_INPUT, EXIT_OK, EXIT_UNSOLVABLE, main
from treelcl.parser import parse_tree

import problems as P

# the MIS path automaton written as a rooted delta=1 problem: (sigma : a) is the edge a -> sigma
MIS = """\
rooted delta=1
labels = 00,01,10
01 : 00
10 : 01
00 : 10
01 : 10
"""


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


@pytest.fixture(autouse=True)
def no_color(monkeypatch):
    monkeypatch.setenv("LCL_COLOR", "0")


def test_classify_intro(write, capsys):
    assert main(["classify", write("intro.txt", P.INTRO)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "depth: infinity" in out
    assert "class: O(log n)" in out


def test_classify_unsolvable(write, capsys):
    assert main(["classify", write("e.txt", P.EMPTY_ROOTED)]) == EXIT_UNSOLVABLE
    assert "unsolvable" in capsys.readouterr().out


def test_classify_two_coloring(write, capsys):
    assert main(["classify", write("ab.txt", P.AB), "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["class"] == "Θ(n)" and doc["depth"] == 1


def test_json_fields_and_stability(write, capsys):
    path = write("d3.txt", P.ROOTED_DEPTH3)
    outs = []
    for _ in range(2):
        assert main(["classify", path, "--json", "--stable", "--all-sequences"]) == EXIT_OK
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert {"tool", "version", "problem_digest", "kind", "depth", "class", "witness"} <= set(doc)
    assert "timing_ms" not in doc
    assert doc["depth"] == 3
    assert doc["witness"]["flexibility"] == [5, 4]
    assert doc["witness"]["ell"] == 5
    main(["classify", path, "--json"])
    assert "timing_ms" in json.loads(capsys.readouterr().out)


def test_json_infinite_depth(write, capsys):
    main(["classify", write("so.txt", P.SINKLESS), "--json", "--stable"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["depth"] == "infinity" and doc["class"] == "O(log n)"
    assert doc["witness"]["stabilized"] is True
    assert "not distinguished" in doc["note"]


def test_explain(write, capsys):
    assert main(["classify", write("u2.txt", P.UNROOTED_DEPTH2), "--explain"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "layer 1:" in out and "layer 2:" in out
    assert "flexible K=2" in out


def test_input_errors(write, capsys):
    assert main(["classify", write("bad.txt", "rooted delta=2\nlabels = a\na : q q\n")]) == EXIT_INPUT
    assert "unknown label" in capsys.readouterr().err
    assert main(["classify", "/nonexistent/file.txt"]) == EXIT_INPUT
    p = write("intro.txt", P.INTRO)
    assert main(["solve", p]) == EXIT_INPUT
    assert main(["solve", p, "--gen", "wobble:n=3"]) == EXIT_INPUT
    assert main(["solve", p, "--gen", "random"]) == EXIT_INPUT


@pytest.mark.parametrize("problem, gen", [
    (P.INTRO, "random:n=5000"),
    (P.SINKLESS, "random:n=5000,bias=0.5"),
    (P.AB, "complete:height=6"),
    (P.UNROOTED_DEPTH2, "hairy:k=40"),
    (P.ROOTED_DEPTH2, "lowerbound:k=2,t=1,s=8"),
])
def test_solve_verify_pipeline(write, tmp_path, capsys, problem, gen):
    p = write("p.txt", problem)
    lab, tree = str(tmp_path / "lab.txt"), str(tmp_path / "tree.txt")
    assert main(["solve", p, "--gen", gen, "--seed", "4", "--out", lab, "--tree-out", tree]) == EXIT_OK
    assert main(["verify", p, tree, lab]) == EXIT_OK
    assert capsys.readouterr().out.strip().endswith("ok")


def test_verify_reports_violations(write, capsys):
    p = write("intro.txt", P.INTRO)
    t = write("t.txt", "tree rooted n=3\n1 -> 0\n2 -> 0\n")
    assert main(["verify", p, t, write("ok.txt", "0 1\n1 1\n2 2\n")]) == EXIT_OK
    capsys.readouterr()
    assert main(["verify", p, t, write("bad.txt", "0 2\n1 1\n2 2\n")]) == EXIT_UNSOLVABLE
    out = capsys.readouterr().out
    assert out.startswith("node 0")
    assert main(["verify", p, t, write("short.txt", "0 1\n")]) == EXIT_INPUT


def test_solve_unsolvable(write):
    p = write("u.txt", P.UNSOLVABLE_UNROOTED)
    assert main(["solve", p, "--gen", "complete:height=2"]) == EXIT_UNSOLVABLE


def test_solve_tree_file(write, capsys):
    p = write("ab.txt", P.AB)
    t = write("t.txt", "tree rooted n=3\n1 -> 0\n2 -> 0\n")
    assert main(["solve", p, t]) == EXIT_OK
    lines = capsys.readouterr().out.split()
    assert len(lines) == 6


@pytest.mark.parametrize("argv, n", [
    (["gen", "complete", "--height", "0"], 1),
    (["gen", "complete", "--height", "2", "--starred"], 10),
    (["gen", "complete", "--kind", "rooted", "--degree", "2", "--height", "3"], 15),
    (["gen", "hairy", "--k", "1"], 6),
    (["gen", "hairy", "--k", "2"], 8),
    (["gen", "lowerbound", "--k", "1", "--t", "1", "--gamma", "2", "--s", "5"], 574),
])
def test_gen_sizes(capsys, argv, n):
    assert main(argv) == EXIT_OK
    assert parse_tree(capsys.readouterr().out).n == n


def test_gen_seeded(capsys):
    main(["gen", "random", "--n", "300", "--seed", "9"])
    a = capsys.readouterr().out
    main(["gen", "random", "--n", "300", "--seed", "9"])
    assert capsys.readouterr().out == a
    assert main(["gen", "hairy", "--k", "1", "--degree", "2"]) == EXIT_INPUT


def test_automaton_dot_for_mis(write, capsys):
    assert main(["automaton", write("mis.txt", MIS), "--dot"]) == EXIT_OK
    dot = capsys.readouterr().out
    assert dot.count("->") == 4
    states = {'"00"', '"01"', '"10"'}
    assert all(s in dot for s in states)
    assert "flexible K=5" in dot


def test_automaton_summary_and_layers(write, capsys):
    p = write("u2.txt", P.UNROOTED_DEPTH2)
    assert main(["automaton", p, "--set", "trim"]) == EXIT_OK
    assert "flexible K=2" in capsys.readouterr().out
    assert main(["automaton", p, "--set", "layer:2"]) == EXIT_OK
    assert main(["automaton", p, "--set", "layer:9"]) == EXIT_INPUT
    assert main(["automaton", p, "--set", "bogus"]) == EXIT_INPUT


def test_color_only_when_allowed(write, capsys, monkeypatch):
    p = write("intro.txt", P.INTRO)
    main(["classify", p])
    assert "\x1b[" not in capsys.readouterr().out
    monkeypatch.setenv("LCL_COLOR", "1")
    main(["classify", p])
    # captured output is not a terminal, so still plain
    assert "\x1b[" not in capsys.readouterr().out
