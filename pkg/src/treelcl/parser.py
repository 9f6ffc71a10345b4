"""Text and JSON formats for problems, trees, labelings and decompositions."""
from __future__ import annotations

import json
import re
import warnings
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .problem import (LabelMultiset, RootedConfig, RootedProblem, UnrootedProblem,
                      validate_problem)
from .labeling import IncompleteLabelingError, Labeling
from .trees import Tree, TreeError


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DuplicateConfigWarning(UserWarning):
    pass


_HEADER = re.compile(r"^(rooted|unrooted)\s+delta\s*=\s*(\d+)$")
_LABELS = re.compile(r"^labels\s*=\s*(.*)$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _split_names(spec: str) -> List[str]:
    return [x for x in re.split(r"[,\s]+", spec) if x]


def _children(tokens: List[str], delta: int, names: Dict[str, int]) -> List[str]:
    # compact "1 : 12" notation when every label is a single character
    if (len(tokens) == 1 and delta > 1 and len(tokens[0]) == delta
            and tokens[0] not in names and all(len(x) == 1 for x in names)):
        return list(tokens[0])
    return tokens


def parse_problem(text: str):
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno) from None
        if not isinstance(doc, dict):
            raise ParseError("structured problem must be an object")
        return problem_from_json(doc)
    kind = delta = None
    names: Dict[str, int] = {}
    node_cfgs, edge_cfgs, rooted_cfgs = [], [], []
    seen = set()

    def lookup(tok, no):
        if tok not in names:
            raise ParseError(f"unknown label {tok!r}", no)
        return names[tok]

    def add(bucket, item, no):
        if item in seen:
            warnings.warn(f"line {no}: duplicate configuration ignored",
                          DuplicateConfigWarning, stacklevel=3)
            return
        seen.add(item)
        bucket.append(item[1])

    for no, line in _lines(text):
        if kind is None:
            m = _HEADER.match(line)
            if not m:
                raise ParseError("expected header 'rooted delta=<d>' or 'unrooted delta=<d>'", no)
            kind, delta = m.group(1), int(m.group(2))
            if kind == "unrooted" and delta < 2:
                raise ParseError("unrooted problems need delta >= 2", no)
            if kind == "rooted" and delta < 1:
                raise ParseError("rooted problems need delta >= 1", no)
            continue
        if not names:
            m = _LABELS.match(line)
            if not m:
                raise ParseError("expected 'labels = <name>,...'", no)
            for tok in _split_names(m.group(1)):
                if tok in names:
                    raise ParseError(f"duplicate label name {tok!r}", no)
                if tok in (":", "node", "edge") or ":" in tok:
                    raise ParseError(f"reserved label name {tok!r}", no)
                names[tok] = len(names)
            if not names:
                raise ParseError("empty alphabet", no)
            continue
        if ":" not in line:
            raise ParseError("expected '<head> : <labels>'", no)
        head, body = (x.strip() for x in line.split(":", 1))
        tokens = body.split()
        if kind == "unrooted":
            if head not in ("node", "edge"):
                raise ParseError(f"expected 'node' or 'edge', got {head!r}", no)
            arity = delta if head == "node" else 2
            tokens = _children(tokens, arity, names)
            if len(tokens) != arity:
                raise ParseError(f"arity mismatch: {head} config needs {arity} labels, got {len(tokens)}", no)
            ms = LabelMultiset(lookup(t, no) for t in tokens)
            add(node_cfgs if head == "node" else edge_cfgs, (head, ms), no)
        else:
            tokens = _children(tokens, delta, names)
            if len(tokens) != delta:
                raise ParseError(f"arity mismatch: expected {delta} children, got {len(tokens)}", no)
            cfg = RootedConfig(lookup(head, no), LabelMultiset(lookup(t, no) for t in tokens))
            add(rooted_cfgs, ("cfg", cfg), no)
    if kind is None:
        raise ParseError("empty problem document")
    if not names:
        raise ParseError("missing labels line")
    alphabet = list(names)
    if kind == "unrooted":
        problem = UnrootedProblem(delta, alphabet, frozenset(node_cfgs), frozenset(edge_cfgs))
    else:
        problem = RootedProblem(delta, alphabet, frozenset(rooted_cfgs))
    diags = validate_problem(problem)
    if diags:
        raise ParseError("; ".join(diags))
    return problem


def problem_from_json(doc: dict):
    try:
        kind, delta, labels = doc["kind"], int(doc["delta"]), [str(x) for x in doc["labels"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed structured problem: {e}") from None
    if len(set(labels)) != len(labels) or not labels:
        raise ParseError("labels must be non-empty and unique")
    names = {x: i for i, x in enumerate(labels)}

    def ids(seq, where):
        try:
            return LabelMultiset(names[str(x)] for x in seq)
        except KeyError as e:
            raise ParseError(f"unknown label {e.args[0]!r} in {where}") from None

    def dedup(items):
        out = []
        for x in items:
            if x in out:
                warnings.warn("duplicate configuration ignored", DuplicateConfigWarning, stacklevel=3)
            else:
                out.append(x)
        return out

    if kind == "unrooted":
        if delta < 2:
            raise ParseError("unrooted problems need delta >= 2")
        problem = UnrootedProblem(
            delta, labels,
            frozenset(dedup([ids(c, "node_configs") for c in doc.get("node_configs", [])])),
            frozenset(dedup([ids(c, "edge_configs") for c in doc.get("edge_configs", [])])))
    elif kind == "rooted":
        if delta < 1:
            raise ParseError("rooted problems need delta >= 1")
        cfgs = []
        for c in doc.get("configs", []):
            try:
                head = names[str(c["label"])]
            except KeyError as e:
                raise ParseError(f"unknown label {e.args[0]!r} in configs") from None
            cfgs.append(RootedConfig(head, ids(c["children"], "configs")))
        problem = RootedProblem(delta, labels, frozenset(dedup(cfgs)))
    else:
        raise ParseError(f"unknown problem kind {kind!r}")
    diags = validate_problem(problem)
    if diags:
        raise ParseError("; ".join(diags))
    return problem


def problem_to_json(problem) -> dict:
    names = problem.names
    doc = {"kind": problem.kind, "delta": problem.delta, "labels": list(names)}
    if problem.kind == "unrooted":
        doc["node_configs"] = [[names[x] for x in c] for c in sorted(problem.node_configs)]
        doc["edge_configs"] = [[names[x] for x in c] for c in sorted(problem.edge_configs)]
    else:
        doc["configs"] = [{"label": names[lab], "children": [names[x] for x in ch]}
                          for lab, ch in sorted(problem.configs)]
    return doc


def serialize_problem(problem, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(problem_to_json(problem), indent=2, ensure_ascii=False) + "\n"
    names = problem.names
    out = [f"{problem.kind} delta={problem.delta}", "labels = " + ",".join(names)]
    if problem.kind == "unrooted":
        out += ["node : " + " ".join(names[x] for x in c) for c in sorted(problem.node_configs)]
        out += ["edge : " + " ".join(names[x] for x in c) for c in sorted(problem.edge_configs)]
    else:
        out += [f"{names[lab]} : " + " ".join(names[x] for x in ch)
                for lab, ch in sorted(problem.configs)]
    return "\n".join(out) + "\n"


def load_problem(path):
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        try:
            return problem_from_json(json.loads(text))
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno) from None
    return parse_problem(text)


# trees

_TREE_HEADER = re.compile(r"^tree\s+(rooted|unrooted)\s+n\s*=\s*(\d+)(?:\s+(?:max_degree|delta)\s*=\s*(\d+))?$")
_EDGE = re.compile(r"^(\d+)\s*(->|--)\s*(\d+)$")
_ANNOT = re.compile(r"^(\d+)((?:\s+\w+=\S+)+)$")


def parse_tree(text: str) -> Tree:
    kind = None
    n = bound = None
    edges = []
    layer: Dict[int, Tuple[str, int]] = {}
    role: Dict[int, str] = {}
    for no, line in _lines(text):
        if kind is None:
            m = _TREE_HEADER.match(line)
            if not m:
                raise ParseError("expected header 'tree rooted|unrooted n=<count>'", no)
            kind, n = m.group(1), int(m.group(2))
            bound = int(m.group(3)) if m.group(3) else None
            continue
        m = _ANNOT.match(line)
        if m:
            v = int(m.group(1))
            for item in m.group(2).split():
                key, val = item.split("=", 1)
                if key == "layer":
                    tag, _, idx = val.partition(",")
                    if tag not in ("R", "C") or not idx.isdigit():
                        raise ParseError(f"bad layer annotation {val!r}", no)
                    layer[v] = (tag, int(idx))
                elif key == "role":
                    if val not in ("front", "central", "rear"):
                        raise ParseError(f"bad role {val!r}", no)
                    role[v] = val
                else:
                    raise ParseError(f"unknown annotation {key!r}", no)
            continue
        for part in line.split(","):
            part = part.strip()
            if not part:
                continue
            m = _EDGE.match(part)
            if not m:
                raise ParseError(f"cannot parse edge {part!r}", no)
            arrow = m.group(2)
            if (arrow == "->") != (kind == "rooted"):
                raise ParseError(f"edge {part!r} uses the wrong arrow for a {kind} tree", no)
            edges.append((int(m.group(1)), int(m.group(3))))
    if kind is None:
        raise ParseError("empty tree document")
    lay = rol = None
    if layer:
        if set(layer) != set(range(n)):
            raise ParseError("layer annotations must cover every node")
        lay = [layer[v] for v in range(n)]
        rol = [role.get(v) for v in range(n)]
    try:
        return Tree.from_edges(kind, n, edges, max_degree=bound, layer=lay, role=rol)
    except TreeError as e:
        raise ParseError(str(e)) from None


def serialize_tree(tree: Tree) -> str:
    arrow = "->" if tree.kind == "rooted" else "--"
    out = [f"tree {tree.kind} n={tree.n}"]
    out += [f"{u} {arrow} {v}" for u, v in tree.edges()]
    if tree.layer is not None:
        for v in range(tree.n):
            tag, idx = tree.layer[v]
            extra = f" role={tree.role[v]}" if tree.role and tree.role[v] else ""
            out.append(f"{v} layer={tag},{idx}{extra}")
    return "\n".join(out) + "\n"


# labelings

def serialize_labeling(labeling: Labeling, tree: Optional[Tree] = None) -> str:
    if tree is not None and not labeling.is_complete(tree):
        raise IncompleteLabelingError(f"missing {len(labeling.missing(tree))} entries")
    names = labeling.names
    out = []
    for key in sorted(labeling.values):
        lab = names[labeling.values[key]]
        if labeling.kind == "rooted":
            out.append(f"{key} {lab}")
        else:
            out.append(f"{key[0]} {key[1]} {lab}")
    return "\n".join(out) + ("\n" if out else "")


def parse_labeling(text: str, problem, tree: Optional[Tree] = None) -> Labeling:
    names = {x: i for i, x in enumerate(problem.names)}
    lab = Labeling(problem.kind, problem.names)
    width = 2 if problem.kind == "rooted" else 3
    for no, line in _lines(text):
        parts = line.split()
        if len(parts) != width:
            raise ParseError(f"expected {width} fields, got {len(parts)}", no)
        if parts[-1] not in names:
            raise ParseError(f"unknown label {parts[-1]!r}", no)
        try:
            key = int(parts[0]) if width == 2 else (int(parts[0]), int(parts[1]))
        except ValueError:
            raise ParseError("node ids must be integers", no) from None
        if key in lab.values:
            raise ParseError(f"duplicate entry for {key}", no)
        if tree is not None:
            ok = (0 <= key < tree.n) if width == 2 else (
                0 <= key[0] < tree.n and key[1] in tree.adj[key[0]])
            if not ok:
                raise ParseError(f"{key} is not a node/half-edge of the tree", no)
        lab.values[key] = names[parts[-1]]
    return lab


# decompositions

def serialize_decomposition(dec) -> str:
    out = [f"# gamma={dec.gamma} ell={dec.ell} L={dec.L}"]
    for v, (tag, idx) in enumerate(dec.layer):
        out.append(f"{v} {tag} {idx} {dec.component[v]}")
    return "\n".join(out) + "\n"


def parse_decomposition_dump(text: str) -> List[Tuple[int, str, int, Optional[int]]]:
    rows = []
    for no, line in _lines(text):
        parts = line.split()
        if len(parts) not in (3, 4) or parts[1] not in ("R", "C"):
            raise ParseError("expected '<id> <R|C> <layer> [component-id]'", no)
        comp = int(parts[3]) if len(parts) == 4 else None
        rows.append((int(parts[0]), parts[1], int(parts[2]), comp))
    return rows
