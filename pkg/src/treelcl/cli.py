"""Command-line interface: classify, solve, verify, gen, automaton."""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
import warnings

from . import __version__
from .automaton import build_rooted_automaton, build_unrooted_automaton, scc_report, to_dot
from .classifier import INFINITE, compute_depth, explain, first_trimmed
from .labeling import IncompleteLabelingError
from .parser import (ParseError, load_problem, parse_labeling, parse_tree, serialize_labeling,
                     serialize_problem, serialize_tree)
from .solver import (CompletionError, IncompatibleDegreeError, choose_ell, solve_with_certificate,
                     validate_labeling)
from .trees import (TreeError, complete_tree, hairy_path, lower_bound_tree_rooted,
                    lower_bound_tree_unrooted, random_regular_tree)

EXIT_OK, EXIT_INPUT, EXIT_UNSOLVABLE = 0, 1, 2


class InputError(Exception):
    pass


def _color(text: str, code: str, stream) -> str:
    if os.environ.get("LCL_COLOR", "1") == "0" or not getattr(stream, "isatty", lambda: False)():
        return text
    return f"\033[{code}m{text}\033[0m"


def _load_problem(path):
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            problem = load_problem(path)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        return problem
    except (OSError, ParseError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def _load_tree(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_tree(fh.read())
    except (OSError, ParseError, TreeError) as e:
        raise InputError(f"{path}: {e}") from None


def _names(problem, items):
    names = problem.names
    out = []
    for x in sorted(items):
        if isinstance(x, tuple):
            out.append(" ".join(names[y] for y in x))
        else:
            out.append(names[x])
    return out


def _digest(problem) -> str:
    return hashlib.sha256(serialize_problem(problem).encode()).hexdigest()


def _sequence_doc(problem, seq):
    if seq is None:
        return None
    return {
        "trimmed": [_names(problem, s) for s in seq.trimmed],
        "flexible": [_names(problem, s) for s in seq.flexible],
        "flexibility": list(seq.flexibility),
        "stabilized": seq.stabilized,
        "ell": choose_ell(seq, problem.kind),
    }


def verdict_document(problem, result, elapsed=None, all_sequences=False) -> dict:
    depth = result.depth
    doc = {
        "tool": "treelcl",
        "version": __version__,
        "problem_digest": _digest(problem),
        "kind": problem.kind,
        "depth": "infinity" if depth == INFINITE else int(depth),
        "class": result.verdict,
        "witness": _sequence_doc(problem, result.witness),
    }
    if depth == INFINITE:
        doc["note"] = "lower classes not distinguished"
    if all_sequences:
        doc["all_sequences"] = [_sequence_doc(problem, s) for s in result.all_maximal_sequences]
        doc["overflow"] = result.overflow
    if elapsed is not None:
        doc["timing_ms"] = round(elapsed * 1000, 3)
    return doc


def cmd_classify(args) -> int:
    problem = _load_problem(args.problem)
    t0 = time.perf_counter()
    result = compute_depth(problem)
    elapsed = time.perf_counter() - t0
    if args.json:
        doc = verdict_document(problem, result, None if args.stable else elapsed, args.all_sequences)
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        depth = "infinity" if result.depth == INFINITE else int(result.depth)
        code = "31" if result.depth == 0 else "32"
        print(f"depth: {depth}")
        print("class: " + _color(result.verdict, code, sys.stdout))
        if result.witness is not None:
            print("witness:")
            _print_sequence(problem, result.witness, "  ")
        if args.all_sequences:
            print(f"maximal sequences: {len(result.all_maximal_sequences)}"
                  + (" (truncated)" if result.overflow else ""))
            for k, seq in enumerate(result.all_maximal_sequences, 1):
                print(f"  [{k}]")
                _print_sequence(problem, seq, "    ")
    if args.explain:
        _print_explain(problem, result.witness)
    return EXIT_UNSOLVABLE if result.depth == 0 else EXIT_OK


def _print_sequence(problem, seq, indent):
    for i, t in enumerate(seq.trimmed, 1):
        print(f"{indent}trimmed {i}: " + "; ".join(_names(problem, t)))
        if i <= len(seq.flexible):
            print(f"{indent}flexible {i} (K={seq.flexibility[i - 1]}): "
                  + "; ".join(_names(problem, seq.flexible[i - 1])))
    if seq.stabilized:
        print(f"{indent}stabilized: the last pair repeats forever")


def _print_explain(problem, witness):
    for layer in explain(problem, witness):
        print(f"layer {layer.index}:")
        for j, sig in enumerate(layer.trim_trace.sigma_sequence, 1):
            print(f"  sigma_{j}: {{{', '.join(_names(problem, sig))}}}")
        print("  surviving: " + "; ".join(_names(problem, layer.trim_trace.surviving)))
        if not layer.scc.components:
            print("  components: none")
        for comp in layer.scc.components:
            tag = f"flexible K={comp.flexibility_index}" if comp.flexible else "inflexible"
            print(f"  component [{tag}]: " + "; ".join(_names(problem, comp.members)))


def _parse_gen_spec(spec: str):
    kind, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        params[key.strip()] = val.strip() if eq else "1"
    return kind.strip(), params


def _generate(gen_kind, params, problem_kind, degree):
    def num(key, default=None):
        if key not in params:
            if default is None:
                raise InputError(f"generator {gen_kind!r} needs parameter {key!r}")
            return default
        try:
            return int(params[key])
        except ValueError:
            raise InputError(f"parameter {key!r} must be an integer") from None

    try:
        if gen_kind == "complete":
            return complete_tree(problem_kind, degree, num("height"), bool(num("starred", 0)))
        if gen_kind == "hairy":
            if problem_kind != "unrooted":
                raise InputError("hairy paths are unrooted")
            return hairy_path(num("k"), degree)
        if gen_kind == "random":
            return random_regular_tree(num("n"), problem_kind, degree, num("seed", 0),
                                       float(params.get("bias", 0.0)))
        if gen_kind == "lowerbound":
            s = num("s", -1)
            s = None if s < 0 else s
            if problem_kind == "unrooted":
                return lower_bound_tree_unrooted(num("gamma", 2), num("k"), num("t"), degree,
                                                 num("alphabet", 2), s)
            return lower_bound_tree_rooted(num("k"), num("t"), degree, num("gamma", 1),
                                           num("alphabet", 2), s)
    except ValueError as e:
        raise InputError(str(e)) from None
    raise InputError(f"unknown generator {gen_kind!r}")


def cmd_solve(args) -> int:
    problem = _load_problem(args.problem)
    if (args.tree is None) == (args.gen is None):
        raise InputError("give exactly one of a tree file or --gen")
    if args.tree is not None:
        tree = _load_tree(args.tree)
    else:
        gen_kind, params = _parse_gen_spec(args.gen)
        if args.seed is not None:
            params.setdefault("seed", str(args.seed))
        tree = _generate(gen_kind, params, problem.kind, problem.delta)
        if args.tree_out:
            with open(args.tree_out, "w", encoding="utf-8") as fh:
                fh.write(serialize_tree(tree))
    result = compute_depth(problem)
    if result.depth == 0:
        print("unsolvable: no good sequence exists", file=sys.stderr)
        return EXIT_UNSOLVABLE
    try:
        labeling = solve_with_certificate(problem, tree, result.witness)
    except IncompatibleDegreeError as e:
        raise InputError(str(e)) from None
    text = serialize_labeling(labeling, tree)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    problem = _load_problem(args.problem)
    tree = _load_tree(args.tree)
    try:
        with open(args.labeling, encoding="utf-8") as fh:
            labeling = parse_labeling(fh.read(), problem, tree)
        violations = validate_labeling(problem, tree, labeling)
    except (OSError, ParseError, IncompleteLabelingError, IncompatibleDegreeError) as e:
        raise InputError(f"{args.labeling}: {e}") from None
    for v in violations:
        print(v)
    if violations:
        print(_color(f"{len(violations)} violations", "31", sys.stderr), file=sys.stderr)
        return EXIT_UNSOLVABLE
    print(_color("ok", "32", sys.stdout))
    return EXIT_OK


def cmd_gen(args) -> int:
    params = {k: str(v) for k, v in vars(args).items()
              if k in ("height", "k", "n", "t", "gamma", "s", "alphabet", "bias") and v is not None}
    if args.starred:
        params["starred"] = "1"
    params["seed"] = str(args.seed)
    tree = _generate(args.generator, params, args.kind, args.degree)
    sys.stdout.write(serialize_tree(tree))
    return EXIT_OK


def cmd_automaton(args) -> int:
    problem = _load_problem(args.problem)
    spec = args.set
    if spec == "all":
        current = (problem.node_configs if problem.kind == "unrooted"
                   else frozenset(range(len(problem.alphabet))))
    elif spec == "trim":
        current, _ = first_trimmed(problem)
    elif spec.startswith("layer:"):
        try:
            i = int(spec.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad layer spec {spec!r}") from None
        witness = compute_depth(problem).witness
        if witness is None or i < 1 or (i > witness.length and not witness.stabilized):
            raise InputError(f"witness has no trimmed set {i}")
        current = witness.trimmed_set(i)
    else:
        raise InputError(f"unknown set spec {spec!r} (use all, trim or layer:<i>)")
    if problem.kind == "unrooted":
        D, aut = build_unrooted_automaton(problem, current)
        report = scc_report(aut, D)
    else:
        aut = build_rooted_automaton(problem, current)
        report = scc_report(aut)
    if args.dot:
        sys.stdout.write(to_dot(aut, report, problem.names))
        return EXIT_OK
    print(f"states: {len(aut.states)}  edges: {len(aut.edges())}")
    for comp in report.components:
        tag = f"flexible K={comp.flexibility_index}" if comp.flexible else "inflexible"
        print(f"component [{tag}]: " + "; ".join(_names(problem, comp.members)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="treelcl", description="Classify and solve LCL problems on regular trees.")
    ap.add_argument("--version", action="version", version=f"treelcl {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="compute the depth and complexity class")
    p.add_argument("problem")
    p.add_argument("--json", action="store_true")
    p.add_argument("--all-sequences", action="store_true")
    p.add_argument("--explain", action="store_true")
    p.add_argument("--stable", action="store_true", help="omit timing from JSON output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="label a tree using the classification certificate")
    p.add_argument("problem")
    p.add_argument("tree", nargs="?")
    p.add_argument("--gen", help="generator spec, e.g. random:n=1000 or complete:height=4")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--tree-out", help="also write the generated tree")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a labeling")
    p.add_argument("problem")
    p.add_argument("tree")
    p.add_argument("labeling")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a tree")
    p.add_argument("generator", choices=["complete", "hairy", "random", "lowerbound"])
    p.add_argument("--kind", choices=["rooted", "unrooted"], default="unrooted")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--height", type=int)
    p.add_argument("--starred", action="store_true")
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--gamma", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--alphabet", type=int)
    p.add_argument("--bias", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("automaton", help="print the path-form automaton")
    p.add_argument("problem")
    p.add_argument("--set", default="all", help="all | trim | layer:<i>")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_automaton)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CompletionError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
