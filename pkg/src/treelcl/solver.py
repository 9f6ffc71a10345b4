"""Labeling validation, the certified layer-by-layer solver and a
brute-force oracle."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .automaton import build_unrooted_automaton, component_states, restricted_configs
from .classifier import GoodSequence
from .decomposition import Decomposition, choose_parameters, decompose_rooted, decompose_unrooted, rank
from .labeling import IncompleteLabelingError, Labeling
from .problem import LabelMultiset, RootedProblem, UnrootedProblem, is_sub_multiset
from .trees import Tree


class IncompatibleDegreeError(ValueError):
    pass


class CompletionError(RuntimeError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Violation:
    where: str  # "node" or "edge"
    at: Tuple[int, ...]
    detail: str

    def __str__(self):
        return f"{self.where} {' '.join(map(str, self.at))} {self.detail}"


def _fmt(names, labels) -> str:
    return "{" + ",".join(names[x] for x in labels) + "}"


def validate_labeling(problem, tree: Tree, labeling: Labeling) -> List[Violation]:
    if not labeling.is_complete(tree):
        raise IncompleteLabelingError(f"labeling misses {len(labeling.missing(tree))} entries")
    names = problem.names
    out = []
    if isinstance(problem, RootedProblem):
        for v in range(tree.n):
            ch = tree.children[v]
            if len(ch) != problem.delta:
                continue
            cfg = (labeling[v], LabelMultiset(labeling[c] for c in ch))
            if cfg not in problem.configs:
                out.append(Violation("node", (v,), f"({names[cfg[0]]} : {' '.join(names[x] for x in cfg[1])}) not allowed"))
        return out
    for v in range(tree.n):
        if tree.degree(v) == problem.delta:
            cfg = LabelMultiset(labeling[(v, u)] for u in tree.adj[v])
            if cfg not in problem.node_configs:
                out.append(Violation("node", (v,), f"{_fmt(names, cfg)} not allowed"))
    for u, v in tree.edges():
        cfg = LabelMultiset((labeling[(u, v)], labeling[(v, u)]))
        if cfg not in problem.edge_configs:
            out.append(Violation("edge", (u, v), f"{_fmt(names, cfg)} not allowed"))
    return out


def check_degrees(problem, tree: Tree):
    if problem.kind != tree.kind:
        raise IncompatibleDegreeError(f"{problem.kind} problem on a {tree.kind} tree")
    for v in range(tree.n):
        d = tree.indegree(v) if tree.kind == "rooted" else tree.degree(v)
        if d > problem.delta:
            raise IncompatibleDegreeError(f"node {v} has degree {d} > {problem.delta}")


# brute force

def _assignments(multiset: Sequence[int], slots: int):
    """Distinct orderings of `slots` elements taken from the multiset."""
    return sorted(set(permutations(multiset, slots)))


def brute_force_solve(problem, tree: Tree, budget: int = 10 ** 6, *,
                      node_configs=None, labels=None, root_config=None,
                      root_label=None) -> Optional[Labeling]:
    """Backtracking with subtree-support propagation. Returns a labeling,
    or None when no correct labeling exists; raises BudgetExceeded.

    Unrooted: degree-Delta nodes draw from `node_configs` (default all),
    and `root_config` pins node 0. Rooted: every label is drawn from
    `labels` (default all) and `root_label` pins the root.
    """
    check_degrees(problem, tree)
    steps = [0]

    def tick():
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExceeded(f"brute force exceeded {budget} steps")

    if isinstance(problem, RootedProblem):
        return _brute_rooted(problem, tree, tick, labels, root_label)
    return _brute_unrooted(problem, tree, tick, node_configs, root_config)


def _brute_rooted(problem, tree, tick, labels, root_label):
    allowed = sorted(set(range(len(problem.alphabet)) if labels is None else labels))
    delta = problem.delta
    configs: Dict[int, List[LabelMultiset]] = {}
    for lab, ch in sorted(problem.configs):
        if lab in allowed and set(ch) <= set(allowed):
            configs.setdefault(lab, []).append(ch)
    order = tree.top_down()
    support: Dict[int, Dict[int, Tuple]] = {}
    # support[v][sigma] = child labels in children order, for one valid choice
    for v in reversed(order):
        ch = tree.children[v]
        opts = {}
        for sigma in allowed:
            tick()
            if len(ch) == delta:
                for cfg in configs.get(sigma, ()):
                    hit = next((a for a in _assignments(cfg, delta)
                                if all(a[j] in support[c] for j, c in enumerate(ch))), None)
                    if hit is not None:
                        opts[sigma] = hit
                        break
            else:
                picks = []
                for c in ch:
                    if not support[c]:
                        break
                    picks.append(min(support[c]))
                else:
                    opts[sigma] = tuple(picks)
        support[v] = opts
    root = tree.root
    choices = [root_label] if root_label is not None else sorted(support[root])
    choices = [x for x in choices if x in support[root]]
    if not choices:
        return None
    lab = Labeling("rooted", problem.names)
    lab[root] = choices[0]
    for v in order:
        for c, a in zip(tree.children[v], support[v][lab[v]]):
            lab[c] = a
    return lab


def _brute_unrooted(problem, tree, tick, node_configs, root_config):
    delta = problem.delta
    allowed = sorted(problem.node_configs if node_configs is None else
                     {LabelMultiset(c) for c in node_configs})
    all_labels = range(len(problem.alphabet))
    partners = problem.partners
    order = tree.top_down()
    par = {order[0]: None}
    for v in order:
        for u in tree.adj[v]:
            if u not in par:
                par[u] = v
    # up[v][x]: labels for v's half-edges to its children when (v, parent) = x
    up: Dict[int, Dict[int, Tuple]] = {}
    # side[c]: labels y for the half-edge (parent, c) compatible with some x in up[c]
    side: Dict[int, Dict[int, int]] = {}
    root = order[0]
    root_choice = None

    def kids(v):
        return [u for u in tree.adj[v] if u != par[v]]

    def fill(v, top_label):
        ch = kids(v)
        if tree.degree(v) == delta:
            for cfg in allowed:
                if root_config is not None and v == root and cfg != LabelMultiset(root_config):
                    continue
                if top_label is not None and top_label not in cfg:
                    continue
                rest = cfg.remove_one(top_label) if top_label is not None else cfg
                for a in _assignments(rest, len(ch)):
                    tick()
                    if all(a[j] in side[c] for j, c in enumerate(ch)):
                        return a
            return None
        picks = []
        for c in ch:
            if not side[c]:
                return None
            picks.append(min(side[c]))
        return tuple(picks)

    for v in reversed(order):
        if v == root:
            continue
        up[v] = {}
        for x in all_labels:
            tick()
            a = fill(v, x)
            if a is not None:
                up[v][x] = a
        side[v] = {}
        for y in all_labels:
            for x in sorted(partners[y]):
                if x in up[v]:
                    side[v][y] = x
                    break
    root_choice = fill(root, None)
    if root_choice is None:
        return None
    lab = Labeling("unrooted", problem.names)
    for c, y in zip(kids(root), root_choice):
        lab[(root, c)] = y
    for v in order:
        if v == root:
            continue
        x = side[v][lab[(par[v], v)]]
        lab[(v, par[v])] = x
        for c, y in zip(kids(v), up[v][x]):
            lab[(v, c)] = y
    return lab


# certified solver

def choose_ell(sequence: GoodSequence, kind: str) -> int:
    if not sequence.flexibility:
        return 1
    if kind == "unrooted":
        return max(1, max(sequence.flexibility) - 1)
    return max(1, max(sequence.flexibility))


def certificate_decomposition(tree: Tree, sequence: GoodSequence, ell: int) -> Decomposition:
    decompose = decompose_rooted if tree.kind == "rooted" else decompose_unrooted
    if sequence.stabilized:
        return decompose(tree, 1, ell)
    k = sequence.length
    gamma, _ = choose_parameters(tree.n, k, ell)
    while True:
        dec = decompose(tree, gamma, ell)
        if dec.L <= k:
            return dec
        gamma = min(tree.n, gamma * 2)


@dataclass
class SolveResult:
    labeling: Labeling
    decomposition: Decomposition
    provenance: Dict[int, Tuple[str, int]]


def solve_with_certificate(problem, tree: Tree, sequence: GoodSequence,
                           decomposition: Optional[Decomposition] = None,
                           details: bool = False):
    check_degrees(problem, tree)
    ell = choose_ell(sequence, problem.kind)
    dec = decomposition or certificate_decomposition(tree, sequence, ell)
    if not sequence.stabilized and dec.L > sequence.length:
        raise ValueError(f"decomposition has {dec.L} layers, sequence only {sequence.length}")
    if isinstance(problem, RootedProblem):
        lab, prov = _RootedLabeler(problem, tree, sequence, dec).run()
    else:
        lab, prov = _UnrootedLabeler(problem, tree, sequence, dec).run()
    if details:
        return SolveResult(lab, dec, prov)
    return lab


def _layer_order(dec: Decomposition):
    """Components in processing order: R_L, C_{L-1}, R_{L-1}, ..., R_1."""
    groups: Dict[int, List[int]] = {}
    for v, c in enumerate(dec.component):
        groups.setdefault(c, []).append(v)
    tagged = sorted(groups.items(), key=lambda kv: (-rank(dec.layer[kv[1][0]]), kv[0]))
    return [(dec.layer[nodes[0]], c, nodes) for c, nodes in tagged]


class _RootedLabeler:
    def __init__(self, problem: RootedProblem, tree: Tree, seq: GoodSequence, dec: Decomposition):
        self.p, self.t, self.seq, self.dec = problem, tree, seq, dec
        self.lab = Labeling("rooted", problem.names)
        self.prov: Dict[int, Tuple[str, int]] = {}
        self._cfg_cache: Dict[FrozenSet[int], Dict[int, LabelMultiset]] = {}

    def smallest_configs(self, allowed: FrozenSet[int]) -> Dict[int, LabelMultiset]:
        """Per head label, the smallest config with head and children in `allowed`."""
        if allowed not in self._cfg_cache:
            best: Dict[int, LabelMultiset] = {}
            for lab, ch in restricted_configs(self.p, allowed):
                best.setdefault(lab, ch)
            self._cfg_cache[allowed] = best
        return self._cfg_cache[allowed]

    def assign_children(self, v: int, children_labels: Sequence[int], fixed_child=None):
        """Hand out a child multiset; `fixed_child` is (node, label) already decided."""
        rest = list(children_labels)
        kids = list(self.t.children[v])
        if fixed_child is not None:
            node, label = fixed_child
            rest.remove(label)
            kids.remove(node)
            self.lab[node] = label
        for c, a in zip(kids, rest):
            if c in self.lab.values:
                raise CompletionError(f"child {c} of {v} already labeled")
            self.lab[c] = a

    def run(self):
        for tag, c, nodes in _layer_order(self.dec):
            i = tag[1]
            if tag[0] == "R":
                self.rake(nodes, i)
            else:
                self.compress(self.dec.paths[c], i)
        return self.lab, self.prov

    def rake(self, nodes, i):
        allowed = frozenset(self.seq.trimmed_set(i))
        best = self.smallest_configs(allowed)
        members = set(nodes)
        top = next(v for v in nodes if self.t.parent[v] not in members)
        order = [top]
        for v in order:
            order.extend(c for c in self.t.children[v] if c in members)
        for v in order:
            if v not in self.lab.values:
                if not best:
                    raise CompletionError(f"no configuration inside layer R{i}")
                self.lab[v] = min(best)
            sigma = self.lab[v]
            if sigma not in best:
                raise CompletionError(f"label {sigma} at node {v} cannot be extended in R{i}")
            self.assign_children(v, best[sigma])
            self.prov[v] = ("R", i)

    def compress(self, path, i):
        allowed = frozenset(self.seq.trimmed_set(i))
        comp = frozenset(self.seq.flexible_set(i))
        t = self.t
        first, last = path[0], path[-1]
        members = set(path)
        below = [c for c in t.children[last] if c not in members and rank(self.dec.layer[c]) > rank(("C", i))]
        if first not in self.lab.values or not below or below[0] not in self.lab.values:
            raise CompletionError(f"compress path at {first} lacks labeled endpoints")
        w = below[0]
        alpha, beta = self.lab[first], self.lab[w]
        # walk beta -> sigma_s -> ... -> sigma_1 = alpha of length s, edges child -> parent
        configs = restricted_configs(self.p, allowed)
        edges: Dict[int, List[Tuple[int, LabelMultiset]]] = {}
        for lab, ch in configs:
            if lab not in comp:
                continue
            for a in set(ch):
                edges.setdefault(lab, []).append((a, ch))
        s = len(path)
        # feasible[j]: labels possible for position j (1..s+1) that can reach beta at s+1
        feasible = [set() for _ in range(s + 2)]
        feasible[s + 1] = {beta}
        for j in range(s, 0, -1):
            feasible[j] = {lab for lab, lst in edges.items()
                           if any(a in feasible[j + 1] for a, _ in lst)}
        if alpha not in feasible[1]:
            raise CompletionError(f"no walk of length {s} from {beta} to {alpha} in C{i}")
        sigma = alpha
        for j, v in enumerate(path, start=1):
            nxt_node = path[j] if j < s else w
            options = sorted((a, ch) for a, ch in edges[sigma] if a in feasible[j + 1])
            a, ch = options[0]
            self.lab[v] = sigma
            self.assign_children(v, ch, fixed_child=(nxt_node, a))
            self.prov[v] = ("C", i)
            sigma = a


class _UnrootedLabeler:
    def __init__(self, problem: UnrootedProblem, tree: Tree, seq: GoodSequence, dec: Decomposition):
        self.p, self.t, self.seq, self.dec = problem, tree, seq, dec
        self.lab = Labeling("unrooted", problem.names)
        self.config: Dict[int, LabelMultiset] = {}
        self.prov: Dict[int, Tuple[str, int]] = {}
        self._auto: Dict[int, tuple] = {}

    def configs_with(self, i: int, label: Optional[int], partner_of: Optional[int] = None):
        """Configs of V_i containing `label`, or containing a partner of `partner_of`."""
        pool = sorted(self.seq.trimmed_set(i))
        if partner_of is None:
            return [(c, label) for c in pool if label is None or label in c]
        ok = self.p.partners[partner_of]
        return [(c, a) for c in pool for a in sorted(set(c)) if a in ok]

    def place(self, v: int, cfg: LabelMultiset, fixed: Dict[int, int], tag):
        """Label every half-edge of v; `fixed` maps neighbor -> label already chosen."""
        rest = list(cfg)
        for u, a in fixed.items():
            rest.remove(a)
            self.lab[(v, u)] = a
        free = [u for u in self.t.adj[v] if u not in fixed]
        for u, a in zip(free, rest):
            self.lab[(v, u)] = a
        self.config[v] = cfg
        self.prov[v] = tag

    def run(self):
        for tag, c, nodes in _layer_order(self.dec):
            if tag[0] == "R":
                self.rake(c, nodes, tag[1])
            else:
                self.compress(c, tag[1])
        return self.lab, self.prov

    def rake(self, c, nodes, i):
        t = self.t
        members = set(nodes)
        z = self.dec.roots[c]
        order, parent = [z], {z: None}
        for v in order:
            for u in t.adj[v]:
                if u in members and u not in parent:
                    parent[u] = v
                    order.append(u)
        for v in order:
            ext = [u for u in t.adj[v] if (v, u) not in self.lab.values and (u, v) in self.lab.values]
            if len(ext) > 1:
                raise CompletionError(f"node {v} sees {len(ext)} labeled neighbors in R{i}")
            if ext:
                u = ext[0]
                opts = self.configs_with(i, None, partner_of=self.lab[(u, v)])
                if not opts:
                    raise CompletionError(f"no extension at node {v} in R{i}")
                cfg, a = opts[0]
                self.place(v, cfg, {u: a}, ("R", i))
            else:
                opts = self.configs_with(i, None)
                if not opts:
                    raise CompletionError(f"empty configuration set in R{i}")
                self.place(v, opts[0][0], {}, ("R", i))

    def automaton(self, i: int):
        key = min(i, self.seq.length) if self.seq.stabilized else i
        if key not in self._auto:
            D, aut = build_unrooted_automaton(self.p, self.seq.trimmed_set(i))
            self._auto[key] = (D, aut)
        return self._auto[key]

    def compress(self, c, i):
        path = self.dec.paths[c]
        u, w = self.dec.attachments[c]
        if u < 0 or w < 0 or u not in self.config or w not in self.config:
            raise CompletionError(f"compress path at {path[0]} lacks labeled endpoints")
        _, aut = self.automaton(i)
        comp = self.seq.flexible_set(i)
        # start state at u: (other label of u's config, label toward v_1)
        beta_u = self.lab[(u, path[0])]
        alpha_u = sorted(self.config[u].remove_one(beta_u))[0]
        alpha_w = self.lab[(w, path[-1])]
        beta_w = sorted(self.config[w].remove_one(alpha_w))[0]
        start, goal = (alpha_u, beta_u), (alpha_w, beta_w)
        states = component_states(aut, comp)
        inside = set(states)
        d = len(path) + 1
        if start not in inside or goal not in inside:
            raise CompletionError(f"endpoint states {start}, {goal} outside the flexible component")
        # backward feasibility over exact lengths
        feasible = [set() for _ in range(d + 1)]
        feasible[d] = {goal}
        for j in range(d - 1, -1, -1):
            feasible[j] = {s for s in states if any(x in feasible[j + 1] for x in aut.succ[s])}
        if start not in feasible[0]:
            raise CompletionError(f"no walk of length {d} from {start} to {goal} in C{i}")
        walk = [start]
        for j in range(1, d + 1):
            walk.append(min(x for x in aut.succ[walk[-1]] if x in feasible[j]))
        pool = sorted(self.seq.trimmed_set(i))
        prev = u
        for j, v in enumerate(path, start=1):
            a, b = walk[j]
            nxt = path[j] if j < len(path) else w
            cfg = next((cf for cf in pool if is_sub_multiset((a, b), cf)), None)
            if cfg is None:
                raise CompletionError(f"pair ({a},{b}) not inside any configuration of V{i}")
            self.place(v, cfg, {prev: a, nxt: b}, ("C", i))
            prev = v
