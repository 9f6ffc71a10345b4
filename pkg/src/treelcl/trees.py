"""Tree instances: the Tree type, complete trees, hairy paths, random
regular trees and the lower-bound gadget trees."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple


class TreeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Tree:
    kind: str  # "rooted" | "unrooted"
    n: int
    adj: Tuple[Tuple[int, ...], ...]
    parent: Optional[Tuple[int, ...]] = None  # rooted only, -1 at the root
    layer: Optional[Tuple[Optional[Tuple[str, int]], ...]] = None
    role: Optional[Tuple[Optional[str], ...]] = None

    @classmethod
    def from_edges(cls, kind: str, n: int, edges, max_degree: Optional[int] = None,
                   layer=None, role=None) -> "Tree":
        """Build and validate. Rooted edges are (child, parent) pairs."""
        if kind not in ("rooted", "unrooted"):
            raise TreeError(f"unknown tree kind {kind!r}")
        if n < 1:
            raise TreeError("a tree needs at least one node")
        adj: List[List[int]] = [[] for _ in range(n)]
        seen = set()
        parent = [-1] * n if kind == "rooted" else None
        uf = list(range(n))

        def find(x):
            while uf[x] != x:
                uf[x] = uf[uf[x]]
                x = uf[x]
            return x

        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise TreeError(f"edge ({u},{v}) references a node outside 0..{n - 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise TreeError(f"duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
            ru, rv = find(u), find(v)
            if ru == rv:
                raise TreeError(f"cycle detected at edge {u}-{v}")
            uf[ru] = rv
            adj[u].append(v)
            adj[v].append(u)
            if parent is not None:
                if parent[u] != -1:
                    raise TreeError(f"node {u} has outdegree > 1")
                parent[u] = v
        if parent is not None:
            roots = [v for v in range(n) if parent[v] == -1]
            if len(roots) > 1:
                raise TreeError(f"multiple roots: {roots[:5]}")
        if len(seen) != n - 1:
            raise TreeError("disconnected")
        tree = cls(kind, n, tuple(tuple(sorted(a)) for a in adj),
                   tuple(parent) if parent is not None else None,
                   tuple(layer) if layer is not None else None,
                   tuple(role) if role is not None else None)
        if max_degree is not None:
            for v in range(n):
                d = tree.indegree(v) if kind == "rooted" else len(tree.adj[v])
                if d > max_degree:
                    raise TreeError(f"degree bound exceeded at node {v}: {d} > {max_degree}")
        if layer is not None and len(tree.layer) != n:
            raise TreeError("layer annotations must cover every node")
        return tree

    @cached_property
    def children(self) -> Tuple[Tuple[int, ...], ...]:
        if self.parent is None:
            raise TreeError("children() is only defined for rooted trees")
        ch: List[List[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return tuple(tuple(c) for c in ch)

    @property
    def root(self) -> int:
        if self.parent is None:
            return 0
        return self.parent.index(-1)

    def indegree(self, v: int) -> int:
        return len(self.children[v])

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> List[Tuple[int, int]]:
        if self.parent is not None:
            return [(v, p) for v, p in enumerate(self.parent) if p >= 0]
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def top_down(self) -> List[int]:
        """BFS order from the root (node 0 for unrooted trees)."""
        order = [self.root]
        seen = [False] * self.n
        seen[self.root] = True
        for v in order:
            for u in self.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    order.append(u)
        return order


class _Builder:
    """Incremental construction with optional annotations."""

    def __init__(self, kind: str):
        self.kind = kind
        self.edges: List[Tuple[int, int]] = []
        self.layer: List[Optional[Tuple[str, int]]] = []
        self.role: List[Optional[str]] = []

    def node(self, layer=None, role=None) -> int:
        self.layer.append(layer)
        self.role.append(role)
        return len(self.layer) - 1

    def link(self, child: int, parent: int):
        self.edges.append((child, parent))

    def build(self, annotate: bool) -> Tree:
        n = len(self.layer)
        return Tree.from_edges(self.kind, n, self.edges,
                               layer=self.layer if annotate else None,
                               role=self.role if annotate else None)


def _grow_complete(b: _Builder, top: int, branching: int, height: int, rest: int, layer=None):
    """Append levels below `top`; `top` gets `branching` children, deeper nodes `rest`."""
    frontier = [top]
    for depth in range(height):
        nxt = []
        k = branching if depth == 0 else rest
        for v in frontier:
            for _ in range(k):
                c = b.node(layer)
                b.link(c, v)
                nxt.append(c)
        frontier = nxt
    return frontier


def complete_tree(kind: str, degree: int, height: int, starred: bool = False) -> Tree:
    if height < 0:
        raise ValueError("height must be >= 0")
    if kind == "rooted":
        if starred:
            raise ValueError("rooted complete trees have no starred variant")
        b = _Builder("rooted")
        _grow_complete(b, b.node(), degree, height, degree)
        return b.build(False)
    b = _Builder("unrooted")
    _grow_complete(b, b.node(), degree if starred else degree - 1, height, degree - 1)
    return b.build(False)


def hairy_path(k: int, delta: int) -> Tree:
    if k < 1 or delta < 3:
        raise ValueError("hairy paths need k >= 1 and delta >= 3")
    b = _Builder("unrooted")
    path = [b.node() for _ in range(k + 1)]
    for a, c in zip(path, path[1:]):
        b.link(c, a)
    for i, v in enumerate(path):
        deg = (i > 0) + (i < k)
        for _ in range(delta - deg):
            b.link(b.node(), v)
    return b.build(False)


def random_regular_tree(n_target: int, kind: str, degree: int, seed: int,
                        path_bias: float = 0.0) -> Tree:
    """Grow by expanding random leaves to full degree.

    With probability `path_bias` the most recently created leaf is expanded
    instead, which produces long hairy paths.
    """
    if n_target < 1:
        raise ValueError("n_target must be >= 1")
    rng = random.Random(seed)
    b = _Builder(kind)
    root = b.node()
    step = degree - 1 if kind == "unrooted" else degree
    n = 1
    if degree < 1 or 1 + degree > n_target:
        return b.build(False)
    leaves = []
    for _ in range(degree):
        c = b.node()
        b.link(c, root)
        leaves.append(c)
    n += degree
    while step >= 1 and n + step <= n_target and leaves:
        if path_bias and rng.random() < path_bias:
            idx = len(leaves) - 1 - rng.randrange(min(step, len(leaves)))
        else:
            idx = rng.randrange(len(leaves))
        v = leaves[idx]
        leaves[idx] = leaves[-1]
        leaves.pop()
        for _ in range(step):
            c = b.node()
            b.link(c, v)
            leaves.append(c)
        n += step
    return b.build(False)


def random_tree(n: int, kind: str, max_degree: int, seed: int) -> Tree:
    """Random recursive tree with bounded (in)degree; not necessarily regular."""
    rng = random.Random(seed)
    b = _Builder(kind)
    b.node()
    load = [0]
    open_nodes = [0]
    for v in range(1, n):
        b.node()
        idx = rng.randrange(len(open_nodes))
        p = open_nodes[idx]
        b.link(v, p)
        load[p] += 1
        load.append(1 if kind == "unrooted" else 0)
        cap = max_degree
        if load[p] >= cap:
            open_nodes[idx] = open_nodes[-1]
            open_nodes.pop()
        if load[v] < cap:
            open_nodes.append(v)
        if not open_nodes:
            break
    return b.build(False)


def default_path_length(t: int, alphabet_size: int) -> int:
    return 10 * t + alphabet_size ** 2 + 10


def _role(j: int, s: int, t: int) -> str:
    if j <= t:
        return "front"
    if j <= s - t:
        return "central"
    return "rear"


def lower_bound_tree_unrooted(gamma_hat: int, k: int, t: int, delta: int = 3,
                              alphabet_size: int = 2, s: Optional[int] = None) -> Tree:
    """The main unrooted lower-bound graph G*_{R,k+1}."""
    if k < 1 or t < 1:
        raise ValueError("k and t must be >= 1")
    if delta < 3:
        raise ValueError("delta must be >= 3")
    if s is None:
        s = default_path_length(t, alphabet_size)
    b = _Builder("unrooted")

    def rake_gadget(i: int, top: Optional[int], starred: bool = False) -> int:
        z = b.node(("R", i))
        if top is not None:
            b.link(z, top)
        leaves = _grow_complete(b, z, delta if starred else delta - 1, gamma_hat,
                                delta - 1, ("R", i))
        if i >= 2:
            for leaf in leaves:
                for _ in range(delta - 1):
                    compress_gadget(i - 1, leaf)
        return z

    def compress_gadget(i: int, top: int):
        prev = top
        for j in range(1, s + 1):
            v = b.node(("C", i), _role(j, s, t))
            b.link(v, prev)
            for _ in range(delta - 2 if j < s else delta - 1):
                rake_gadget(i, v)
            prev = v

    rake_gadget(k + 1, None, starred=True)
    return b.build(True)


def lower_bound_tree_rooted(k: int, t: int, delta: int = 2, gamma_hat: int = 1,
                            alphabet_size: int = 2, s: Optional[int] = None) -> Tree:
    """The chained rooted lower-bound graph; all indegrees are 0 or delta."""
    if k < 1 or t < 1 or delta < 1:
        raise ValueError("k, t, delta must be >= 1")
    if s is None:
        s = default_path_length(t, alphabet_size)
    b = _Builder("rooted")

    def rake_gadget(i: int, parent: Optional[int]) -> int:
        z = b.node(("R", i))
        if parent is not None:
            b.link(z, parent)
        leaves = _grow_complete(b, z, delta, gamma_hat, delta, ("R", i))
        if i >= 2:
            for leaf in leaves:
                for _ in range(delta):
                    compress_gadget(i - 1, leaf, full=True)
        return z

    def compress_gadget(i: int, parent: Optional[int], full: bool) -> Tuple[int, int]:
        first = prev = None
        for j in range(1, s + 1):
            v = b.node(("C", i), _role(j, s, t))
            if prev is None:
                first = v
                if parent is not None:
                    b.link(v, parent)
            else:
                b.link(v, prev)
            copies = delta - 1 if (j < s or not full) else delta
            for _ in range(copies):
                rake_gadget(i, v)
            prev = v
        return first, prev

    tail = None
    for i in range(1, k + 1):
        _, tail = compress_gadget(i, tail, full=False)
    rake_gadget(k + 1, tail)
    return b.build(True)


def degree_sequence(tree: Tree) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for v in range(tree.n):
        d = tree.degree(v)
        out[d] = out.get(d, 0) + 1
    return out
