"""(gamma, ell, L) rake-and-compress decompositions, computed sequentially."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .trees import Tree


class DecompositionError(RuntimeError):
    pass


@dataclass
class Decomposition:
    kind: str
    gamma: int
    ell: int
    L: int
    layer: List[Tuple[str, int]]          # per node: ("R", i) or ("C", i)
    removed_in: List[int]                 # iteration in which the process removed the node
    component: List[int] = field(default_factory=list)
    roots: Dict[int, int] = field(default_factory=dict)                    # rake component -> z
    paths: Dict[int, List[int]] = field(default_factory=dict)              # compress component -> v_1..v_s
    attachments: Dict[int, Tuple[int, int]] = field(default_factory=dict)  # compress component -> (u, w)

    def members(self, tag: str, i: int) -> List[int]:
        return [v for v, t in enumerate(self.layer) if t == (tag, i)]


def rank(tag: Tuple[str, int]) -> int:
    kind, i = tag
    return 2 * (i - 1) + (kind == "C")


def split_path(path: List[int], ell: int) -> Tuple[List[List[int]], List[int]]:
    """Cut a path into pieces of [ell, 2ell] nodes separated by single nodes.

    Returns (pieces, separators); separators never include the endpoints.
    """
    m = len(path)
    if m <= 2 * ell:
        return [list(path)], []
    q = -(-(m + 1) // (2 * ell + 1))
    total = m - (q - 1)
    base, extra = divmod(total, q)
    pieces, seps, pos = [], [], 0
    for j in range(q):
        size = base + (1 if j < extra else 0)
        pieces.append(path[pos:pos + size])
        pos += size
        if j < q - 1:
            seps.append(path[pos])
            pos += 1
    return pieces, seps


def decompose_rooted(tree: Tree, gamma: int, ell: int) -> Decomposition:
    if tree.kind != "rooted":
        raise ValueError("decompose_rooted needs a rooted tree")
    if gamma < 1 or ell < 1:
        raise ValueError("gamma and ell must be >= 1")
    n = tree.n
    parent, children = tree.parent, tree.children
    alive = [True] * n
    alive_in = [len(c) for c in children]
    layer: List[Optional[Tuple[str, int]]] = [None] * n
    removed_in = [0] * n
    frontier = [v for v in range(n) if alive_in[v] == 0]
    live = list(range(n))
    remaining = n
    i = 0
    while remaining:
        i += 1
        for _ in range(gamma):
            batch, frontier = frontier, []
            for v in batch:
                alive[v] = False
                layer[v] = ("R", i)
                removed_in[v] = i
            remaining -= len(batch)
            for v in batch:
                p = parent[v]
                if p >= 0 and alive[p]:
                    alive_in[p] -= 1
                    if alive_in[p] == 0:
                        frontier.append(p)
            if not remaining:
                break
        if not remaining:
            break
        live = [v for v in live if alive[v]]

        def chainable(v):
            p = parent[v]
            return alive_in[v] == 1 and p >= 0 and alive[p]

        cand = [v for v in live if chainable(v)]
        is_cand = set(cand)
        for top in cand:
            if parent[top] in is_cand:
                continue
            path = [top]
            v = top
            while True:
                c = next(x for x in children[v] if alive[x])
                if c not in is_cand:
                    break
                path.append(c)
                v = c
            if len(path) < ell:
                continue
            _, seps = split_path(path, ell)
            seps = set(seps)
            for v in path:
                layer[v] = ("R", i + 1) if v in seps else ("C", i)
                removed_in[v] = i
            for v in path:
                alive[v] = False
            remaining -= len(path)
            u = parent[top]
            alive_in[u] -= 1
            if alive_in[u] == 0:
                frontier.append(u)
    dec = Decomposition("rooted", gamma, ell, i, layer, removed_in)
    annotate(tree, dec)
    return dec


def decompose_unrooted(tree: Tree, gamma: int, ell: int, check: bool = True) -> Decomposition:
    if tree.kind != "unrooted":
        raise ValueError("decompose_unrooted needs an unrooted tree")
    if gamma < 1 or ell < 1:
        raise ValueError("gamma and ell must be >= 1")
    n, adj = tree.n, tree.adj
    alive = [True] * n
    deg = [len(a) for a in adj]
    layer: List[Optional[Tuple[str, int]]] = [None] * n
    removed_in = [0] * n
    frontier = [v for v in range(n) if deg[v] <= 1]
    live = list(range(n))
    remaining = n
    i = 0

    def drop(v, tag):
        nonlocal remaining
        alive[v] = False
        layer[v] = tag
        removed_in[v] = i
        remaining -= 1

    while remaining:
        i += 1
        for _ in range(gamma):
            batch = sorted({v for v in frontier if alive[v] and deg[v] <= 1})
            frontier = []
            chosen = set()
            for v in batch:
                if deg[v] == 1:
                    x = next(u for u in adj[v] if alive[u])
                    if x in chosen:
                        # isolated edge: its partner goes in the next rake
                        frontier.append(v)
                        continue
                chosen.add(v)
            for v in chosen:
                drop(v, ("R", i))
            for v in chosen:
                for u in adj[v]:
                    if alive[u]:
                        deg[u] -= 1
                        if deg[u] <= 1:
                            frontier.append(u)
            if not remaining:
                break
        if not remaining:
            break
        live = [v for v in live if alive[v]]
        is_cand = {v for v in live if deg[v] == 2}
        seen = set()
        for start in sorted(is_cand):
            if start in seen:
                continue
            # walk to one end of the chain, then collect it in order
            prev, v = None, start
            while True:
                nxt = [u for u in adj[v] if alive[u] and u != prev and u in is_cand]
                if not nxt or nxt[0] == start:
                    break
                prev, v = v, nxt[0]
            path, prev = [v], None
            seen.add(v)
            while True:
                nxt = [u for u in adj[v] if alive[u] and u != prev and u in is_cand and u not in seen]
                if not nxt:
                    break
                prev, v = v, nxt[0]
                path.append(v)
                seen.add(v)
            if len(path) < ell:
                continue
            _, seps = split_path(path, ell)
            seps = set(seps)
            members = set(path)
            for v in path:
                drop(v, ("R", i + 1) if v in seps else ("C", i))
            for v in path:
                for u in adj[v]:
                    if alive[u] and u not in members:
                        deg[u] -= 1
                        if deg[u] <= 1:
                            frontier.append(u)
    dec = Decomposition("unrooted", gamma, ell, i, layer, removed_in)
    annotate(tree, dec)
    if check:
        diags = validate_decomposition(tree, dec)
        if diags:
            raise DecompositionError("; ".join(diags[:5]))
    return dec


def _components(tree: Tree, layer) -> List[int]:
    comp = [-1] * tree.n
    cid = 0
    for s in range(tree.n):
        if comp[s] >= 0:
            continue
        comp[s] = cid
        stack = [s]
        while stack:
            v = stack.pop()
            for u in tree.adj[v]:
                if comp[u] < 0 and layer[u] == layer[v]:
                    comp[u] = cid
                    stack.append(u)
        cid += 1
    return comp


def _order_path(tree: Tree, nodes: List[int]) -> List[int]:
    """Order the nodes of an induced path; rooted paths run top-down."""
    members = set(nodes)
    if tree.kind == "rooted":
        top = next(v for v in nodes if tree.parent[v] not in members)
        out = [top]
        while True:
            nxt = [c for c in tree.children[out[-1]] if c in members]
            if len(nxt) != 1:
                break
            out.append(nxt[0])
        return out
    ends = [v for v in nodes if sum(u in members for u in tree.adj[v]) <= 1]
    start = min(ends) if ends else min(nodes)
    out, prev = [start], None
    while True:
        nxt = [u for u in tree.adj[out[-1]] if u in members and u != prev]
        if not nxt:
            break
        prev = out[-1]
        out.append(nxt[0])
    return out


def annotate(tree: Tree, dec: Decomposition):
    """Fill component ids, rake roots, compress paths and attachments."""
    dec.component = _components(tree, dec.layer)
    groups: Dict[int, List[int]] = {}
    for v, c in enumerate(dec.component):
        groups.setdefault(c, []).append(v)
    dec.roots, dec.paths, dec.attachments = {}, {}, {}
    for c, nodes in groups.items():
        tag = dec.layer[nodes[0]]
        r = rank(tag)
        if tag[0] == "R":
            dec.roots[c] = _rake_root(tree, dec.layer, nodes, r)
        else:
            path = _order_path(tree, nodes)
            dec.paths[c] = path
            dec.attachments[c] = _attachments(tree, dec.layer, path, r)


def _higher(tree, layer, v, r, exclude=()):
    return [u for u in tree.adj[v] if rank(layer[u]) > r and u not in exclude]


def _rake_root(tree, layer, nodes, r) -> int:
    members = set(nodes)
    if tree.kind == "rooted":
        return next(v for v in nodes if tree.parent[v] not in members)
    with_higher = [v for v in nodes if _higher(tree, layer, v, r)]
    if with_higher:
        return with_higher[0]
    if len(nodes) == 1:
        return nodes[0]
    # a center lies in the middle of any diameter path
    a = _bfs(tree, nodes[0], members)[0]
    b, parent, _ = _bfs(tree, a, members)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    d = len(path) - 1
    return min(path[d // 2], path[(d + 1) // 2])


def _bfs(tree, z, members):
    """Farthest node from z (smallest id on ties), BFS parents, eccentricity."""
    dist = {z: 0}
    parent = {z: z}
    q = deque([z])
    while q:
        v = q.popleft()
        for u in tree.adj[v]:
            if u in members and u not in dist:
                dist[u] = dist[v] + 1
                parent[u] = v
                q.append(u)
    far = max(dist.values())
    return min(v for v, x in dist.items() if x == far), parent, far


def _ecc(tree, z, members) -> int:
    return _bfs(tree, z, members)[2]


def _attachments(tree, layer, path, r) -> Tuple[int, int]:
    first, last = path[0], path[-1]
    if tree.kind == "rooted":
        u = tree.parent[first]
        below = [c for c in tree.children[last] if rank(layer[c]) > r]
        return u, (below[0] if below else -1)
    hi_first = _higher(tree, layer, first, r)
    hi_last = _higher(tree, layer, last, r)
    if first == last:
        return (hi_first[0], hi_first[1]) if len(hi_first) >= 2 else (-1, -1)
    return (hi_first[0] if hi_first else -1, hi_last[0] if hi_last else -1)


def validate_decomposition(tree: Tree, dec: Decomposition) -> List[str]:
    out: List[str] = []
    n = tree.n
    if len(dec.layer) != n:
        return [f"assignment covers {len(dec.layer)} nodes, tree has {n}"]
    for v, tag in enumerate(dec.layer):
        if tag is None or tag[0] not in ("R", "C") or not 1 <= tag[1] <= dec.L:
            out.append(f"node {v}: invalid layer tag {tag}")
        elif tag[0] == "C" and tag[1] >= dec.L:
            out.append(f"node {v}: compress layer {tag[1]} at or above L={dec.L}")
    if out:
        return out
    layer = dec.layer
    comp = _components(tree, layer)
    groups: Dict[int, List[int]] = {}
    for v, c in enumerate(comp):
        groups.setdefault(c, []).append(v)
    rooted = tree.kind == "rooted"
    for c, nodes in sorted(groups.items()):
        tag = layer[nodes[0]]
        r = rank(tag)
        members = set(nodes)
        name = f"{tag[0]}{tag[1]} component at node {min(nodes)}"
        if tag[0] == "R":
            if rooted:
                for v in nodes:
                    bad = [u for u in tree.children[v] if rank(layer[u]) > r]
                    if bad:
                        out.append(f"{name}: node {v} has in-neighbor {bad[0]} in a higher layer")
                z = next(v for v in nodes if tree.parent[v] not in members)
            else:
                with_higher = [v for v in nodes if _higher(tree, layer, v, r)]
                if len(with_higher) > 1:
                    out.append(f"{name}: nodes {with_higher[:3]} all have higher-layer neighbors")
                for v in with_higher:
                    if len(_higher(tree, layer, v, r)) > 1:
                        out.append(f"{name}: node {v} has more than one higher-layer neighbor")
                z = _rake_root(tree, layer, nodes, r)
            height = _ecc(tree, z, members) if len(nodes) > 1 else 0
            if height > dec.gamma - 1:
                out.append(f"{name}: height {height} from root {z} exceeds gamma-1={dec.gamma - 1}")
            continue
        # compress component
        if any(sum(u in members for u in tree.adj[v]) > 2 for v in nodes):
            out.append(f"{name}: not a path")
            continue
        path = _order_path(tree, nodes)
        if len(path) != len(nodes):
            out.append(f"{name}: not a directed path")
            continue
        s = len(path)
        if not dec.ell <= s <= 2 * dec.ell:
            out.append(f"{name}: path has {s} nodes, outside [{dec.ell},{2 * dec.ell}]")
        if rooted:
            first, last = path[0], path[-1]
            u = tree.parent[first]
            if u < 0 or rank(layer[u]) <= r:
                out.append(f"{name}: top node {first} lacks a higher-layer out-neighbor")
            below = [x for x in tree.children[last] if rank(layer[x]) > r]
            if len(below) != 1:
                out.append(f"{name}: bottom node {last} has {len(below)} higher-layer in-neighbors, need 1")
            for v in path:
                extra = [x for x in tree.children[v] if rank(layer[x]) > r and not (v == last and x in below[:1])]
                if extra:
                    out.append(f"{name}: node {v} has extra higher-layer neighbor {extra[0]}")
        else:
            if s == 1:
                need = {path[0]: 2}
            else:
                need = {path[0]: 1, path[-1]: 1}
            for v in path:
                got = len(_higher(tree, layer, v, r))
                if got != need.get(v, 0):
                    out.append(f"{name}: node {v} has {got} higher-layer neighbors, expected {need.get(v, 0)}")
    return out


def choose_parameters(n: int, k, ell: int = 1) -> Tuple[int, int]:
    """Finite k: smallest gamma with n(2l/(gamma+2l))^(k-1) <= gamma, L=k.
    k=None or inf: gamma=1 and the smallest such L."""
    if n < 1:
        raise ValueError("n must be >= 1")
    two_l = 2 * ell
    if k is None or k == math.inf or k == "log":
        L = 1
        while n * two_l ** (L - 1) > (1 + two_l) ** (L - 1):
            L += 1
        return 1, L
    k = int(k)
    if k < 1:
        raise ValueError("k must be >= 1")

    def ok(g):
        return n * two_l ** (k - 1) <= g * (g + two_l) ** (k - 1)

    lo, hi = 1, n
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo, k
