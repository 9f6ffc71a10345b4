"""Labelings of nodes (rooted) or half-edges (unrooted)."""
from __future__ import annotations

from typing import Optional

from .trees import Tree


class IncompleteLabelingError(ValueError):
    pass


class Labeling:
    """Rooted: node -> label id. Unrooted: half-edge (node, neighbor) -> label id."""

    def __init__(self, kind: str, names, values: Optional[dict] = None):
        self.kind = kind
        self.names = tuple(names)
        self.values = dict(values or {})

    def __getitem__(self, key):
        return self.values[key]

    def __setitem__(self, key, label: int):
        self.values[key] = label

    def __eq__(self, other):
        return (isinstance(other, Labeling) and self.kind == other.kind
                and self.names == other.names and self.values == other.values)

    def keys_for(self, tree: Tree):
        if self.kind == "rooted":
            return list(range(tree.n))
        return [(v, u) for v in range(tree.n) for u in tree.adj[v]]

    def is_complete(self, tree: Tree) -> bool:
        return all(k in self.values for k in self.keys_for(tree))

    def missing(self, tree: Tree):
        return [k for k in self.keys_for(tree) if k not in self.values]
