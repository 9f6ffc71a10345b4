"""Problem model for LCLs on regular trees.

Labels are interned to dense integer ids; multisets are canonical sorted
tuples so equality and ordering are decidable without hashing unordered data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Sequence, Tuple


class InvalidArityError(ValueError):
    pass


class LabelMultiset(tuple):
    """A multiset of label ids stored as a sorted tuple."""

    def __new__(cls, entries: Iterable[int] = ()):
        return super().__new__(cls, sorted(entries))

    @property
    def arity(self) -> int:
        return len(self)

    def remove_one(self, label: int) -> "LabelMultiset":
        items = list(self)
        items.remove(label)
        return LabelMultiset(items)

    def __repr__(self):
        return "{" + ",".join(map(str, self)) + "}"


def canonicalize(multiset: Iterable[int]) -> LabelMultiset:
    return LabelMultiset(multiset)


def sub_multisets_of_size_2(config: Sequence[int]) -> FrozenSet[LabelMultiset]:
    if len(config) < 2:
        raise InvalidArityError(f"need arity >= 2, got {len(config)}")
    return frozenset(LabelMultiset(p) for p in combinations(sorted(config), 2))


def is_sub_multiset(small: Sequence[int], big: Sequence[int]) -> bool:
    rest = list(big)
    for x in small:
        if x not in rest:
            return False
        rest.remove(x)
    return True


@dataclass(frozen=True)
class Label:
    id: int
    name: str


class RootedConfig(NamedTuple):
    label: int
    children: LabelMultiset

    def __repr__(self):
        return f"({self.label} : {' '.join(map(str, self.children))})"


def _alphabet(names: Iterable) -> Tuple[Label, ...]:
    out = []
    for i, x in enumerate(names):
        out.append(x if isinstance(x, Label) else Label(i, str(x)))
    return tuple(out)


@dataclass(frozen=True)
class UnrootedProblem:
    delta: int
    alphabet: Tuple[Label, ...]
    node_configs: FrozenSet[LabelMultiset]
    edge_configs: FrozenSet[LabelMultiset]
    kind: str = field(default="unrooted", init=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alphabet(self.alphabet))
        object.__setattr__(self, "node_configs",
                           frozenset(LabelMultiset(c) for c in self.node_configs))
        object.__setattr__(self, "edge_configs",
                           frozenset(LabelMultiset(c) for c in self.edge_configs))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(x.name for x in self.alphabet)

    @cached_property
    def partners(self) -> Dict[int, FrozenSet[int]]:
        """Edge-partner table: partners[a] = {b : {a,b} in E}."""
        table: Dict[int, set] = {i: set() for i in range(len(self.alphabet))}
        for a, b in self.edge_configs:
            table.setdefault(a, set()).add(b)
            table.setdefault(b, set()).add(a)
        return {k: frozenset(v) for k, v in table.items()}


@dataclass(frozen=True)
class RootedProblem:
    delta: int
    alphabet: Tuple[Label, ...]
    configs: FrozenSet[RootedConfig]
    kind: str = field(default="rooted", init=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alphabet(self.alphabet))
        object.__setattr__(self, "configs", frozenset(
            RootedConfig(lab, LabelMultiset(ch)) for lab, ch in self.configs))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(x.name for x in self.alphabet)

    @cached_property
    def by_label(self) -> Dict[int, List[LabelMultiset]]:
        table: Dict[int, List[LabelMultiset]] = {}
        for lab, ch in sorted(self.configs):
            table.setdefault(lab, []).append(ch)
        return table


Problem = UnrootedProblem | RootedProblem


def validate_problem(problem) -> List[str]:
    out = []
    n = len(problem.alphabet)
    names = [x.name for x in problem.alphabet]
    if len(set(names)) != len(names):
        out.append("duplicate label names in alphabet")
    for i, x in enumerate(problem.alphabet):
        if x.id != i:
            out.append(f"label {x.name!r} has id {x.id}, expected {i}")

    def bad_ids(ids):
        return [x for x in ids if not 0 <= x < n]

    if isinstance(problem, UnrootedProblem):
        if problem.delta < 2:
            out.append(f"delta must be >= 2 for unrooted problems, got {problem.delta}")
        for c in sorted(problem.node_configs):
            if len(c) != problem.delta:
                out.append(f"node config {c!r}: arity {len(c)} != delta {problem.delta}")
            if bad_ids(c):
                out.append(f"node config {c!r}: label ids {bad_ids(c)} outside alphabet")
        for c in sorted(problem.edge_configs):
            if len(c) != 2:
                out.append(f"edge config {c!r}: arity {len(c)} != 2")
            if bad_ids(c):
                out.append(f"edge config {c!r}: label ids {bad_ids(c)} outside alphabet")
    else:
        if problem.delta < 1:
            out.append(f"delta must be >= 1 for rooted problems, got {problem.delta}")
        for cfg in sorted(problem.configs):
            if len(cfg.children) != problem.delta:
                out.append(f"config {cfg!r}: {len(cfg.children)} children != delta {problem.delta}")
            ids = bad_ids((cfg.label,) + tuple(cfg.children))
            if ids:
                out.append(f"config {cfg!r}: label ids {ids} outside alphabet")
    return out


def relabel(problem, perm: Sequence[int]):
    """Apply the alphabet permutation old id -> perm[old id]."""
    inv = {new: old for old, new in enumerate(perm)}
    alphabet = [Label(i, problem.alphabet[inv[i]].name) for i in range(len(perm))]
    if isinstance(problem, UnrootedProblem):
        return UnrootedProblem(
            problem.delta, alphabet,
            frozenset(LabelMultiset(perm[x] for x in c) for c in problem.node_configs),
            frozenset(LabelMultiset(perm[x] for x in c) for c in problem.edge_configs))
    return RootedProblem(
        problem.delta, alphabet,
        frozenset(RootedConfig(perm[lab], LabelMultiset(perm[x] for x in ch))
                  for lab, ch in problem.configs))


def labels_of(configs: Iterable[Sequence[int]]) -> FrozenSet[int]:
    return frozenset(x for c in configs for x in c)
