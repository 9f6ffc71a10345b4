"""Path-form automata, their strongly connected components and flexibility.

Reachability is done with Python ints as bit-sets over state indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from math import gcd
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from .problem import LabelMultiset, RootedProblem, UnrootedProblem, sub_multisets_of_size_2


class FlexibilityError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class FlexAutomaton:
    kind: str  # "unrooted": states are ordered label pairs; "rooted": states are labels
    states: Tuple[Hashable, ...]
    succ: Dict[Hashable, FrozenSet[Hashable]]
    origin: FrozenSet = frozenset()

    @classmethod
    def from_edges(cls, states, edges, kind: str = "rooted", origin=frozenset()):
        states = tuple(sorted(set(states)))
        succ = {s: set() for s in states}
        for a, b in edges:
            succ[a].add(b)
        return cls(kind, states, {s: frozenset(v) for s, v in succ.items()}, frozenset(origin))

    @cached_property
    def index(self) -> Dict[Hashable, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def succ_mask(self) -> List[int]:
        idx = self.index
        return [sum(1 << idx[t] for t in self.succ[s]) for s in self.states]

    def edges(self) -> List[Tuple[Hashable, Hashable]]:
        return [(s, t) for s in self.states for t in sorted(self.succ[s])]

    def step(self, mask: int) -> int:
        out = 0
        sm = self.succ_mask
        while mask:
            low = mask & -mask
            out |= sm[low.bit_length() - 1]
            mask ^= low
        return out

    @cached_property
    def reach(self) -> List[int]:
        """reach[i]: states reachable from state i by a walk of length >= 1."""
        out = []
        for i in range(len(self.states)):
            seen = 0
            frontier = self.succ_mask[i]
            while frontier:
                seen |= frontier
                frontier = self.step(frontier) & ~seen
            out.append(seen)
        return out

    def reaches(self, s, t) -> bool:
        return bool(self.reach[self.index[s]] >> self.index[t] & 1)

    def mask_of(self, states: Iterable) -> int:
        idx = self.index
        return sum(1 << idx[s] for s in set(states))

    def states_of(self, mask: int) -> List:
        return [s for i, s in enumerate(self.states) if mask >> i & 1]


def orientations(member) -> List[Tuple[int, int]]:
    a, b = member
    return [(a, b)] if a == b else [(a, b), (b, a)]


def build_unrooted_automaton(problem: UnrootedProblem, configs: Iterable[LabelMultiset]):
    configs = frozenset(LabelMultiset(c) for c in configs)
    D = frozenset(m for c in configs for m in sub_multisets_of_size_2(c))
    states = sorted({o for m in D for o in orientations(m)})
    by_first: Dict[int, List[Tuple[int, int]]] = {}
    for s in states:
        by_first.setdefault(s[0], []).append(s)
    partners = problem.partners
    edges = []
    for a, b in states:
        for c in sorted(partners.get(b, ())):
            for t in by_first.get(c, ()):
                edges.append(((a, b), t))
    return D, FlexAutomaton.from_edges(states, edges, "unrooted", configs)


def restricted_configs(problem: RootedProblem, labels: Iterable[int]):
    allowed = frozenset(labels)
    return [(lab, ch) for lab, ch in sorted(problem.configs)
            if lab in allowed and allowed.issuperset(ch)]


def build_rooted_automaton(problem: RootedProblem, labels: Iterable[int]) -> FlexAutomaton:
    labels = frozenset(labels)
    edges = {(a, lab) for lab, ch in restricted_configs(problem, labels) for a in ch}
    return FlexAutomaton.from_edges(labels, edges, "rooted", labels)


def scc_unrooted(D: Iterable[LabelMultiset], automaton: FlexAutomaton) -> List[FrozenSet[LabelMultiset]]:
    def related(m1, m2):
        return all(automaton.reaches(s, t) for s in orientations(m1) for t in orientations(m2))

    live = [m for m in sorted(D) if related(m, m)]
    classes = []
    done = set()
    for m in live:
        if m in done:
            continue
        cls = frozenset(x for x in live if x not in done and related(m, x) and related(x, m))
        done |= cls
        classes.append(cls)
    return classes


def scc_rooted(automaton: FlexAutomaton) -> List[FrozenSet]:
    idx = automaton.index
    reach = automaton.reach
    classes = []
    done = set()
    for s in automaton.states:
        i = idx[s]
        if s in done or not reach[i] >> i & 1:
            continue
        cls = frozenset(t for t in automaton.states_of(reach[i]) if automaton.reaches(t, s))
        done |= cls
        classes.append(cls)
    return classes


def component_states(automaton: FlexAutomaton, component) -> List:
    if automaton.kind == "unrooted":
        return sorted({o for m in component for o in orientations(m)})
    return sorted(component)


def return_lengths(automaton: FlexAutomaton, state, limit: int) -> List[int]:
    """Lengths k in 1..limit with a closed walk of length k at `state`."""
    i = automaton.index[state]
    cur = 1 << i
    out = []
    for k in range(1, limit + 1):
        cur = automaton.step(cur)
        if cur >> i & 1:
            out.append(k)
    return out


def cycle_gcd(automaton: FlexAutomaton, state, limit: Optional[int] = None) -> int:
    if limit is None:
        limit = 2 * len(automaton.states) - 1
    return reduce(gcd, return_lengths(automaton, state, limit), 0)


def is_flexible(automaton: FlexAutomaton, component) -> bool:
    rep = component_states(automaton, component)[0]
    return cycle_gcd(automaton, rep) == 1


def flexibility_index(automaton: FlexAutomaton, component) -> int:
    """Smallest K >= 1 such that every ordered pair of component states is
    joined, inside the component, by walks of every length >= K.

    If all pairs have a walk of length k >= 1 then every state has an
    in-component predecessor, so the property persists for k + 1. The first
    such k is therefore the answer.
    """
    states = component_states(automaton, component)
    m = len(states)
    bound = 2 * m * m + 2 * m
    idx = automaton.index
    inside = automaton.mask_of(states)
    cur = [1 << idx[s] for s in states]
    for k in range(1, bound + 1):
        cur = [automaton.step(c) & inside for c in cur]
        if all(c == inside for c in cur):
            # certificate for every longer length: each state has a predecessor inside
            if any(not any(automaton.succ_mask[idx[s]] >> idx[t] & 1 for s in states)
                   for t in states):
                raise FlexibilityError("component lost a predecessor; walk window broken")
            return k
    raise FlexibilityError(f"no flexibility index <= {bound} for component {sorted(component)}")


@dataclass(frozen=True)
class Component:
    members: FrozenSet
    flexible: bool
    flexibility_index: Optional[int]


@dataclass(frozen=True)
class SccReport:
    components: Tuple[Component, ...]

    @property
    def flexible(self) -> List[Component]:
        return [c for c in self.components if c.flexible]


def scc_report(automaton: FlexAutomaton, D=None) -> SccReport:
    if automaton.kind == "unrooted":
        classes = scc_unrooted(D, automaton)
    else:
        classes = scc_rooted(automaton)
    comps = []
    for cls in sorted(classes, key=lambda c: sorted(c)):
        flex = is_flexible(automaton, cls)
        comps.append(Component(cls, flex, flexibility_index(automaton, cls) if flex else None))
    return SccReport(tuple(comps))


def _state_name(state, names) -> str:
    if isinstance(state, tuple):
        return "|".join(names[x] if names else str(x) for x in state)
    return names[state] if names and isinstance(state, int) else str(state)


def to_dot(automaton: FlexAutomaton, report: Optional[SccReport] = None,
           names: Optional[Sequence[str]] = None) -> str:
    def q(s):
        return '"' + _state_name(s, names).replace('"', '\\"') + '"'

    out = ["digraph automaton {", "  rankdir=LR;"]
    placed = set()
    if report is not None:
        for i, comp in enumerate(report.components):
            if not comp.flexible:
                continue
            out.append(f"  subgraph cluster_{i} {{")
            out.append(f'    label="flexible K={comp.flexibility_index}";')
            for s in component_states(automaton, comp.members):
                out.append(f"    {q(s)};")
                placed.add(s)
            out.append("  }")
    for s in automaton.states:
        if s not in placed:
            out.append(f"  {q(s)};")
    for s, t in automaton.edges():
        out.append(f"  {q(s)} -> {q(t)};")
    out.append("}")
    return "\n".join(out) + "\n"
