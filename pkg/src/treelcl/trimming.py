"""The trim operator as a greatest-fixpoint computation over label sets."""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Tuple

from .problem import LabelMultiset, RootedProblem, UnrootedProblem, labels_of


@dataclass(frozen=True)
class TrimTrace:
    # ends with two equal entries, or with the empty set
    sigma_sequence: Tuple[FrozenSet[int], ...]
    fixpoint: FrozenSet[int]
    surviving: FrozenSet


def trim_unrooted(problem: UnrootedProblem, S: Iterable[LabelMultiset]):
    """Keep the configurations usable at the root of arbitrarily tall
    complete trees labeled from S."""
    S = sorted(frozenset(LabelMultiset(c) for c in S))
    partners = problem.partners
    current = labels_of(S)
    seq: List[FrozenSet[int]] = [current]

    def supported(label, pool):
        return not partners[label].isdisjoint(pool)

    while True:
        nxt = set()
        for c in S:
            for sigma in set(c):
                if sigma in current and sigma not in nxt:
                    rest = c.remove_one(sigma)
                    if all(supported(a, current) for a in rest):
                        nxt.add(sigma)
        nxt = frozenset(nxt)
        if nxt == current or not nxt:
            seq.append(nxt)
            current = nxt
            break
        seq.append(nxt)
        current = nxt
    kept = frozenset(c for c in S if all(supported(a, current) for a in c))
    return kept, TrimTrace(tuple(seq), current, kept)


def trim_rooted(problem: RootedProblem, labels: Iterable[int]):
    allowed = frozenset(labels)
    configs = [(lab, ch) for lab, ch in sorted(problem.configs)
               if lab in allowed and allowed.issuperset(ch)]
    current = allowed
    seq: List[FrozenSet[int]] = [current]
    while True:
        nxt = frozenset(lab for lab, ch in configs
                        if lab in current and current.issuperset(ch))
        seq.append(nxt)
        if nxt == current or not nxt:
            current = nxt
            break
        current = nxt
    return current, TrimTrace(tuple(seq), current, current)
