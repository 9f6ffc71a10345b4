"""Good sequences and the depth of a problem."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Tuple

from .automaton import (SccReport, build_rooted_automaton, build_unrooted_automaton,
                        scc_report)
from .problem import LabelMultiset, UnrootedProblem, sub_multisets_of_size_2
from .trimming import TrimTrace, trim_rooted, trim_unrooted

INFINITE = math.inf


def restrict_unrooted(S: Iterable[LabelMultiset], D: Iterable[LabelMultiset]):
    D = frozenset(D)
    return frozenset(c for c in S if sub_multisets_of_size_2(c) <= D)


@dataclass(frozen=True)
class GoodSequence:
    kind: str
    trimmed: Tuple[FrozenSet, ...]   # V_1..V_k, or Sigma^R_1..Sigma^R_k
    flexible: Tuple[FrozenSet, ...]  # D_1..D_{k-1}, or Sigma^C_1..Sigma^C_{k-1}
    flexibility: Tuple[int, ...]
    stabilized: bool = False

    @property
    def length(self) -> int:
        return len(self.trimmed)

    @property
    def layers(self) -> List[FrozenSet]:
        out = []
        for i, t in enumerate(self.trimmed):
            out.append(t)
            if i < len(self.flexible):
                out.append(self.flexible[i])
        return out

    def trimmed_set(self, i: int) -> FrozenSet:
        """1-indexed; past the end a stabilized sequence repeats its fixed point."""
        if i <= len(self.trimmed):
            return self.trimmed[i - 1]
        if self.stabilized:
            return self.trimmed[-1]
        raise IndexError(f"sequence has only {len(self.trimmed)} trimmed sets")

    def flexible_set(self, i: int) -> FrozenSet:
        if i <= len(self.flexible):
            return self.flexible[i - 1]
        if self.stabilized:
            return self.flexible[-1]
        raise IndexError(f"sequence has only {len(self.flexible)} flexible sets")

    def sort_key(self):
        return tuple(tuple(sorted(x)) for x in self.layers)


@dataclass(frozen=True)
class DepthResult:
    depth: float  # 0, a positive int, or INFINITE
    witness: Optional[GoodSequence]
    all_maximal_sequences: Tuple[GoodSequence, ...]
    overflow: bool = False

    @property
    def verdict(self) -> str:
        return complexity_class(self.depth)


def complexity_class(depth) -> str:
    if depth == 0:
        return "unsolvable"
    if depth == INFINITE:
        return "O(log n)"
    if depth == 1:
        return "Θ(n)"
    return f"Θ(n^{{1/{depth}}})"


def _layer_step(problem, current):
    """Flexible SCCs of the automaton built from the current trimmed set."""
    if isinstance(problem, UnrootedProblem):
        D, aut = build_unrooted_automaton(problem, current)
        return scc_report(aut, D)
    return scc_report(build_rooted_automaton(problem, current))


def _descend(problem, current, comp_members):
    if isinstance(problem, UnrootedProblem):
        return trim_unrooted(problem, restrict_unrooted(current, comp_members))
    return trim_rooted(problem, comp_members)


def first_trimmed(problem):
    if isinstance(problem, UnrootedProblem):
        return trim_unrooted(problem, problem.node_configs)
    return trim_rooted(problem, range(len(problem.alphabet)))


def _search(problem, limit: Optional[int]):
    kind = problem.kind
    start, _ = first_trimmed(problem)
    found: dict = {}
    state = {"overflow": False, "best": None}
    if not start:
        return [], False, None

    def rank(seq):
        # stabilized beats finite, longer beats shorter, then smaller key
        return (not seq.stabilized, -seq.length, seq.sort_key())

    def record(seq):
        best = state["best"]
        if best is None or rank(seq) < rank(best):
            state["best"] = seq
        key = seq.sort_key() + (seq.stabilized,)
        if key in found:
            return
        if limit is not None and len(found) >= limit:
            state["overflow"] = True
            return
        found[key] = seq

    def dfs(trimmed, flexible, flex_idx):
        current = trimmed[-1]
        report = _layer_step(problem, current)
        ended = False
        for comp in report.flexible:
            nxt, _ = _descend(problem, current, comp.members)
            assert nxt <= current
            if not nxt:
                ended = True
            elif nxt == current:
                record(GoodSequence(kind, trimmed + (nxt,), flexible + (comp.members,),
                                    flex_idx + (comp.flexibility_index,), True))
            else:
                dfs(trimmed + (nxt,), flexible + (comp.members,),
                    flex_idx + (comp.flexibility_index,))
        if ended or not report.flexible:
            record(GoodSequence(kind, trimmed, flexible, flex_idx, False))

    dfs((start,), (), ())
    seqs = sorted(found.values(), key=lambda s: (s.sort_key(), s.stabilized))
    return seqs, state["overflow"], state["best"]


def enumerate_good_sequences(problem, limit: Optional[int] = None) -> List[GoodSequence]:
    """All maximal good sequences, deduplicated, in deterministic order."""
    return _search(problem, limit)[0]


def compute_depth(problem, limit: int = 64) -> DepthResult:
    seqs, overflow, best = _search(problem, limit)
    if best is None:
        return DepthResult(0, None, (), overflow)
    depth = INFINITE if best.stabilized else best.length
    return DepthResult(depth, best, tuple(seqs), overflow)


@dataclass
class LayerExplanation:
    index: int
    trim_trace: TrimTrace
    scc: SccReport


def explain(problem, sequence: Optional[GoodSequence]) -> List[LayerExplanation]:
    """Trim traces and SCC reports along a sequence (first layer only when absent)."""
    current, trace = first_trimmed(problem)
    out = [LayerExplanation(1, trace, _layer_step(problem, current) if current else SccReport(()))]
    if sequence is None:
        return out
    for i in range(1, len(sequence.flexible) + 1):
        current, trace = _descend(problem, sequence.trimmed_set(i), sequence.flexible_set(i))
        out.append(LayerExplanation(i + 1, trace, _layer_step(problem, current)))
    return out
