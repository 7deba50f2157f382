"""Exact and greedy winner determination for proportional approval voting.

Internally all PAV values are scaled by ``L = lcm(1, ..., k)`` so that the
search runs on integers; reported scores are converted back to exact
fractions.  Ballots and committees are bitmasks over candidate indices taken
in tie-breaking order, so the lexicographic order of index tuples coincides
with the committee tie-break.
"""

from __future__ import annotations

import functools
import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from approvalkit.core import (
    ApprovalProfile,
    ElectionInstance,
    ResourceGuardError,
    check_instance,
    guard_override,
)
from approvalkit.rules import harmonic, pav_gain, pav_score

DEFAULT_ENUMERATION_GUARD = 10**7

EXHAUSTIVE = "exhaustive"
BRANCH_AND_BOUND = "branch-and-bound"
GREEDY = "greedy"


@dataclass(frozen=True)
class SolveReport:
    winner: frozenset
    score: Fraction
    method: str
    nodes_explored: int
    optimal: bool


class _Scaled:
    """Priority-ordered candidates, ballot bitmasks and scaled harmonic table."""

    def __init__(self, e: ElectionInstance):
        self.order = e.tiebreak.order
        self.m = len(self.order)
        self.k = e.k
        index = {c: i for i, c in enumerate(self.order)}
        self.masks = [sum(1 << index[c] for c in b) for b in e.profile.ballots]
        self.approvers = [[] for _ in range(self.m)]
        for i, b in enumerate(e.profile.ballots):
            for c in b:
                self.approvers[index[c]].append(i)
        self.scale = math.lcm(*range(1, self.k + 1))
        self.table = [int(harmonic(p) * self.scale) for p in range(self.k + 1)]

    def committee(self, indices: Iterable[int]) -> frozenset:
        return frozenset(self.order[i] for i in indices)

    def score_mask(self, wmask: int) -> int:
        table = self.table
        return sum(table[(wmask & b).bit_count()] for b in self.masks)

    def fraction(self, scaled: int) -> Fraction:
        return Fraction(scaled, self.scale)


def pav_exhaustive(e: ElectionInstance, guard: int | None = None) -> SolveReport:
    """Enumerate all k-subsets and return the tie-break-best PAV maximizer."""
    check_instance(e)
    guard = guard_override(DEFAULT_ENUMERATION_GUARD) if guard is None else guard
    total = math.comb(len(e.candidates), e.k)
    if total > guard:
        raise ResourceGuardError(
            f"{total} committees exceed the enumeration guard {guard}; "
            "use branch-and-bound instead"
        )
    s = _Scaled(e)
    best, best_combo = -1, None
    # combinations() yields index tuples in lexicographic order, i.e. from the
    # most to the least preferred committee; keep the first maximum.
    for combo in itertools.combinations(range(s.m), e.k):
        value = s.score_mask(sum(1 << i for i in combo))
        if value > best:
            best, best_combo = value, combo
    return SolveReport(s.committee(best_combo), s.fraction(best), EXHAUSTIVE, total, True)


def pav_completion_bound(
    profile: ApprovalProfile, partial: Iterable[str], remaining: Iterable[str], need: int
) -> Fraction:
    """Upper bound on the best PAV score reachable from `partial`.

    Adds the `need` largest standalone marginal gains over `remaining`
    candidates to the score of `partial`; admissible because the PAV score
    is submodular.
    """
    partial = frozenset(partial)
    gains = sorted((pav_gain(profile, partial, c) for c in remaining), reverse=True)
    return pav_score(profile, partial) + sum(gains[:need], Fraction(0))


def pav_branch_and_bound(e: ElectionInstance) -> SolveReport:
    """Depth-first include/exclude search in priority order.

    Include branches are explored first, so complete committees are reached
    in tie-break order and the first optimum found is the reported one.
    """
    check_instance(e)
    s = _Scaled(e)
    m, scale, approvers = s.m, s.scale, s.approvers
    counts = [0] * len(s.masks)
    chosen: list[int] = []
    best = [-1, None]
    nodes = 0

    def gain(c: int) -> int:
        return sum(scale // (counts[i] + 1) for i in approvers[c])

    def visit(pos: int, need: int, score: int) -> None:
        nonlocal nodes
        nodes += 1
        if need == 0:
            if score > best[0]:
                best[0], best[1] = score, tuple(chosen)
            return
        gains = [gain(c) for c in range(pos, m)]
        bound = sum(heapq.nlargest(need, gains))
        if score + bound < best[0]:
            return
        chosen.append(pos)
        for i in approvers[pos]:
            counts[i] += 1
        visit(pos + 1, need - 1, score + gains[0])
        for i in approvers[pos]:
            counts[i] -= 1
        chosen.pop()
        if m - pos - 1 >= need:
            visit(pos + 1, need, score)

    visit(0, e.k, 0)
    return SolveReport(s.committee(best[1]), s.fraction(best[0]), BRANCH_AND_BOUND, nodes, True)


def pav_greedy(e: ElectionInstance) -> SolveReport:
    """Add the candidate of largest marginal PAV gain, `k` times."""
    check_instance(e)
    s = _Scaled(e)
    counts = [0] * len(s.masks)
    chosen: list[int] = []
    total = 0
    evaluated = 0
    for _ in range(e.k):
        best_c, best_gain = None, -1
        for c in range(s.m):
            if c in chosen:
                continue
            evaluated += 1
            g = sum(s.scale // (counts[i] + 1) for i in s.approvers[c])
            if g > best_gain:
                best_c, best_gain = c, g
        chosen.append(best_c)
        total += best_gain
        for i in s.approvers[best_c]:
            counts[i] += 1
    return SolveReport(s.committee(chosen), s.fraction(total), GREEDY, evaluated, False)


def search_tree_size(m: int, k: int) -> int:
    """Number of nodes of the unpruned include/exclude tree over `m` candidates."""

    @functools.lru_cache(maxsize=None)
    def size(remaining: int, need: int) -> int:
        if need == 0:
            return 1
        total = 1 + size(remaining - 1, need - 1)
        if remaining - 1 >= need:
            total += size(remaining - 1, need)
        return total

    return size(m, k)


SOLVERS = {
    EXHAUSTIVE: pav_exhaustive,
    BRANCH_AND_BOUND: pav_branch_and_bound,
    GREEDY: pav_greedy,
}
