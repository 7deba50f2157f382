"""Committee scores and winner determination for AV, SAV, PAV and RAV.

PAV scoring lives here; the committee search for PAV is in
:mod:`approvalkit.pav_solver`.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from approvalkit.core import (
    ApprovalProfile,
    DomainError,
    ElectionInstance,
    check_instance,
)


def _check_no_empty_ballot(profile: ApprovalProfile) -> None:
    for idx, ballot in enumerate(profile.ballots):
        if not ballot:
            raise DomainError(f"SAV undefined for empty ballot (ballot {idx})")


def av_score(profile: ApprovalProfile, w: Iterable[str]) -> Fraction:
    w = frozenset(w)
    return Fraction(sum(len(w & ballot) for ballot in profile.ballots))


def sav_score(profile: ApprovalProfile, w: Iterable[str]) -> Fraction:
    _check_no_empty_ballot(profile)
    w = frozenset(w)
    return sum((Fraction(len(w & ballot), len(ballot)) for ballot in profile.ballots), Fraction(0))


@functools.lru_cache(maxsize=None)
def harmonic(p: int) -> Fraction:
    """Exact harmonic number ``1 + 1/2 + ... + 1/p``; ``harmonic(0) == 0``."""
    if p < 0:
        raise ValueError(f"harmonic number undefined for p={p}")
    if p == 0:
        return Fraction(0)
    return harmonic(p - 1) + Fraction(1, p)


def pav_score(profile: ApprovalProfile, w: Iterable[str]) -> Fraction:
    w = frozenset(w)
    return sum((harmonic(len(w & ballot)) for ballot in profile.ballots), Fraction(0))


def rav_weight(ballot: Iterable[str], w: Iterable[str]) -> Fraction:
    """Weight of an agent whose ballot already has ``|w & ballot|`` elected."""
    return Fraction(1, 1 + len(frozenset(ballot) & frozenset(w)))


def pav_gain(profile: ApprovalProfile, w: Iterable[str], c: str) -> Fraction:
    """Marginal PAV gain of adding `c` to `w`."""
    w = frozenset(w)
    if c in w:
        return Fraction(0)
    return pav_score(profile, w | {c}) - pav_score(profile, w)


def av_candidate_scores(profile: ApprovalProfile) -> dict[str, Fraction]:
    return {c: Fraction(n) for c, n in profile.approval_counts().items()}


def sav_candidate_scores(profile: ApprovalProfile) -> dict[str, Fraction]:
    """Per-candidate SAV weight: sum of ``1/|A_i|`` over approving agents."""
    _check_no_empty_ballot(profile)
    scores = {c: Fraction(0) for c in profile.candidates}
    for ballot in profile.ballots:
        share = Fraction(1, len(ballot))
        for c in ballot:
            scores[c] += share
    return scores


def top_k(scores: dict[str, Fraction], e: ElectionInstance) -> frozenset:
    """The `k` best candidates by (score descending, priority ascending)."""
    ranked = sorted(scores, key=lambda c: (-scores[c], e.tiebreak.rank(c)))
    return frozenset(ranked[: e.k])


def av_winners(e: ElectionInstance) -> frozenset:
    check_instance(e)
    return top_k(av_candidate_scores(e.profile), e)


def sav_winners(e: ElectionInstance) -> frozenset:
    check_instance(e)
    return top_k(sav_candidate_scores(e.profile), e)


@dataclass(frozen=True)
class RavRound:
    selected: str
    weighted_scores: dict  # candidate -> Fraction, unelected candidates only


@dataclass(frozen=True)
class RavTrace:
    rounds: tuple[RavRound, ...]

    @property
    def order(self) -> list[str]:
        """Candidates in the order they were elected."""
        return [r.selected for r in self.rounds]


def rav_round_scores(profile: ApprovalProfile, elected: Iterable[str]) -> dict[str, Fraction]:
    elected = frozenset(elected)
    scores = {c: Fraction(0) for c in profile.candidates if c not in elected}
    for ballot in profile.ballots:
        weight = rav_weight(ballot, elected)
        for c in ballot:
            if c not in elected:
                scores[c] += weight
    return scores


def rav_winners(e: ElectionInstance) -> tuple[frozenset, RavTrace]:
    """Run reweighted approval voting for `k` rounds.

    Each round elects the unelected candidate with the largest weighted
    approval score, candidate ties going to the higher priority.
    """
    check_instance(e)
    elected: list[str] = []
    rounds = []
    for _ in range(e.k):
        scores = rav_round_scores(e.profile, elected)
        winner = min(scores, key=lambda c: (-scores[c], e.tiebreak.rank(c)))
        rounds.append(RavRound(winner, scores))
        elected.append(winner)
    return frozenset(elected), RavTrace(tuple(rounds))
