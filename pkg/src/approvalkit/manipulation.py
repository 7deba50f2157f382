"""Strategic voting: winner manipulation, winning-set manipulation, best
response and a strategyproofness auditor.

All searches enumerate multisets of ballots.  Candidate ballots are ordered
by size and then priority-lexicographically; tuples are non-decreasing in
that order, so every multiset of ``j`` ballots is examined exactly once and
witnesses are deterministic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Union

from approvalkit.core import (
    ApprovalProfile,
    DomainError,
    ElectionInstance,
    InvalidInput,
    PriorityOrder,
    ResourceGuardError,
    check_instance,
    guard_override,
)
from approvalkit.pav_solver import pav_branch_and_bound
from approvalkit.rules import (
    av_candidate_scores,
    av_winners,
    rav_winners,
    sav_candidate_scores,
    sav_winners,
    top_k,
)

DEFAULT_TUPLE_GUARD = 2**24

RULES = ("av", "sav", "pav", "rav")


def winning_committee(rule: str, profile: ApprovalProfile, k: int, tiebreak) -> frozenset:
    """Winning committee of `rule` on `profile` (PAV solved exactly)."""
    e = ElectionInstance(profile, k, tiebreak)
    if rule == "av":
        return av_winners(e)
    if rule == "sav":
        return sav_winners(e)
    if rule == "pav":
        return pav_branch_and_bound(e).winner
    if rule == "rav":
        return rav_winners(e)[0]
    raise InvalidInput(f"unknown rule {rule!r}; expected one of {', '.join(RULES)}")


@dataclass(frozen=True)
class UtilitySpec:
    """Additive utilities of a manipulator over candidates."""

    utilities: dict

    def __init__(self, utilities: dict):
        values = {c: Fraction(v) for c, v in utilities.items()}
        for c, v in values.items():
            if v < 0:
                raise InvalidInput(f"utility of {c!r} is negative")
        object.__setattr__(self, "utilities", values)

    @classmethod
    def dichotomous_from(cls, liked: Iterable[str], candidates: Iterable[str]) -> UtilitySpec:
        liked = set(liked)
        return cls({c: int(c in liked) for c in candidates})

    @property
    def dichotomous(self) -> bool:
        return all(v in (0, 1) for v in self.utilities.values())

    def of(self, committee: Iterable[str]) -> Fraction:
        return sum((self.utilities.get(c, Fraction(0)) for c in committee), Fraction(0))

    def approved(self) -> frozenset:
        """Candidates with utility 1 (the truthful dichotomous ballot)."""
        return frozenset(c for c, v in self.utilities.items() if v == 1)


@dataclass(frozen=True)
class IncludeGoal:
    candidate: str


@dataclass(frozen=True)
class ExactSetGoal:
    members: frozenset

    def __init__(self, members: Iterable[str]):
        object.__setattr__(self, "members", frozenset(members))


@dataclass(frozen=True)
class MaximizeGoal:
    utility: UtilitySpec


Goal = Union[IncludeGoal, ExactSetGoal, MaximizeGoal]


@dataclass(frozen=True)
class ManipulationQuery:
    """`j` manipulators add ballots to `fixed_ballots` to reach `goal`."""

    rule: str
    fixed_ballots: ApprovalProfile
    k: int
    j: int
    goal: Goal
    tiebreak: PriorityOrder = None

    def __post_init__(self):
        if self.tiebreak is None:
            object.__setattr__(self, "tiebreak", PriorityOrder(self.fixed_ballots.candidates))
        elif not isinstance(self.tiebreak, PriorityOrder):
            object.__setattr__(self, "tiebreak", PriorityOrder(self.tiebreak))

    def validate(self) -> None:
        if self.rule not in RULES:
            raise InvalidInput(f"unknown rule {self.rule!r}")
        check_instance(ElectionInstance(self.fixed_ballots, self.k, self.tiebreak))
        if self.j < 0:
            raise InvalidInput(f"number of manipulators must be non-negative, got {self.j}")
        candidates = set(self.fixed_ballots.candidates)
        goal = self.goal
        if isinstance(goal, IncludeGoal):
            named = {goal.candidate}
        elif isinstance(goal, ExactSetGoal):
            named = set(goal.members)
            if len(goal.members) != self.k:
                raise InvalidInput(f"target set has {len(goal.members)} members, expected k={self.k}")
        elif isinstance(goal, MaximizeGoal):
            named = set(goal.utility.utilities)
        else:
            raise InvalidInput(f"unsupported goal {goal!r}")
        unknown = named - candidates
        if unknown:
            raise InvalidInput(f"goal names unknown candidates {sorted(unknown)}")
        if self.rule == "sav":
            for idx, b in enumerate(self.fixed_ballots.ballots):
                if not b:
                    raise DomainError(f"SAV undefined for empty ballot (ballot {idx})")

    def outcome(self, extra: Iterable[Iterable[str]]) -> frozenset:
        profile = self.fixed_ballots.with_ballots(extra)
        return winning_committee(self.rule, profile, self.k, self.tiebreak)

    def outcome_function(self) -> Callable[[tuple], frozenset]:
        """Like :meth:`outcome`, reusing fixed-ballot scores for AV and SAV."""
        if self.rule not in ("av", "sav"):
            return self.outcome
        e = ElectionInstance(self.fixed_ballots, self.k, self.tiebreak)
        check_instance(e)
        if self.rule == "av":
            base = av_candidate_scores(self.fixed_ballots)
        else:
            base = sav_candidate_scores(self.fixed_ballots)

        def outcome(extra):
            scores = dict(base)
            for ballot in extra:
                if self.rule == "sav" and not ballot:
                    raise DomainError("SAV undefined for empty ballot")
                share = 1 if self.rule == "av" else Fraction(1, len(ballot))
                for c in ballot:
                    scores[c] += share
            return top_k(scores, e)

        return outcome


@dataclass(frozen=True)
class ManipulationResult:
    success: bool
    witness: tuple | None  # tuple of frozenset ballots
    committee: frozenset | None = None
    achieved_utility: Fraction | None = None
    search_space: int = 0


def candidate_ballots(candidates: Iterable[str], tiebreak: PriorityOrder, allow_empty: bool = True) -> list:
    """All ballots over `candidates`, by size then priority-lexicographically."""
    ordered = tiebreak.sort(candidates)
    ballots = []
    for size in range(0 if allow_empty else 1, len(ordered) + 1):
        ballots.extend(frozenset(b) for b in itertools.combinations(ordered, size))
    return ballots


def ballot_tuples(ballots: list, j: int, identical_only: bool = False) -> Iterator[tuple]:
    if identical_only:
        if j == 0:
            yield ()
            return
        for b in ballots:
            yield (b,) * j
    else:
        yield from itertools.combinations_with_replacement(ballots, j)


def _check_guard(q: ManipulationQuery, guard: int | None) -> None:
    guard = guard_override(DEFAULT_TUPLE_GUARD) if guard is None else guard
    size = (2 ** len(q.fixed_ballots.candidates)) ** q.j
    if size > guard:
        raise ResourceGuardError(
            f"{size} ballot tuples exceed the manipulation guard {guard}"
        )


def _search(
    q: ManipulationQuery,
    accept: Callable[[frozenset], bool],
    guard: int | None,
    identical_only: bool = False,
) -> ManipulationResult:
    q.validate()
    _check_guard(q, guard)
    ballots = candidate_ballots(q.fixed_ballots.candidates, q.tiebreak, allow_empty=q.rule != "sav")
    outcome = q.outcome_function()
    examined = 0
    for tup in ballot_tuples(ballots, q.j, identical_only):
        examined += 1
        committee = outcome(tup)
        if accept(committee):
            return ManipulationResult(True, tuple(tup), committee, search_space=examined)
    return ManipulationResult(False, None, search_space=examined)


def sav_wm_fast(q: ManipulationQuery) -> ManipulationResult:
    """SAV winner manipulation: every manipulator approves only the target."""
    if q.rule != "sav" or not isinstance(q.goal, IncludeGoal):
        raise InvalidInput("sav_wm_fast needs a SAV query with an include goal")
    q.validate()
    p = q.goal.candidate
    witness = (frozenset({p}),) * q.j
    committee = q.outcome(witness)
    if p in committee:
        return ManipulationResult(True, witness, committee, search_space=1)
    return ManipulationResult(False, None, search_space=1)


def solve_wm(q: ManipulationQuery, guard: int | None = None) -> ManipulationResult:
    """Can `j` extra ballots put the goal candidate in the winning committee?"""
    if not isinstance(q.goal, IncludeGoal):
        raise InvalidInput("solve_wm needs an include goal")
    try:
        q.validate()
        _check_guard(q, guard)
    except ResourceGuardError:
        if q.rule == "sav":
            return sav_wm_fast(q)
        raise
    p = q.goal.candidate
    return _search(q, lambda w: p in w, guard)


def solve_wsm(q: ManipulationQuery, guard: int | None = None, identical_only: bool = False) -> ManipulationResult:
    """Can `j` extra ballots make the winning committee exactly the goal set?

    With ``identical_only`` the manipulators must all cast the same ballot.
    """
    if not isinstance(q.goal, ExactSetGoal):
        raise InvalidInput("solve_wsm needs an exact-set goal")
    target = q.goal.members
    return _search(q, lambda w: w == target, guard, identical_only)


def best_response(q: ManipulationQuery, guard: int | None = None) -> ManipulationResult:
    """Ballot tuple maximizing the manipulators' additive utility.

    Ties go to the tuple whose committee is preferred by the tie-break, then
    to the earliest tuple in enumeration order.
    """
    if not isinstance(q.goal, MaximizeGoal):
        raise InvalidInput("best_response needs a maximize goal")
    q.validate()
    _check_guard(q, guard)
    utility = q.goal.utility
    ballots = candidate_ballots(q.fixed_ballots.candidates, q.tiebreak, allow_empty=q.rule != "sav")
    outcome = q.outcome_function()
    best_key, best = None, None
    examined = 0
    for tup in ballot_tuples(ballots, q.j):
        examined += 1
        committee = outcome(tup)
        key = (-utility.of(committee), q.tiebreak.committee_key(committee))
        if best_key is None or key < best_key:
            best_key, best = key, (tup, committee)
    tup, committee = best
    return ManipulationResult(True, tuple(tup), committee, utility.of(committee), examined)


@dataclass(frozen=True)
class Deviation:
    """A profitable misreport found by :func:`audit_strategyproofness`."""

    ballot: frozenset
    outcome: frozenset
    truthful_outcome: frozenset
    truthful_utility: Fraction
    utility: Fraction
    kinds: tuple = field(default=())

    @property
    def gain(self) -> Fraction:
        return self.utility - self.truthful_utility


APPROVES_ZERO_UTILITY = "approves-zero-utility-candidate"
DROPS_APPROVED = "drops-utility-one-candidate"


def audit_strategyproofness(
    rule: str,
    fixed_ballots: ApprovalProfile,
    k: int,
    tiebreak,
    truth: UtilitySpec,
) -> Deviation | None:
    """Look for a ballot that beats truthful voting for one extra agent.

    The audited agent's truthful ballot is its set of utility-1 candidates.
    Returns the deviation with the largest gain (earliest ballot on ties),
    or ``None`` if truthful voting is a best response.
    """
    if not truth.dichotomous:
        raise InvalidInput("strategyproofness audit needs dichotomous utilities")
    if not isinstance(tiebreak, PriorityOrder):
        tiebreak = PriorityOrder(tiebreak)
    q = ManipulationQuery(rule, fixed_ballots, k, 1, MaximizeGoal(truth), tiebreak)
    q.validate()
    honest = truth.approved()
    if rule == "sav" and not honest:
        raise DomainError("SAV undefined for an empty truthful ballot")
    evaluate = q.outcome_function()
    honest_outcome = evaluate([honest])
    honest_utility = truth.of(honest_outcome)
    found = None
    for ballot in candidate_ballots(fixed_ballots.candidates, tiebreak, allow_empty=rule != "sav"):
        if ballot == honest:
            continue
        outcome = evaluate([ballot])
        u = truth.of(outcome)
        if u > honest_utility and (found is None or u > found.utility):
            kinds = []
            if ballot - honest:
                kinds.append(APPROVES_ZERO_UTILITY)
            if honest - ballot:
                kinds.append(DROPS_APPROVED)
            found = Deviation(ballot, outcome, honest_outcome, honest_utility, u, tuple(kinds))
    return found


def tuple_count(num_ballots: int, j: int) -> int:
    """Number of multisets of `j` ballots drawn from `num_ballots`."""
    return math.comb(num_ballots + j - 1, j)
