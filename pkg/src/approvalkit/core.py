"""Domain model: candidates, ballots, profiles, committees and tie-breaking.

Candidates are plain case-sensitive string tokens. Ballots and committees are
``frozenset`` objects of candidate tokens. All scores are
:class:`fractions.Fraction` values; no floating point is used for scoring.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Committee = frozenset
Score = Fraction

#: Environment variable overriding every enumeration guard.
GUARD_ENV_VAR = "APPROVALKIT_GUARD"


class ApprovalKitError(Exception):
    """Base class of all errors raised by approvalkit."""


class InvalidInput(ApprovalKitError, ValueError):
    """Malformed election, committee or query."""


class DomainError(ApprovalKitError, ValueError):
    """A rule is undefined for the given input (e.g. SAV with an empty ballot)."""


class ResourceGuardError(ApprovalKitError, RuntimeError):
    """An exhaustive search would exceed its configured size guard."""


def guard_override(default: int) -> int:
    """Return the guard from ``APPROVALKIT_GUARD`` if set, else `default`."""
    raw = os.environ.get(GUARD_ENV_VAR)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInput(f"{GUARD_ENV_VAR} must be an integer, got {raw!r}")
    if value < 1:
        raise InvalidInput(f"{GUARD_ENV_VAR} must be positive, got {value}")
    return value


def _is_token(c) -> bool:
    return isinstance(c, str) and c != "" and not any(ch.isspace() for ch in c)


@dataclass(frozen=True)
class ApprovalProfile:
    """Candidates plus an ordered multiset of approval ballots.

    Construction does not validate; use :func:`validate_instance` or
    :meth:`violations` to list problems.
    """

    candidates: tuple[str, ...]
    ballots: tuple[frozenset, ...] = ()

    def __init__(self, candidates: Iterable[str], ballots: Iterable[Iterable[str]] = ()):
        object.__setattr__(self, "candidates", tuple(candidates))
        object.__setattr__(self, "ballots", tuple(frozenset(b) for b in ballots))

    @property
    def num_candidates(self) -> int:
        return len(self.candidates)

    @property
    def num_voters(self) -> int:
        return len(self.ballots)

    def with_ballots(self, extra: Iterable[Iterable[str]]) -> ApprovalProfile:
        """Return a new profile with `extra` ballots appended."""
        return ApprovalProfile(self.candidates, self.ballots + tuple(frozenset(b) for b in extra))

    def approval_counts(self) -> dict[str, int]:
        counts = dict.fromkeys(self.candidates, 0)
        for ballot in self.ballots:
            for c in ballot:
                counts[c] += 1
        return counts

    def violations(self) -> list[str]:
        problems = []
        if not self.candidates:
            problems.append("profile has no candidates")
        seen = set()
        for c in self.candidates:
            if not _is_token(c):
                problems.append(f"invalid candidate identifier {c!r}")
            elif c in seen:
                problems.append(f"duplicate candidate {c!r}")
            seen.add(c)
        for idx, ballot in enumerate(self.ballots):
            for c in sorted(ballot - seen, key=str):
                problems.append(f"ballot {idx} approves unknown candidate {c!r}")
        return problems


@dataclass(frozen=True)
class PriorityOrder:
    """Tie-breaking linear order over candidates, highest priority first."""

    order: tuple[str, ...]
    _rank: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, order: Iterable[str]):
        object.__setattr__(self, "order", tuple(order))
        object.__setattr__(self, "_rank", {c: i for i, c in enumerate(self.order)})

    def rank(self, candidate: str) -> int:
        try:
            return self._rank[candidate]
        except KeyError:
            raise InvalidInput(f"candidate {candidate!r} is not in the tie-breaking order")

    def sort(self, candidates: Iterable[str]) -> list[str]:
        """Sort candidates by decreasing priority."""
        return sorted(candidates, key=self.rank)

    def committee_key(self, committee: Iterable[str]) -> tuple[int, ...]:
        """Sort key under which smaller means preferred (for equal-size committees)."""
        return tuple(sorted(self.rank(c) for c in committee))

    def violations(self, candidates: Sequence[str]) -> list[str]:
        problems = []
        if len(self._rank) != len(self.order):
            problems.append("tiebreak lists a candidate more than once")
        if set(self.order) != set(candidates) or len(self.order) != len(set(candidates)):
            problems.append("tiebreak is not a permutation of the candidates")
        return problems


@dataclass(frozen=True)
class ElectionInstance:
    """A profile, committee size `k` and tie-breaking order.

    If `tiebreak` is omitted the candidate list order is used.
    """

    profile: ApprovalProfile
    k: int
    tiebreak: PriorityOrder = None

    def __post_init__(self):
        if self.tiebreak is None:
            object.__setattr__(self, "tiebreak", PriorityOrder(self.profile.candidates))
        elif not isinstance(self.tiebreak, PriorityOrder):
            object.__setattr__(self, "tiebreak", PriorityOrder(self.tiebreak))

    @property
    def candidates(self) -> tuple[str, ...]:
        return self.profile.candidates

    @property
    def ballots(self) -> tuple[frozenset, ...]:
        return self.profile.ballots


def validate_instance(e: ElectionInstance) -> list[str]:
    """Return every invariant violation of `e`; an empty list means ok."""
    problems = e.profile.violations()
    m = len(e.profile.candidates)
    if not isinstance(e.k, int) or isinstance(e.k, bool):
        problems.append(f"k must be an integer, got {e.k!r}")
    elif e.k < 1:
        problems.append(f"k must be at least 1, got {e.k}")
    elif e.k > m:
        problems.append(f"k exceeds candidate count ({e.k} > {m})")
    problems.extend(e.tiebreak.violations(e.profile.candidates))
    return problems


def check_instance(e: ElectionInstance) -> None:
    """Raise :class:`InvalidInput` listing all violations, if any."""
    problems = validate_instance(e)
    if problems:
        raise InvalidInput("; ".join(problems))


def check_committee(e: ElectionInstance, w: Iterable[str], size: int | None = None) -> frozenset:
    w = frozenset(w)
    unknown = w - set(e.profile.candidates)
    if unknown:
        raise InvalidInput(f"committee contains unknown candidates {sorted(unknown)}")
    if size is not None and len(w) != size:
        raise InvalidInput(f"committee has {len(w)} members, expected {size}")
    return w


def compare_committees(x: Iterable[str], y: Iterable[str], t: PriorityOrder) -> int:
    """Compare two equal-size committees under the priority-lexicographic order.

    Each committee is listed in decreasing priority and the two sequences
    are compared lexicographically.

    Returns
    -------
    int
        ``-1`` if `x` is preferred, ``1`` if `y` is preferred, ``0`` if equal.
    """
    if not isinstance(t, PriorityOrder):
        t = PriorityOrder(t)
    x, y = frozenset(x), frozenset(y)
    if len(x) != len(y):
        raise InvalidInput(f"cannot compare committees of sizes {len(x)} and {len(y)}")
    kx, ky = t.committee_key(x), t.committee_key(y)
    return (kx > ky) - (kx < ky)


def best_committee(committees: Iterable[Iterable[str]], t: PriorityOrder) -> frozenset:
    """Return the compare_committees-best among equal-size committees."""
    return min((frozenset(c) for c in committees), key=t.committee_key)


def format_score(s: Fraction) -> str:
    """Render an exact score as ``p/q`` (always with a denominator)."""
    s = Fraction(s)
    return f"{s.numerator}/{s.denominator}"
