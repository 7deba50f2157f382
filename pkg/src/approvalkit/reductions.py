"""Independent Set to PAV winner determination reduction, with graph oracles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from approvalkit.core import (
    ApprovalProfile,
    ElectionInstance,
    InvalidInput,
    PriorityOrder,
    ResourceGuardError,
)
from approvalkit.pav_solver import (
    BRANCH_AND_BOUND,
    EXHAUSTIVE,
    pav_branch_and_bound,
    pav_exhaustive,
)

MAX_BRUTE_FORCE_VERTICES = 20


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0 .. vertex_count - 1``."""

    vertex_count: int
    edges: frozenset  # of (u, v) with u < v

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()):
        if vertex_count < 0:
            raise InvalidInput("vertex count must be non-negative")
        normalized = set()
        for u, v in edges:
            if u == v:
                raise InvalidInput(f"self-loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InvalidInput(f"edge ({u}, {v}) outside 0..{vertex_count - 1}")
            edge = (min(u, v), max(u, v))
            if edge in normalized:
                raise InvalidInput(f"duplicate edge {edge}")
            normalized.add(edge)
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "edges", frozenset(normalized))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class ReductionInstance:
    election: ElectionInstance
    threshold: Fraction
    vertex_candidate_map: dict
    dummy_candidates: tuple


def vertex_candidate(v: int) -> str:
    return f"v{v}"


def dummy_candidate(v: int, j: int) -> str:
    return f"d{v}_{j}"


def is_to_pav(g: Graph, t: int) -> ReductionInstance:
    """Build the PAV election whose optimum reaches ``deg(G) * t`` iff `g`
    has an independent set of size `t`.

    Each vertex ``v`` gets a candidate ``v{v}`` and ``deg(G) - deg(v)``
    dummy candidates, each approved together with ``v{v}`` by its own agent;
    each edge gets one agent approving both endpoint candidates.
    """
    max_deg = g.max_degree
    if max_deg <= 1:
        raise InvalidInput(f"reduction needs maximum degree > 1, got {max_deg}")
    if not 1 <= t <= g.vertex_count:
        raise InvalidInput(f"target size must be in 1..{g.vertex_count}, got {t}")
    degrees = g.degrees()
    vertex_map = {v: vertex_candidate(v) for v in range(g.vertex_count)}
    dummies = []
    ballots = []
    for u, v in g.sorted_edges():
        ballots.append({vertex_map[u], vertex_map[v]})
    for v in range(g.vertex_count):
        for j in range(max_deg - degrees[v]):
            d = dummy_candidate(v, j)
            dummies.append(d)
            ballots.append({vertex_map[v], d})
    candidates = [vertex_map[v] for v in range(g.vertex_count)] + dummies
    election = ElectionInstance(ApprovalProfile(candidates, ballots), t, PriorityOrder(candidates))
    return ReductionInstance(election, Fraction(max_deg * t), vertex_map, tuple(dummies))


def independent_set_exists(g: Graph, t: int) -> bool:
    """Brute force: does some `t`-subset of vertices span no edge?"""
    if g.vertex_count > MAX_BRUTE_FORCE_VERTICES:
        raise ResourceGuardError(
            f"brute-force independent set limited to {MAX_BRUTE_FORCE_VERTICES} vertices"
        )
    if t <= 0:
        return True
    adjacent = [0] * g.vertex_count
    for u, v in g.edges:
        adjacent[u] |= 1 << v
        adjacent[v] |= 1 << u
    for subset in itertools.combinations(range(g.vertex_count), t):
        mask = sum(1 << v for v in subset)
        if all(not (adjacent[v] & mask) for v in subset):
            return True
    return False


@dataclass(frozen=True)
class ReductionCheck:
    holds: bool
    independent_set: bool
    pav_optimum: Fraction
    threshold: Fraction
    winner: frozenset


def check_reduction(g: Graph, t: int, method: str = BRANCH_AND_BOUND) -> ReductionCheck:
    """Solve both sides of the reduction and report whether they agree.

    `method` selects the exact PAV solver: ``"branch-and-bound"`` (default)
    or ``"exhaustive"``.
    """
    inst = is_to_pav(g, t)
    if method == EXHAUSTIVE:
        solver = pav_exhaustive
    elif method == BRANCH_AND_BOUND:
        solver = pav_branch_and_bound
    else:
        raise InvalidInput(f"unknown exact PAV method {method!r}")
    report = solver(inst.election)
    has_is = independent_set_exists(g, t)
    reaches = report.score >= inst.threshold
    return ReductionCheck(reaches == has_is, has_is, report.score, inst.threshold, report.winner)


def verify_reduction(g: Graph, t: int, method: str = BRANCH_AND_BOUND) -> bool:
    """True iff the PAV optimum reaches the threshold exactly when an
    independent set of size `t` exists."""
    return check_reduction(g, t, method).holds
