"""Election and graph file formats, and result document rendering.

Election files are line oriented; ``#`` starts a comment line and blank
lines are ignored::

    candidates: a b c
    k: 2
    tiebreak: a b c
    3 * ballot: a
    ballot: c
    ballot: b c

``ballot:`` with no tokens is an empty ballot.  Graph files hold a
``vertices: N`` line followed by ``edge: u v`` lines.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from approvalkit.core import (
    ApprovalProfile,
    ElectionInstance,
    InvalidInput,
    PriorityOrder,
    format_score,
)
from approvalkit.reductions import Graph

_BALLOT_RE = re.compile(r"^(?:(\d+)\s*\*\s*)?ballot:(.*)$")
_HEADER_RE = re.compile(r"^([a-z]+):(.*)$")


class ParseError(InvalidInput):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_election(text: str) -> ElectionInstance:
    candidates = None
    k = None
    tiebreak = None
    ballots: list[frozenset] = []
    known: set = set()

    for lineno, line in _content_lines(text):
        ballot_match = _BALLOT_RE.match(line)
        if ballot_match:
            if candidates is None or k is None or tiebreak is None:
                raise ParseError(lineno, "ballot before the candidates, k and tiebreak headers")
            mult = 1 if ballot_match.group(1) is None else int(ballot_match.group(1))
            if mult < 1:
                raise ParseError(lineno, "ballot multiplicity must be at least 1")
            tokens = ballot_match.group(2).split()
            unknown = [c for c in tokens if c not in known]
            if unknown:
                raise ParseError(lineno, f"ballot approves unknown candidate {unknown[0]!r}")
            if len(set(tokens)) != len(tokens):
                raise ParseError(lineno, "candidate listed twice in one ballot")
            ballots.extend([frozenset(tokens)] * mult)
            continue

        header = _HEADER_RE.match(line)
        if not header:
            raise ParseError(lineno, f"unrecognized line {line!r}")
        key, rest = header.group(1), header.group(2).split()
        if candidates is None and key != "candidates":
            raise ParseError(lineno, "first line must be the candidates header")
        if ballots:
            raise ParseError(lineno, f"header {key!r} after ballot lines")
        if key == "candidates":
            if candidates is not None:
                raise ParseError(lineno, "duplicate candidates header")
            if not rest:
                raise ParseError(lineno, "no candidates listed")
            if len(set(rest)) != len(rest):
                raise ParseError(lineno, "duplicate candidate in candidates header")
            candidates, known = tuple(rest), set(rest)
        elif key == "k":
            if k is not None:
                raise ParseError(lineno, "duplicate k header")
            if len(rest) != 1 or not rest[0].isdigit():
                raise ParseError(lineno, "k must be a single non-negative integer")
            k = int(rest[0])
            if not 1 <= k <= len(candidates):
                raise ParseError(lineno, f"k must be in 1..{len(candidates)}, got {k}")
        elif key == "tiebreak":
            if tiebreak is not None:
                raise ParseError(lineno, "duplicate tiebreak header")
            if sorted(rest) != sorted(candidates):
                raise ParseError(lineno, "tiebreak is not a permutation of the candidates")
            tiebreak = tuple(rest)
        else:
            raise ParseError(lineno, f"unknown header {key!r}")

    last = len(text.splitlines())
    if candidates is None:
        raise ParseError(last, "missing candidates header")
    if k is None:
        raise ParseError(last, "missing k header")
    if tiebreak is None:
        raise ParseError(last, "missing tiebreak header")
    return ElectionInstance(ApprovalProfile(candidates, ballots), k, PriorityOrder(tiebreak))


def _ballot_tokens(ballot: frozenset, candidates) -> str:
    return " ".join(c for c in candidates if c in ballot)


def render_election(e: ElectionInstance) -> str:
    """Canonical text of `e`; consecutive equal ballots are merged."""
    cands = e.profile.candidates
    lines = [
        f"candidates: {' '.join(cands)}",
        f"k: {e.k}",
        f"tiebreak: {' '.join(e.tiebreak.order)}",
    ]
    ballots = e.profile.ballots
    i = 0
    while i < len(ballots):
        run = 1
        while i + run < len(ballots) and ballots[i + run] == ballots[i]:
            run += 1
        tokens = _ballot_tokens(ballots[i], cands)
        body = f"ballot: {tokens}" if tokens else "ballot:"
        lines.append(body if run == 1 else f"{run} * {body}")
        i += run
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    vertex_count = None
    edges = []
    for lineno, line in _content_lines(text):
        key, _, rest = line.partition(":")
        parts = rest.split()
        if key == "vertices":
            if vertex_count is not None:
                raise ParseError(lineno, "duplicate vertices line")
            if len(parts) != 1 or not parts[0].isdigit():
                raise ParseError(lineno, "vertices must be a single non-negative integer")
            vertex_count = int(parts[0])
        elif key == "edge":
            if vertex_count is None:
                raise ParseError(lineno, "edge before the vertices line")
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise ParseError(lineno, "edge needs two vertex indices")
            u, v = int(parts[0]), int(parts[1])
            try:
                Graph(vertex_count, edges + [(u, v)])
            except InvalidInput as exc:
                raise ParseError(lineno, str(exc)) from None
            edges.append((u, v))
        else:
            raise ParseError(lineno, f"unrecognized line {line!r}")
    if vertex_count is None:
        raise ParseError(len(text.splitlines()), "missing vertices line")
    return Graph(vertex_count, edges)


def render_graph(g: Graph) -> str:
    lines = [f"vertices: {g.vertex_count}"]
    lines.extend(f"edge: {u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _text_value(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_score(value)
    if isinstance(value, dict):
        return " ".join(
            f"{k}=[{_text_value(v)}]" if isinstance(v, dict) else f"{k}={_text_value(v)}"
            for k, v in value.items()
        )
    if isinstance(value, list):
        if value and all(isinstance(v, list) for v in value):
            return " | ".join(" ".join(v) if v else "{}" for v in value)
        return " ".join(_text_value(v) for v in value)
    return str(value)


def render_text(doc: dict) -> str:
    """Stable ``key: value`` rendering of a result document.

    Lists of mappings (the RAV trace) get one ``key.N:`` line per entry.
    """
    lines = []
    for key, value in doc.items():
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            for i, item in enumerate(value, start=1):
                lines.append(f"{key}.{i}: {_text_value(item)}")
        else:
            lines.append(f"{key}: {_text_value(value)}")
    return "\n".join(lines) + "\n"
