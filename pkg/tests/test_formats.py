import pytest
from hypothesis import given, settings, strategies as st

from approvalkit.core import ApprovalProfile, ElectionInstance, PriorityOrder
from approvalkit.formats import (
    ParseError,
    parse_election,
    parse_graph,
    render_election,
    render_graph,
    render_json,
    render_text,
)
from approvalkit.reductions import Graph


def test_parse_multiplicity_profile():
    e = parse_election("candidates: a b c\nk: 2\ntiebreak: a b c\n3 * ballot: a\nballot: c\nballot: b c")
    assert e.candidates == ("a", "b", "c") and e.k == 2
    assert e.ballots == (frozenset("a"),) * 3 + (frozenset("c"), frozenset("bc"))
    assert e.tiebreak == PriorityOrder("abc")


def test_parse_single_candidate():
    e = parse_election("candidates: a\nk: 1\ntiebreak: a\nballot: a")
    assert e.ballots == (frozenset("a"),)


def test_parse_comments_blank_lines_and_empty_ballot():
    text = "# header\n\ncandidates: x Y\n# c\nk: 1\ntiebreak: Y x\nballot:\n2*ballot: Y\n"
    e = parse_election(text)
    assert e.ballots == (frozenset(), frozenset({"Y"}), frozenset({"Y"}))
    assert e.tiebreak.order == ("Y", "x")


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("candidates: a b\nk: 1\ntiebreak: a b\nballot: x", 4, "unknown candidate 'x'"),
        ("candidates: a b\nk: 1\ntiebreak: a b\nballot: a a", 4, "twice"),
        ("k: 1\ncandidates: a", 1, "first line"),
        ("candidates: a b\nk: 1\ntiebreak: a a", 3, "permutation"),
        ("candidates: a b\nk: 1\nballot: a", 3, "before"),
        ("candidates: a b\ntiebreak: a b", 2, "missing k"),
        ("candidates: a b\nk: 3\ntiebreak: a b", 2, "k must be in"),
        ("candidates: a b\nk: 1\ntiebreak: a b\nballot: a\nk: 2", 5, "after ballot"),
        ("candidates: a b\nk: 1\ntiebreak: a b\n0 * ballot: a", 4, "multiplicity"),
        ("candidates: a b\nk: 1\ntiebreak: a b\nvote a", 4, "unrecognized"),
    ],
)
def test_parse_errors_cite_line(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_election(text)
    assert info.value.lineno == line
    assert fragment in str(info.value)


def test_render_merges_runs():
    e = ElectionInstance(ApprovalProfile("abc", [{"a"}, {"a"}, set(), {"c", "b"}]), 2, PriorityOrder("cab"))
    assert render_election(e) == (
        "candidates: a b c\nk: 2\ntiebreak: c a b\n2 * ballot: a\nballot:\nballot: b c\n"
    )


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_election_round_trip(data):
    cands = data.draw(st.lists(st.from_regex(r"[A-Za-z0-9_]{1,4}", fullmatch=True), min_size=1, max_size=5, unique=True))
    ballots = data.draw(st.lists(st.frozensets(st.sampled_from(cands)), max_size=8))
    order = data.draw(st.permutations(cands))
    e = ElectionInstance(ApprovalProfile(cands, ballots), data.draw(st.integers(1, len(cands))), PriorityOrder(order))
    text = render_election(e)
    assert parse_election(text) == e
    assert render_election(parse_election(text)) == text


def test_graph_format():
    g = parse_graph("# star\nvertices: 4\nedge: 0 1\nedge: 2 0\n\nedge: 0 3\n")
    assert g == Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert render_graph(g) == "vertices: 4\nedge: 0 1\nedge: 0 2\nedge: 0 3\n"
    assert parse_graph(render_graph(g)) == g


@pytest.mark.parametrize(
    "text, line",
    [("edge: 0 1", 1), ("vertices: 2\nedge: 0 0", 2), ("vertices: 2\nedge: 0 5", 2), ("vertices: 2\nedge: 0 1\nedge: 1 0", 3), ("", 0)],
)
def test_graph_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_graph(text)
    assert info.value.lineno == line


def test_document_rendering():
    doc = {
        "rule": "rav",
        "winners": ["a", "c"],
        "ok": True,
        "witness": [["a", "d"], []],
        "none": None,
        "trace": [{"round": 1, "selected": "a", "scores": {"a": "4/1", "b": "2/1"}}],
    }
    assert render_text(doc) == (
        "rule: rav\nwinners: a c\nok: true\nwitness: a d | {}\nnone: -\n"
        "trace.1: round=1 selected=a scores=[a=4/1 b=2/1]\n"
    )
    assert render_json(doc).startswith('{\n  "rule": "rav",\n  "winners": [')
