import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import random_instance, random_profile
from approvalkit.core import ApprovalProfile, DomainError, ElectionInstance, PriorityOrder
from approvalkit.pav_solver import pav_exhaustive
from approvalkit.rules import (
    av_score,
    av_winners,
    harmonic,
    pav_gain,
    pav_score,
    rav_weight,
    rav_winners,
    sav_score,
    sav_winners,
)

THM4_SAV = [{"a", "b"}, {"a"}, {"a"}, {"a"}, {"c"}, {"b", "c"}]
THM4_PAV = [{"a", "b"}, {"b"}, {"a", "c"}, {"a", "c"}, {"c"}]
RAV_K2_FIXED = [
    {"b", "d"}, {"c", "d"}, {"a", "b", "c", "d"}, {"b", "c", "d"}, {"b", "c", "d"},
    {"a", "b"}, {"c"}, {"a"},
]


def election(ballots, k, cands="abc"):
    return ElectionInstance(ApprovalProfile(cands, ballots), k, PriorityOrder(cands))


def test_av_score():
    p = ApprovalProfile("abc", [{"a"}, {"a"}, {"a"}, {"c"}, {"b", "c"}])
    assert av_score(p, {"a", "c"}) == 5
    assert av_score(ApprovalProfile("abc", [{"a"}]), {"b", "c"}) == 0
    assert av_score(ApprovalProfile("ab", [{"a", "b"}]), {"a", "b"}) == 2


def test_sav_score():
    assert sav_score(ApprovalProfile("abc", THM4_SAV), {"a", "c"}) == 5
    assert sav_score(ApprovalProfile("abcd", [set("abcd")]), {"a", "b"}) == Fraction(1, 2)
    assert sav_score(ApprovalProfile("abc", [{"a"}]), {"b", "c"}) == 0


def test_sav_rejects_empty_ballot():
    p = ApprovalProfile("abc", [{"a"}, set()])
    with pytest.raises(DomainError, match="empty ballot"):
        sav_score(p, {"a"})
    with pytest.raises(DomainError):
        sav_winners(election([{"a"}, set()], 1))


def test_harmonic():
    assert harmonic(0) == 0
    assert harmonic(1) == 1
    assert harmonic(3) == Fraction(11, 6)


def test_pav_score():
    p = ApprovalProfile("abc", THM4_PAV)
    assert pav_score(p, {"a", "c"}) == 5
    assert pav_score(p, {"a", "b"}) == Fraction(9, 2)


def test_pav_equals_av_on_singleton_intersections():
    p = ApprovalProfile("abcd", [{"a"}, {"b"}, {"c", "d"}, {"a", "d"}])
    assert pav_score(p, {"a", "c"}) == av_score(p, {"a", "c"})


def test_empty_ballots_contribute_zero():
    p = ApprovalProfile("ab", [set(), {"a"}])
    assert pav_score(p, {"a"}) == 1
    assert av_score(p, {"a"}) == 1


def test_av_winners():
    assert av_winners(election([{"a"}, {"a"}, {"a"}, {"c"}, {"b", "c"}], 2)) == {"a", "c"}
    assert av_winners(election([{"a", "b"}] * 3, 2)) == {"a", "b"}
    assert av_winners(election([], 2)) == {"a", "b"}


def test_sav_winners_misreport_profile():
    assert sav_winners(election(THM4_SAV, 2)) == {"a", "c"}
    assert sav_winners(election([{"b"}] + THM4_SAV[1:], 2)) == {"a", "b"}
    assert sav_winners(election([{"a"}], 1, "a")) == {"a"}


def test_rav_weight():
    assert rav_weight({"a"}, set()) == 1
    assert rav_weight({"b", "c", "d"}, {"b", "c"}) == Fraction(1, 3)
    assert rav_weight(set("abcd"), set("abcd")) == Fraction(1, 5)


def test_rav_k2_example_truthful():
    w, trace = rav_winners(election([{"a"}] + RAV_K2_FIXED, 2, "abcd"))
    assert w == {"b", "c"}
    assert trace.order == ["b", "c"]
    assert trace.rounds[0].weighted_scores == {"a": 4, "b": 5, "c": 5, "d": 5}
    assert trace.rounds[1].weighted_scores["c"] == Fraction(7, 2)


def test_rav_k2_example_manipulated():
    w, trace = rav_winners(election([{"a", "d"}] + RAV_K2_FIXED, 2, "abcd"))
    assert w == {"a", "d"}
    assert trace.order == ["d", "a"]
    assert trace.rounds[0].weighted_scores["d"] == 6
    assert trace.rounds[1].weighted_scores == {"a": 3, "b": 3, "c": 3}


def test_rav_trace_shape_and_determinism():
    rng = random.Random(5)
    for _ in range(50):
        e = random_instance(rng, max_m=7, max_n=8)
        w1, t1 = rav_winners(e)
        w2, t2 = rav_winners(e)
        assert (w1, t1) == (w2, t2)
        assert len(t1.rounds) == e.k
        elected = set()
        for r in t1.rounds:
            assert set(r.weighted_scores) == set(e.candidates) - elected
            best = max(r.weighted_scores.values())
            ties = [c for c, s in r.weighted_scores.items() if s == best]
            assert r.selected == e.tiebreak.sort(ties)[0]
            elected.add(r.selected)


def test_k1_rules_coincide():
    rng = random.Random(11)
    for _ in range(200):
        e = random_instance(rng, max_m=6, max_n=8)
        e = ElectionInstance(e.profile, 1, e.tiebreak)
        av = av_winners(e)
        assert rav_winners(e)[0] == av
        assert pav_exhaustive(e).winner == av


@pytest.mark.parametrize("seed", range(3))
def test_av_sav_match_committee_argmax(seed):
    rng = random.Random(seed)
    for _ in range(60):
        e = random_instance(rng, max_m=7, max_n=8, allow_empty=False)
        cands, order, ballots = e.candidates, list(e.tiebreak.order), e.ballots
        assert av_winners(e) == oracles.committee_argmax(oracles.app, ballots, cands, e.k, order)[0]
        assert sav_winners(e) == oracles.committee_argmax(oracles.sat, ballots, cands, e.k, order)[0]


def test_scores_match_oracles():
    rng = random.Random(3)
    for _ in range(200):
        p = random_profile(rng, rng.randint(1, 6), rng.randint(0, 6), allow_empty=False)
        w = {c for c in p.candidates if rng.random() < 0.5}
        assert av_score(p, w) == oracles.app(p.ballots, w)
        assert sav_score(p, w) == oracles.sat(p.ballots, w)
        assert pav_score(p, w) == oracles.pav(p.ballots, w)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_scores_are_anonymous(data):
    m = data.draw(st.integers(1, 5))
    cands = "abcde"[:m]
    ballots = data.draw(st.lists(st.sets(st.sampled_from(cands), min_size=1), max_size=6))
    w = data.draw(st.sets(st.sampled_from(cands)))
    shuffled = data.draw(st.permutations(ballots))
    p, q = ApprovalProfile(cands, ballots), ApprovalProfile(cands, shuffled)
    for score in (av_score, sav_score, pav_score):
        assert score(p, w) == score(q, w)
    k = data.draw(st.integers(1, m))
    assert rav_winners(ElectionInstance(p, k))[0] == rav_winners(ElectionInstance(q, k))[0]


def test_marginal_gain_identity_small():
    p = ApprovalProfile("abcd", RAV_K2_FIXED)
    for w in oracles.all_subsets("abcd"):
        for c in set("abcd") - w:
            expected = sum((rav_weight(b, w) for b in p.ballots if c in b), Fraction(0))
            assert pav_gain(p, w, c) == expected
