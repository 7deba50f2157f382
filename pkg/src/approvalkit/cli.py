"""Command-line interface.

Exit codes: 0 computed, 1 input error, 2 manipulation goal unreachable,
3 resource guard exceeded.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from fractions import Fraction
from pathlib import Path

from approvalkit.core import (
    ApprovalKitError,
    ElectionInstance,
    InvalidInput,
    ResourceGuardError,
    check_committee,
    check_instance,
    format_score,
)
from approvalkit.formats import parse_election, parse_graph, render_election, render_json, render_text
from approvalkit.manipulation import (
    RULES,
    ExactSetGoal,
    IncludeGoal,
    ManipulationQuery,
    MaximizeGoal,
    UtilitySpec,
    audit_strategyproofness,
    best_response,
    solve_wm,
    solve_wsm,
)
from approvalkit.pav_solver import pav_branch_and_bound, pav_exhaustive, pav_greedy
from approvalkit.reductions import check_reduction, is_to_pav
from approvalkit.rules import (
    av_score,
    av_winners,
    pav_score,
    rav_winners,
    sav_score,
    sav_winners,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNREACHABLE = 2
EXIT_GUARD = 3

PAV_METHODS = {"exact": pav_exhaustive, "bb": pav_branch_and_bound, "greedy": pav_greedy}
SCORERS = {"av": av_score, "sav": sav_score, "pav": pav_score, "rav": pav_score}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _split(value: str) -> list[str]:
    return [tok for tok in value.split(",") if tok]


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}")


def _load_election(path: str) -> ElectionInstance:
    return parse_election(_read(path))


def _ordered(e: ElectionInstance, members) -> list[str]:
    return e.tiebreak.sort(members)


def _cmd_winners(args) -> tuple[dict, int]:
    e = _load_election(args.input)
    check_instance(e)
    doc = {"command": "winners", "rule": args.rule}
    trace = None
    extra = {}
    if args.rule == "pav":
        report = PAV_METHODS[args.method](e)
        winners, score = report.winner, report.score
        doc["method"] = report.method
        extra = {"optimal": report.optimal, "nodes_explored": report.nodes_explored}
    elif args.rule == "rav":
        winners, rav_trace = rav_winners(e)
        score = pav_score(e.profile, winners)
        doc["method"] = "sequential"
        trace = [
            {
                "round": i,
                "selected": r.selected,
                "scores": {c: format_score(r.weighted_scores[c]) for c in _ordered(e, r.weighted_scores)},
            }
            for i, r in enumerate(rav_trace.rounds, start=1)
        ]
    else:
        winners = av_winners(e) if args.rule == "av" else sav_winners(e)
        score = SCORERS[args.rule](e.profile, winners)
        doc["method"] = "top-k"
    doc["k"] = e.k
    doc["winners"] = _ordered(e, winners)
    doc["score"] = format_score(score)
    doc.update(extra)
    if trace is not None:
        doc["trace"] = trace
    doc["status"] = "ok"
    return doc, EXIT_OK


def _cmd_score(args) -> tuple[dict, int]:
    e = _load_election(args.input)
    check_instance(e)
    w = check_committee(e, _split(args.committee))
    score = SCORERS[args.rule](e.profile, w)
    doc = {
        "command": "score",
        "rule": args.rule,
        "committee": _ordered(e, w),
        "score": format_score(score),
        "status": "ok",
    }
    return doc, EXIT_OK


def _parse_utilities(value: str) -> dict:
    utilities = {}
    for item in _split(value):
        name, sep, amount = item.partition("=")
        if not sep:
            raise InvalidInput(f"utility {item!r} is not of the form candidate=value")
        try:
            utilities[name] = Fraction(amount)
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"bad utility value {amount!r} for {name!r}")
    return utilities


def _cmd_manipulate(args) -> tuple[dict, int]:
    e = _load_election(args.input)
    problem = args.problem
    if problem == "wm":
        if not args.candidate:
            raise InvalidInput("manipulate wm needs --candidate")
        goal = IncludeGoal(args.candidate)
        goal_text = args.candidate
    elif problem == "wsm":
        if not args.set:
            raise InvalidInput("manipulate wsm needs --set")
        goal = ExactSetGoal(_split(args.set))
        goal_text = " ".join(_ordered(e, goal.members))
    else:
        if not args.utilities:
            raise InvalidInput("manipulate best-response needs --utilities")
        goal = MaximizeGoal(UtilitySpec(_parse_utilities(args.utilities)))
        goal_text = " ".join(f"{c}={format_score(v)}" for c, v in goal.utility.utilities.items())
    q = ManipulationQuery(args.rule, e.profile, e.k, args.manipulators, goal, e.tiebreak)
    if problem == "wm":
        result = solve_wm(q)
    elif problem == "wsm":
        result = solve_wsm(q, identical_only=args.identical)
    else:
        result = best_response(q)
    doc = {
        "command": "manipulate",
        "problem": problem,
        "rule": args.rule,
        "k": e.k,
        "manipulators": args.manipulators,
        "goal": goal_text,
        "success": result.success,
        "witness": None if result.witness is None else [_ordered(e, b) for b in result.witness],
        "committee": None if result.committee is None else _ordered(e, result.committee),
    }
    if problem == "best-response":
        doc["achieved_utility"] = format_score(result.achieved_utility)
    doc["search_space"] = result.search_space
    doc["status"] = "ok" if result.success else "unreachable"
    return doc, EXIT_OK if result.success else EXIT_UNREACHABLE


def _cmd_reduce(args) -> tuple[dict, int]:
    g = parse_graph(_read(args.graph))
    inst = is_to_pav(g, args.target)
    text = render_election(inst.election)
    doc = {
        "command": "reduce",
        "reduction": "is2pav",
        "vertices": g.vertex_count,
        "edges": len(g.edges),
        "max_degree": g.max_degree,
        "k": inst.election.k,
        "threshold": format_score(inst.threshold),
        "candidates": len(inst.election.candidates),
        "agents": len(inst.election.ballots),
        "dummies": len(inst.dummy_candidates),
    }
    if args.out:
        Path(args.out).write_text(text)
        doc["election_file"] = args.out
    else:
        doc["election"] = text
    doc["status"] = "ok"
    return doc, EXIT_OK


def _cmd_verify(args) -> tuple[dict, int]:
    g = parse_graph(_read(args.graph))
    method = {"exact": "exhaustive", "bb": "branch-and-bound"}[args.method]
    check = check_reduction(g, args.target, method)
    order = is_to_pav(g, args.target).election.tiebreak
    doc = {
        "command": "verify",
        "check": "reduction",
        "method": method,
        "target": args.target,
        "threshold": format_score(check.threshold),
        "pav_optimum": format_score(check.pav_optimum),
        "pav_winner": order.sort(check.winner),
        "independent_set": check.independent_set,
        "holds": check.holds,
        "status": "ok",
    }
    return doc, EXIT_OK


def _cmd_audit(args) -> tuple[dict, int]:
    e = _load_election(args.input)
    check_instance(e)
    truth_set = _split(args.truth)
    check_committee(e, truth_set)
    truth = UtilitySpec.dichotomous_from(truth_set, e.candidates)
    dev = audit_strategyproofness(args.rule, e.profile, e.k, e.tiebreak, truth)
    doc = {
        "command": "audit",
        "rule": args.rule,
        "k": e.k,
        "truthful_ballot": _ordered(e, truth_set),
    }
    if dev is None:
        doc["strategyproof"] = True
        doc["deviation"] = None
    else:
        doc["strategyproof"] = False
        doc["deviation"] = _ordered(e, dev.ballot)
        doc["truthful_outcome"] = _ordered(e, dev.truthful_outcome)
        doc["truthful_utility"] = format_score(dev.truthful_utility)
        doc["deviation_outcome"] = _ordered(e, dev.outcome)
        doc["deviation_utility"] = format_score(dev.utility)
        doc["kinds"] = list(dev.kinds)
    doc["status"] = "ok"
    return doc, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="approvalkit", description="Exact multi-winner approval voting toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, rule=True):
        if rule:
            p.add_argument("--rule", choices=RULES, required=True)
        p.add_argument("--json", action="store_true", help="emit JSON instead of key: value text")

    p = sub.add_parser("winners", help="compute the winning committee")
    common(p)
    p.add_argument("--method", choices=sorted(PAV_METHODS), default="bb", help="PAV solver")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_winners)

    p = sub.add_parser("score", help="score a committee")
    common(p)
    p.add_argument("--committee", required=True, help="comma-separated candidates")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("manipulate", help="winner / winning-set manipulation, best response")
    p.add_argument("problem", choices=["wm", "wsm", "best-response"])
    common(p)
    goal = p.add_mutually_exclusive_group(required=True)
    goal.add_argument("--candidate")
    goal.add_argument("--set", help="comma-separated target committee")
    goal.add_argument("--utilities", help="comma-separated candidate=value pairs")
    p.add_argument("--manipulators", type=int, required=True)
    p.add_argument("--identical", action="store_true", help="wsm: manipulators cast one common ballot")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_manipulate)

    p = sub.add_parser("reduce", help="generate hardness instances")
    p.add_argument("reduction", choices=["is2pav"])
    common(p, rule=False)
    p.add_argument("--graph", required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("verify", help="check a reduction against brute force")
    p.add_argument("check", choices=["reduction"])
    common(p, rule=False)
    p.add_argument("--graph", required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--method", choices=["exact", "bb"], default="bb")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("audit", help="search for a profitable misreport")
    common(p)
    p.add_argument("--truth", required=True, help="comma-separated utility-1 candidates")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_audit)
    return parser


def _render(args, doc: dict) -> str:
    if args.json:
        return render_json(doc)
    if args.command == "score":
        return doc["score"] + "\n"
    if args.command == "reduce" and "election" in doc:
        return f"# threshold: {doc['threshold']}\n" + doc["election"]
    return render_text(doc)


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        doc, code = args.func(args)
    except ResourceGuardError as exc:
        print(f"approvalkit: {exc}", file=stderr)
        return EXIT_GUARD
    except ApprovalKitError as exc:
        print(f"approvalkit: {exc}", file=stderr)
        return EXIT_INPUT
    stdout.write(_render(args, doc))
    if code == EXIT_UNREACHABLE:
        print("approvalkit: goal unreachable", file=stderr)
    return code


def main() -> None:
    sys.exit(run_cli())
