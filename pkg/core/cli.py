from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from core import domination, extensions, flowsolver, reductions
from core.extensions import Complete, InformationSet, NoInformation, Partial, WinnerOnly
from core.instance import Ballot, InstanceFile, load_instance, serialize_instance
from core.orders import LinearOrder, PartialProfile, Profile, alternative_name, parse_order
from core.rules import RuleKind, VotingRule, evaluate, parse_rule, validate_rule
from core.settings import SOLVERS, Settings, load_settings

log = logging.getLogger("votedom")


class UsageError(ValueError):
    pass


def _configure_logging(verbosity: int) -> None:
    if not verbosity:
        return
    from rich.console import Console
    from rich.logging import RichHandler

    logging.basicConfig(
        level=logging.INFO if verbosity == 1 else logging.DEBUG,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _order_line(key: str, order: LinearOrder) -> str:
    return f"{key} " + " ".join(str(a + 1) for a in order.ranking)


def _print_profile(profile: Optional[Profile]) -> None:
    if profile is None:
        return
    for vote in profile:
        print(_order_line("order", vote))


def _alternative(text: Optional[str], m: int, flag: str) -> int:
    if text is None:
        raise UsageError(f"{flag} is required")
    try:
        a = int(text) - 1
    except ValueError:
        raise UsageError(f"{flag} expects a 1-based index, got {text!r}") from None
    if not 0 <= a < m:
        raise UsageError(f"{flag} {text} out of range 1..{m}")
    return a


def _alternatives(text: Optional[str], m: int, flag: str) -> list[int]:
    if not text:
        raise UsageError(f"{flag} is required")
    return [_alternative(t.strip(), m, flag) for t in text.split(",")]


class Context:
    """Arguments merged with the instance file and settings."""

    def __init__(self, args: argparse.Namespace, settings: Settings) -> None:
        self.args = args
        self.settings = settings
        tie = settings.copeland_tie_points
        self.instance: Optional[InstanceFile] = (
            load_instance(args.instance, tie) if getattr(args, "instance", None) else None
        )
        m = args.m if args.m is not None else (self.instance.m if self.instance else None)
        if m is None:
            raise UsageError("need --m or --instance")
        self.m: int = m
        rule_name = getattr(args, "rule", None)
        if rule_name:
            self.rule: Optional[VotingRule] = parse_rule(rule_name, tie)
        else:
            self.rule = self.instance.rule if self.instance else None
        if self.rule is not None:
            validate_rule(self.rule, self.m)
        self.cap: int = args.cap if args.cap is not None else settings.enumeration_cap
        self.jobs: int = args.jobs if args.jobs is not None else settings.jobs
        self.solver: str = args.solver or settings.solver

    def require_rule(self) -> VotingRule:
        if self.rule is None:
            raise UsageError("need --rule or a rule line in the instance")
        return self.rule

    def order(self, key: str, required: bool = True) -> Optional[LinearOrder]:
        text = getattr(self.args, key, None)
        if text:
            return parse_order(text, self.m)
        order = getattr(self.instance, key, None) if self.instance else None
        if order is None and required:
            raise UsageError(f"need --{key} or a {key} line in the instance")
        return order

    def n(self) -> int:
        if self.args.n is not None:
            return self.args.n
        if self.instance is not None:
            return self.instance.n
        raise UsageError("need --n or --instance")

    def info(self) -> InformationSet:
        mode = getattr(self.args, "info", "auto") or "auto"
        if mode == "auto":
            if self.instance is not None:
                mode = "complete" if self.instance.is_complete else "partial"
            else:
                mode = "winner" if getattr(self.args, "winner", None) else "none"
        if mode in ("complete", "partial"):
            if self.instance is None:
                raise UsageError(f"--info {mode} needs --instance")
            if mode == "complete":
                return Complete(self.instance.profile())
            return Partial(self.instance.partial_profile())
        if mode == "none":
            return NoInformation(self.n(), self.m)
        winner = _alternative(getattr(self.args, "winner", None), self.m, "--winner")
        return WinnerOnly(self.require_rule(), winner, self.n(), self.m)

    def use_flow(self, rule: VotingRule, info: InformationSet) -> bool:
        applicable = rule.kind in (RuleKind.PLURALITY, RuleKind.VETO) and isinstance(info, Partial)
        if self.solver == "flow" and not applicable:
            raise UsageError("the flow solver needs plurality or veto with partial ballots")
        return applicable and self.solver != "brute"


def _cmd_winner(ctx: Context) -> int:
    rule = ctx.require_rule()
    info = ctx.info()
    if not isinstance(info, Complete):
        raise UsageError("winner needs an instance with full ballots")
    profile = info.profile
    vm = ctx.order("vm", required=False)
    if vm is not None:
        profile = profile.with_vote(vm)
    print(alternative_name(evaluate(rule, profile)))
    return 0


def _cmd_possible_winners(ctx: Context) -> int:
    rule = ctx.require_rule()
    winners = extensions.possible_winners(rule, ctx.info(), ctx.order("vm", required=False), ctx.cap)
    print(" ".join(alternative_name(a) for a in sorted(winners)))
    return 0


def _cmd_necessary_winner(ctx: Context) -> int:
    rule = ctx.require_rule()
    winner = extensions.necessary_winner(rule, ctx.info(), ctx.order("vm", required=False), ctx.cap)
    if winner is None:
        print("NONE")
        return 1
    print(alternative_name(winner))
    return 0


def _cmd_dominates(ctx: Context) -> int:
    rule = ctx.require_rule()
    info = ctx.info()
    vm = ctx.order("vm")
    u = ctx.order("u")
    v = ctx.order("v", required=False)
    assert vm is not None and u is not None
    if v is None:
        v = vm
    if ctx.use_flow(rule, info):
        assert isinstance(info, Partial)
        pp = info.profile
        improvement = flowsolver.find_improvement(pp, vm, v, u, rule)
        degradation = flowsolver.find_improvement(pp, vm, u, v, rule) if improvement else None
        verdict = domination.DominationVerdict(
            improvement is not None and degradation is None, improvement, degradation
        )
        log.info("flow solver: improvement=%s degradation=%s", improvement is not None, degradation is not None)
    else:
        verdict = domination.dominates(rule, info, vm, u, v, ctx.cap)
    if verdict.dominates:
        print("YES")
        _print_profile(verdict.improvement_witness)
        return 0
    print("NO")
    _print_profile(verdict.degradation_witness)
    return 1


def _cmd_manipulate(ctx: Context) -> int:
    rule = ctx.require_rule()
    info = ctx.info()
    vm = ctx.order("vm")
    assert vm is not None
    if ctx.use_flow(rule, info):
        assert isinstance(info, Partial)
        u = flowsolver.flow_dominating_manipulation(info.profile, vm, rule)
    else:
        u = domination.find_dominating_manipulation(rule, info, vm, ctx.cap, ctx.jobs)
    if u is None:
        print("NONE")
        return 1
    print("YES")
    print(_order_line("u", u))
    return 0


def _ballots(pp: PartialProfile) -> tuple[Ballot, ...]:
    return tuple(po.to_linear() if po.is_linear() else po for po in pp)


def _write(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    print(f"Wrote {out}")


def _cmd_gen_borda(args: argparse.Namespace) -> int:
    if not args.set:
        raise UsageError("give the 3-sets with --set a,b,c")
    sets = []
    for s in args.set:
        try:
            sets.append(frozenset(int(x) for x in s.split(",")))
        except ValueError:
            raise UsageError(f"cannot parse set {s!r}") from None
    x3c = reductions.X3CInstance(args.q, tuple(sets))
    inst, cert = reductions.gen_borda_domination(x3c)
    log.info("score certificate: %s (shift %d)", cert.scores, cert.shift)
    if not cert.holds(args.q):
        raise reductions.ReductionError("generated scores miss the target identities")
    text = serialize_instance(
        InstanceFile(inst.pp.m, len(inst.pp), _ballots(inst.pp), inst.rule, inst.vm, inst.v, inst.u)
    )
    _write(text, args.out)
    return 0


def _pw_instance(ctx: Context) -> tuple[reductions.PossibleWinnerInstance, int, list[int]]:
    if ctx.instance is None:
        raise UsageError("need --instance with the possible-winner ballots")
    rule = ctx.require_rule()
    pw = reductions.PossibleWinnerInstance(
        rule, ctx.instance.partial_profile(), _alternative(ctx.args.c, ctx.m, "--c")
    )
    d_star = _alternative(ctx.args.d_star, ctx.m, "--d-star")
    return pw, d_star, _alternatives(ctx.args.cprime, ctx.m, "--cprime")


def _cmd_pw1_transform(ctx: Context) -> int:
    pw, d_star, cprime = _pw_instance(ctx)
    inst = reductions.pw1_to_domination(pw, d_star, cprime)
    if ctx.args.level == 2:
        m_inst = reductions.pw2_to_dominating_manipulation(pw, d_star, cprime)
        out = InstanceFile(m_inst.pp.m, len(m_inst.pp), _ballots(m_inst.pp), m_inst.rule, m_inst.vm)
    else:
        out = InstanceFile(inst.pp.m, len(inst.pp), _ballots(inst.pp), inst.rule, inst.vm, inst.v, inst.u)
    _write(serialize_instance(out), ctx.args.out)
    return 0


def _cmd_verify_pw(ctx: Context) -> int:
    pw, d_star, cprime = _pw_instance(ctx)
    ok = reductions.verify_pw_conditions(pw.rule, pw, d_star, cprime, ctx.args.level, ctx.cap)
    print("YES" if ok else "NO")
    return 0 if ok else 1


def _cmd_immunity(ctx: Context) -> int:
    rule = ctx.require_rule()
    if ctx.args.info not in ("auto", "none", "winner"):
        raise UsageError(f"immunity-check supports --info none or winner, not {ctx.args.info}")
    mode = "winner" if ctx.args.info == "winner" else "none"
    if mode == "winner":
        found = domination.winner_only_immunity(rule, ctx.m, ctx.n(), ctx.cap)
        if found is None:
            print("YES")
            return 0
        winner, vm, u = found
        print("NO")
        print(f"winner {winner + 1}")
        print(_order_line("vm", vm))
        print(_order_line("u", u))
        return 1
    pair = domination.check_no_info_immunity(rule, ctx.m, ctx.n(), ctx.cap)
    if pair is None:
        print("YES")
        return 0
    print("NO")
    print(_order_line("vm", pair[0]))
    print(_order_line("u", pair[1]))
    return 1


COMMANDS = {
    "winner": _cmd_winner,
    "possible-winners": _cmd_possible_winners,
    "necessary-winner": _cmd_necessary_winner,
    "dominates": _cmd_dominates,
    "manipulate": _cmd_manipulate,
    "pw1-transform": _cmd_pw1_transform,
    "verify-pw": _cmd_verify_pw,
    "immunity-check": _cmd_immunity,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="Log to stderr (-vv for debug)")
    common.add_argument("--settings", type=Path, default=None, help="Settings YAML (default: config/settings.yaml)")
    common.add_argument("--cap", type=int, default=None, help="Max profiles to enumerate")
    common.add_argument("--jobs", type=int, default=None, help="Worker processes for manipulation scans")

    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument("--rule", help="plurality, veto, borda, copeland, maximin, rankedpairs, stv, score:..., tree:...")
    problem.add_argument("--instance", type=Path, default=None, help="Instance file")
    problem.add_argument(
        "--info",
        choices=["auto", "complete", "partial", "none", "winner"],
        default="auto",
        help="Information set (auto: from the instance, else none)",
    )
    problem.add_argument("--winner", help="Announced winner for --info winner (1-based)")
    problem.add_argument("--m", type=int, default=None, help="Number of alternatives")
    problem.add_argument("--n", type=int, default=None, help="Number of non-manipulators")
    problem.add_argument("--vm", help='Manipulator\'s true order, e.g. "3>2>1"')
    problem.add_argument("--v", help="Vote V (defaults to vm)")
    problem.add_argument("--u", help="Vote U")
    problem.add_argument("--solver", choices=list(SOLVERS), default=None, help="auto, brute or flow")

    pw = argparse.ArgumentParser(add_help=False)
    pw.add_argument("--c", help="Distinguished alternative c (1-based)")
    pw.add_argument("--d-star", dest="d_star", help="Alternative d* (1-based)")
    pw.add_argument("--cprime", help="Comma-separated C' (1-based)")
    pw.add_argument("--level", type=int, choices=[1, 2], default=1, help="1 = PW1, 2 = PW2")

    ap = argparse.ArgumentParser(prog="votedom", description="Dominating manipulation under partial information")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("winner", parents=[common, problem], help="Winner of a complete profile")
    sub.add_parser("possible-winners", parents=[common, problem], help="Winners over the information set")
    sub.add_parser("necessary-winner", parents=[common, problem], help="Winner shared by every member, if any")
    sub.add_parser("dominates", parents=[common, problem], help="Does U dominate V?")
    sub.add_parser("manipulate", parents=[common, problem], help="Find a vote dominating the truthful one")
    sub.add_parser("immunity-check", parents=[common, problem], help="Search for a no-information counterexample")
    gen = sub.add_parser("gen-borda-x3c", parents=[common], help="Borda domination instance from X3C")
    gen.add_argument("--q", type=int, required=True, help="Universe size (multiple of 3)")
    gen.add_argument("--set", action="append", default=[], help="One 3-set, e.g. 1,2,3 (repeatable)")
    gen.add_argument("--out", type=Path, default=None, help="Write the instance here instead of stdout")
    tr = sub.add_parser("pw1-transform", parents=[common, problem, pw], help="PW1 -> domination instance")
    tr.add_argument("--out", type=Path, default=None, help="Write the instance here instead of stdout")
    sub.add_parser("verify-pw", parents=[common, problem, pw], help="Check PW1/PW2 side conditions")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        settings = load_settings(args.settings)
        if args.command == "gen-borda-x3c":
            return _cmd_gen_borda(args)
        return COMMANDS[args.command](Context(args, settings))
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
