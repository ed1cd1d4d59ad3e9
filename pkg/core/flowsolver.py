"""Polynomial DOMINATION and DOMINATING MANIPULATION for plurality and veto.

Plurality and veto outcomes depend only on which alternative each ballot puts
first (plurality) or last (veto). Every ballot of a partial profile picks that
alternative independently from the ones its partial order allows there, so the
question "is there an extension with these scores" is a bipartite assignment,
answered by one integer max flow:

    s -> O_i (cap 1) -> c_j (if assignable) -> t or y -> t

Alternatives in C' = {d, d'} send exactly their target score to t. For
plurality the others go through y with an upper cap. For veto the others need
a lower bound on vetoes; each gets a demand edge c -> t of that bound plus an
uncapped c -> y, and a flow of value n saturates every edge into t.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from core.extensions import extension_with_bottom, extension_with_top
from core.orders import Alternative, LinearOrder, PartialOrder, PartialProfile, Profile, demote, promote
from core.rules import RuleKind, VotingRule

log = logging.getLogger(__name__)

SOURCE = "s"
SINK = "t"
OVERFLOW = "y"


class FlowSolverError(ValueError):
    """Input outside what the flow algorithms handle."""


def ballot_node(i: int) -> tuple[str, int]:
    return ("O", i)


def alternative_node(j: int) -> tuple[str, int]:
    return ("c", j)


@dataclass(eq=False)
class FlowNetwork:
    graph: nx.DiGraph
    n: int = 0
    source: object = SOURCE
    sink: object = SINK


@dataclass(frozen=True)
class AdmissibleProblem:
    d: Alternative
    d_prime: Alternative
    e_d: int
    e_d_prime: int
    # Upper caps (plurality) or lower bounds (veto); None for d and d'.
    bounds: tuple[Optional[int], ...]
    network: FlowNetwork = field(compare=False)


def can_rank_top(po: PartialOrder, a: Alternative) -> bool:
    return not any(y == a for (_, y) in po.above)


def can_rank_bottom(po: PartialOrder, a: Alternative) -> bool:
    return not any(x == a for (x, _) in po.above)


def _check_rule(rule: VotingRule) -> RuleKind:
    if rule.kind not in (RuleKind.PLURALITY, RuleKind.VETO):
        raise FlowSolverError(f"flow solver handles plurality and veto, not {rule.name}")
    return rule.kind


def _assignable(kind: RuleKind, po: PartialOrder, a: Alternative) -> bool:
    return can_rank_top(po, a) if kind is RuleKind.PLURALITY else can_rank_bottom(po, a)


def build_flow_network(
    pp: PartialProfile,
    rule: VotingRule,
    exact: Mapping[Alternative, int],
    bounds: Sequence[Optional[int]],
) -> FlowNetwork:
    kind = _check_rule(rule)
    n = len(pp)
    m = len(bounds)
    g = nx.DiGraph()
    g.add_node(SOURCE)
    for i, po in enumerate(pp):
        g.add_edge(SOURCE, ballot_node(i), capacity=1)
        for j in range(m):
            if _assignable(kind, po, j):
                g.add_edge(ballot_node(i), alternative_node(j), capacity=1)
    spare = n - sum(exact.values())
    for j in range(m):
        if j in exact:
            g.add_edge(alternative_node(j), SINK, capacity=exact[j])
        elif kind is RuleKind.PLURALITY:
            g.add_edge(alternative_node(j), OVERFLOW, capacity=bounds[j])
        else:
            if bounds[j]:
                g.add_edge(alternative_node(j), SINK, capacity=bounds[j])
                spare -= bounds[j]
            g.add_edge(alternative_node(j), OVERFLOW, capacity=n)
    g.add_edge(OVERFLOW, SINK, capacity=max(spare, 0))
    g.add_node(SINK)
    return FlowNetwork(g, n)


def max_flow(net: FlowNetwork) -> int:
    return nx.maximum_flow_value(net.graph, net.source, net.sink, flow_func=edmonds_karp)


def flow_assignment(net: FlowNetwork) -> Optional[list[Alternative]]:
    """Alternative assigned to each ballot by a flow of value n, if one exists."""
    value, flow = nx.maximum_flow(net.graph, net.source, net.sink, flow_func=edmonds_karp)
    if value < net.n:
        return None
    assignment = []
    for i in range(net.n):
        out = flow[ballot_node(i)]
        assignment.append(next(node[1] for node, f in sorted(out.items()) if f > 0))
    return assignment


def _relevant(kind: RuleKind, v: LinearOrder, u: LinearOrder, d: int, d_prime: int) -> bool:
    # Moving from V to U only shifts one point between two alternatives.
    if kind is RuleKind.PLURALITY:
        return d == v.top or d_prime == u.top
    return d_prime == v.bottom or d == u.bottom


def _plurality_bounds(
    m: int, n: int, v: LinearOrder, u: LinearOrder, d: int, d_prime: int, l: int, e: int
) -> Optional[list[Optional[int]]]:
    i_star, j_star = v.top, u.top
    # Totals once the manipulator's vote is added.
    tv_d = l + (d == i_star)
    tv_dp = e + (d_prime == i_star)
    tu_d = l + (d == j_star)
    tu_dp = e + (d_prime == j_star)
    if tv_dp > tv_d - (d_prime < d) or tu_d > tu_dp - (d < d_prime):
        return None
    bounds: list[Optional[int]] = [None] * m
    for c in range(m):
        if c in (d, d_prime):
            continue
        cap = min(tv_d - (c < d) - (c == i_star), tu_dp - (c < d_prime) - (c == j_star))
        if cap < 0:
            return None
        bounds[c] = min(cap, n)
    if l + e + sum(b for b in bounds if b is not None) < n:
        return None
    return bounds


def _veto_bounds(
    m: int, n: int, v: LinearOrder, u: LinearOrder, d: int, d_prime: int, l: int, e: int
) -> Optional[list[Optional[int]]]:
    i_star, j_star = v.bottom, u.bottom
    # Veto totals; the winner has the fewest, ties to the lower index.
    tv_d = l + (d == i_star)
    tv_dp = e + (d_prime == i_star)
    tu_d = l + (d == j_star)
    tu_dp = e + (d_prime == j_star)
    if tv_dp < tv_d + (d_prime < d) or tu_d < tu_dp + (d < d_prime):
        return None
    bounds: list[Optional[int]] = [None] * m
    for c in range(m):
        if c in (d, d_prime):
            continue
        need = max(tv_d + (c < d) - (c == i_star), tu_dp + (c < d_prime) - (c == j_star), 0)
        bounds[c] = need
    if l + e + sum(b for b in bounds if b is not None) > n:
        return None
    return bounds


def build_admissible_problems(
    pp: PartialProfile,
    vm: LinearOrder,
    v: LinearOrder,
    u: LinearOrder,
    d: Alternative,
    d_prime: Alternative,
    l: int,
    rule: Optional[VotingRule] = None,
) -> list[AdmissibleProblem]:
    """Flow problems with e_d = l under which d wins with V and d' wins with U."""
    rule = rule or VotingRule(RuleKind.PLURALITY)
    kind = _check_rule(rule)
    if d == d_prime or not vm.prefers(d_prime, d):
        raise FlowSolverError("need d' ranked strictly above d by the manipulator")
    if not _relevant(kind, v, u, d, d_prime):
        raise FlowSolverError("neither d nor d' is moved by switching from V to U")
    n, m = len(pp), vm.m
    assignable = [sum(_assignable(kind, po, a) for po in pp) for a in range(m)]
    if l < 0 or l > n or l > assignable[d]:
        return []
    bounds_for = _plurality_bounds if kind is RuleKind.PLURALITY else _veto_bounds
    problems = []
    for e in range(0, min(n - l, assignable[d_prime]) + 1):
        bounds = bounds_for(m, n, v, u, d, d_prime, l, e)
        if bounds is None:
            continue
        net = build_flow_network(pp, rule, {d: l, d_prime: e}, bounds)
        problems.append(AdmissibleProblem(d, d_prime, l, e, tuple(bounds), net))
    return problems


def _check_orders(pp: PartialProfile, *orders: LinearOrder) -> None:
    ms = {o.m for o in orders}
    if len(pp):
        ms.add(pp.m)
    if len(ms) != 1:
        raise FlowSolverError("all orders must rank the same alternatives")


def _candidate_problems(
    pp: PartialProfile, vm: LinearOrder, v: LinearOrder, u: LinearOrder, rule: VotingRule
) -> Iterator[AdmissibleProblem]:
    kind = rule.kind
    m = vm.m
    for l in range(len(pp) + 1):
        for d in range(m):
            for d_prime in range(m):
                if d == d_prime or not vm.prefers(d_prime, d):
                    continue
                if not _relevant(kind, v, u, d, d_prime):
                    continue
                yield from build_admissible_problems(pp, vm, v, u, d, d_prime, l, rule)


def find_improvement(
    pp: PartialProfile,
    vm: LinearOrder,
    v: LinearOrder,
    u: LinearOrder,
    rule: VotingRule,
) -> Optional[Profile]:
    """An extension of ``pp`` where voting ``u`` beats voting ``v`` for ``vm``."""
    kind = _check_rule(rule)
    _check_orders(pp, vm, v, u)
    pivot = (lambda o: o.top) if kind is RuleKind.PLURALITY else (lambda o: o.bottom)
    if pivot(u) == pivot(v):
        return None
    solved = 0
    for problem in _candidate_problems(pp, vm, v, u, rule):
        solved += 1
        assignment = flow_assignment(problem.network)
        if assignment is None:
            continue
        place = extension_with_top if kind is RuleKind.PLURALITY else extension_with_bottom
        votes: list[LinearOrder] = []
        for i, (po, a) in enumerate(zip(pp, assignment)):
            vote = place(po, a)
            if vote is None:
                raise FlowSolverError(f"flow assigned c{a + 1} to ballot {i + 1}, which cannot place it")
            votes.append(vote)
        log.debug("improvement found after %d flow problems: d=%d d'=%d", solved, problem.d, problem.d_prime)
        return Profile(tuple(votes))
    log.debug("no improvement after %d flow problems", solved)
    return None


def possible_improvement(
    pp: PartialProfile,
    vm: LinearOrder,
    v: LinearOrder,
    u: LinearOrder,
    rule: VotingRule,
) -> bool:
    return find_improvement(pp, vm, v, u, rule) is not None


def flow_domination(
    pp: PartialProfile,
    vm: LinearOrder,
    v: LinearOrder,
    u: LinearOrder,
    rule: VotingRule,
) -> bool:
    return possible_improvement(pp, vm, v, u, rule) and not possible_improvement(pp, vm, u, v, rule)


def flow_dominating_manipulation(
    pp: PartialProfile,
    vm: LinearOrder,
    rule: VotingRule,
) -> Optional[LinearOrder]:
    kind = _check_rule(rule)
    for a in range(vm.m):
        if kind is RuleKind.PLURALITY:
            if a == vm.top:
                continue
            u = promote(vm, a)
        else:
            if a == vm.bottom:
                continue
            u = demote(vm, a)
        if flow_domination(pp, vm, vm, u, rule):
            return u
    return None
