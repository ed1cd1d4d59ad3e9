"""Instance generators for the hardness constructions, plus the WMG partition
and PW1/PW2 checks they rely on.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Optional

from core.extensions import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationTooLarge,
    Partial,
    information_set_size,
    profile_extensions,
)
from core.orders import (
    Alternative,
    LinearOrder,
    PartialOrder,
    PartialProfile,
    Profile,
    transitive_close,
)
from core.rules import (
    VotingRule,
    WeightedMajorityGraph,
    borda,
    evaluate,
    scoring_totals,
    weighted_majority_graph,
)

log = logging.getLogger(__name__)


class ReductionError(ValueError):
    """Generator or transformer called outside its preconditions."""


@dataclass(frozen=True)
class X3CInstance:
    q: int
    sets: tuple[frozenset[int], ...]  # 1-based elements of {1..q}

    def __post_init__(self) -> None:
        if self.q <= 0 or self.q % 3:
            raise ReductionError(f"q={self.q} must be a positive multiple of 3")
        sets = tuple(frozenset(s) for s in self.sets)
        for s in sets:
            if len(s) != 3 or not all(1 <= x <= self.q for x in s):
                raise ReductionError(f"set {sorted(s)} is not a 3-subset of 1..{self.q}")
        object.__setattr__(self, "sets", sets)


@dataclass(frozen=True)
class DominationInstance:
    rule: VotingRule
    pp: PartialProfile
    vm: LinearOrder
    v: LinearOrder
    u: LinearOrder


@dataclass(frozen=True)
class ManipulationInstance:
    rule: VotingRule
    pp: PartialProfile
    vm: LinearOrder


@dataclass(frozen=True)
class PossibleWinnerInstance:
    rule: VotingRule
    pp: PartialProfile
    c: Alternative

    def __post_init__(self) -> None:
        if not 0 <= self.c < self.pp.m:
            raise ReductionError(f"alternative {self.c} outside the universe")


@dataclass(frozen=True)
class BordaCertificate:
    scores: tuple[int, ...]  # Borda scores of Q = P1' + P2 + V
    shift: int  # extra full W-blocks added so padding counts stay non-negative
    padding: dict[int, int]  # alternative -> copies of its W-block

    def holds(self, q: int) -> bool:
        c, w = self.scores[0], self.scores[1]
        return w - c == 4 * q // 3 and all(c - self.scores[2 + i] == 1 for i in range(q))


def solve_x3c(x: X3CInstance) -> Optional[tuple[int, ...]]:
    """Indices of an exact cover, or None."""
    universe = frozenset(range(1, x.q + 1))
    for chosen in itertools.combinations(range(len(x.sets)), x.q // 3):
        covered = [e for j in chosen for e in x.sets[j]]
        if len(covered) == x.q and frozenset(covered) == universe:
            return chosen
    return None


def _borda_block(a: int, d: int, m: int) -> tuple[LinearOrder, LinearOrder]:
    others = [x for x in range(m) if x not in (a, d)]
    return LinearOrder((a, d, *others)), LinearOrder((*reversed(others), a, d))


def gen_borda_domination(x: X3CInstance) -> tuple[DominationInstance, BordaCertificate]:
    """Borda DOMINATION instance: U dominates V iff ``x`` has an exact cover.

    Indices: c=0, w=1, v_i=i+1, d=q+2, so ascending index realizes the
    tie-break c > w > V > d.
    """
    q = x.q
    m = q + 3
    c, w, d = 0, 1, q + 2
    v_alts = list(range(2, q + 2))

    base_votes: list[LinearOrder] = []
    ballots: list[PartialOrder] = []
    for s in x.sets:
        members = sorted(e + 1 for e in s)
        others = [a for a in range(m) if a not in (w, d, *members)]
        full = LinearOrder((w, *members, d, *others))
        hidden = {(w, a) for a in (*members, d)}
        ballots.append(transitive_close(set(full.pairs()) - hidden, m))
        base_votes.append(full)

    vm = LinearOrder((w, c, d, *v_alts))
    u = LinearOrder((w, d, c, *v_alts))
    vector = borda().scoring_vector(m)
    q1 = scoring_totals(vector, Profile(tuple(base_votes) + (vm,)))

    t = len(x.sets)
    target = {c: t * m, w: t * m + 4 * q // 3}
    target.update({a: t * m - 1 for a in v_alts})
    raw = {a: target[a] - q1[a] for a in target}
    shift = max(0, -min(raw.values()))
    padding = {a: raw[a] + shift for a in sorted(raw)}
    if shift:
        log.info("borda padding raised by %d W-blocks per alternative", shift)

    padded: list[LinearOrder] = []
    for a, copies in padding.items():
        padded.extend(_borda_block(a, d, m) * copies)

    q_profile = Profile(tuple(base_votes) + tuple(padded) + (vm,))
    cert = BordaCertificate(tuple(scoring_totals(vector, q_profile)), shift, padding)
    pp = PartialProfile(tuple(ballots) + tuple(p.as_partial() for p in padded))
    return DominationInstance(borda(), pp, vm, vm, u), cert


def wmg_partition(
    rule: VotingRule, pp: PartialProfile, cap: Optional[int] = None
) -> dict[Alternative, frozenset[WeightedMajorityGraph]]:
    """WMGs of all extensions of ``pp`` grouped by winner; empty classes omitted."""
    cap = DEFAULT_ENUMERATION_CAP if cap is None else cap
    size = information_set_size(Partial(pp))
    if size > cap:
        raise EnumerationTooLarge(size, cap)
    classes: dict[Alternative, set[WeightedMajorityGraph]] = {}
    for profile in profile_extensions(pp):
        classes.setdefault(evaluate(rule, profile), set()).add(weighted_majority_graph(profile))
    return {a: frozenset(classes[a]) for a in sorted(classes)}


def shift_graph(m: int, c: Alternative, cprime: Iterable[Alternative]) -> WeightedMajorityGraph:
    """G_{C'}: an edge c' -> c of weight 2 for each c' in C'."""
    margin = [[0] * m for _ in range(m)]
    for a in cprime:
        margin[a][c] += 2
        margin[c][a] -= 2
    return WeightedMajorityGraph(m, tuple(tuple(row) for row in margin))


def synthesize_profile(wmg: WeightedMajorityGraph) -> Profile:
    """A profile whose WMG is ``wmg`` (McGarvey-style ballot pairs)."""
    m = wmg.m
    off = [wmg.margin[i][j] for i in range(m) for j in range(m) if i != j]
    parities = {x % 2 for x in off}
    if len(parities) > 1:
        raise ReductionError("margins of mixed parity are not realizable")
    votes: list[LinearOrder] = []
    residual = [list(row) for row in wmg.margin]
    if parities == {1}:
        base = LinearOrder(tuple(range(m)))
        votes.append(base)
        for a, b in base.pairs():
            residual[a][b] -= 1
            residual[b][a] += 1
    for a in range(m):
        for b in range(m):
            if residual[a][b] > 0:
                others = [x for x in range(m) if x not in (a, b)]
                pair = (LinearOrder((a, b, *others)), LinearOrder((*reversed(others), a, b)))
                votes.extend(pair * (residual[a][b] // 2))
    if not votes:
        base = LinearOrder(tuple(range(m)))
        votes = [base, base.reversed()]
    return Profile(tuple(votes))


def _check_pw(pw: PossibleWinnerInstance, d_star: Alternative, cprime: frozenset[int]) -> None:
    if not pw.rule.is_wmg_based:
        raise ReductionError(f"{pw.rule.name} is not based on the weighted majority graph")
    if not cprime:
        raise ReductionError("C' must be nonempty")
    if pw.c in cprime:
        raise ReductionError("C' must exclude c")
    if d_star == pw.c or d_star in cprime:
        raise ReductionError("d* must differ from c and lie outside C'")
    if not all(0 <= a < pw.pp.m for a in (*cprime, d_star)):
        raise ReductionError("d* and C' must lie in the universe")


def _pw_orders(m: int, c: int, d_star: int, cprime: frozenset[int]) -> tuple[LinearOrder, LinearOrder]:
    rest = sorted(cprime)
    others = [a for a in range(m) if a not in (d_star, c, *rest)]
    v = LinearOrder((d_star, c, *rest, *others))
    u = LinearOrder((d_star, *rest, c, *others))
    return v, u


def pw1_to_domination(
    pw: PossibleWinnerInstance, d_star: Alternative, cprime: Iterable[Alternative]
) -> DominationInstance:
    cp = frozenset(cprime)
    _check_pw(pw, d_star, cp)
    v, u = _pw_orders(pw.pp.m, pw.c, d_star, cp)
    pp = pw.pp.with_entry(v.reversed().as_partial())
    return DominationInstance(pw.rule, pp, v, v, u)


def pw2_to_dominating_manipulation(
    pw: PossibleWinnerInstance, d_star: Alternative, cprime: Iterable[Alternative]
) -> ManipulationInstance:
    inst = pw1_to_domination(pw, d_star, cprime)
    return ManipulationInstance(inst.rule, inst.pp, inst.vm)


def verify_pw_conditions(
    rule: VotingRule,
    pw: PossibleWinnerInstance,
    d_star: Alternative,
    cprime: Iterable[Alternative],
    level: int = 1,
    cap: Optional[int] = None,
) -> bool:
    """Check the PW1 (level 1) or PW2 (level 2) side conditions by enumeration."""
    if level not in (1, 2):
        raise ReductionError("level must be 1 or 2")
    cp = frozenset(cprime)
    _check_pw(PossibleWinnerInstance(rule, pw.pp, pw.c), d_star, cp)
    m = pw.pp.m
    partition = wmg_partition(rule, pw.pp, cap)
    shift = shift_graph(m, pw.c, cp)

    def shifted_winner(g: WeightedMajorityGraph) -> Alternative:
        return evaluate(rule, synthesize_profile(g + shift))

    if any(a in partition for a in cp):
        return False
    if level == 2 and any(a in partition for a in range(m) if a not in (pw.c, d_star)):
        return False
    for winner, graphs in partition.items():
        expected = d_star if winner == pw.c else winner
        if any(shifted_winner(g) != expected for g in graphs):
            return False
    return True
