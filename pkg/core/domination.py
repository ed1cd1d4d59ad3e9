"""Brute-force DOMINATION and DOMINATING MANIPULATION over any information set.

U dominates V (judged by the manipulator's true order ``vm``) when the winner
with U is never ranked below the winner with V in ``vm``, and is ranked above
it for at least one member of the information set.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

from core.extensions import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationTooLarge,
    InformationSet,
    WinnerOnly,
    enumerate_information_set,
)
from core.orders import LinearOrder, Profile
from core.rules import VotingRule, evaluate

log = logging.getLogger(__name__)

# (rule, profiles, truthful winners, vm, candidate votes)
ScanTask = tuple[VotingRule, list[Profile], list[int], LinearOrder, list[LinearOrder]]


@dataclass(frozen=True)
class DominationVerdict:
    dominates: bool
    improvement_witness: Optional[Profile] = None
    degradation_witness: Optional[Profile] = None


def all_votes(m: int) -> list[LinearOrder]:
    return [LinearOrder(p) for p in itertools.permutations(range(m))]


def _compare(vm: LinearOrder, with_u: int, with_v: int) -> int:
    """+1 if the U-outcome is better for ``vm``, -1 if worse, 0 if equal."""
    if with_u == with_v:
        return 0
    return 1 if vm.prefers(with_u, with_v) else -1


def dominates(
    rule: VotingRule,
    info: InformationSet,
    vm: LinearOrder,
    u: LinearOrder,
    v: LinearOrder,
    cap: Optional[int] = None,
) -> DominationVerdict:
    if not (vm.m == u.m == v.m):
        raise ValueError("vm, u and v must rank the same alternatives")
    profiles = enumerate_information_set(info, cap)
    if u == v:
        return DominationVerdict(False)
    improvement: Optional[Profile] = None
    for profile in profiles:
        cmp = _compare(vm, evaluate(rule, profile.with_vote(u)), evaluate(rule, profile.with_vote(v)))
        if cmp < 0:
            return DominationVerdict(False, improvement, profile)
        if cmp > 0 and improvement is None:
            improvement = profile
    return DominationVerdict(improvement is not None, improvement, None)


def _dominates_truthful(
    rule: VotingRule,
    profiles: list[Profile],
    truthful: list[int],
    vm: LinearOrder,
    u: LinearOrder,
) -> bool:
    improved = False
    for profile, w_v in zip(profiles, truthful):
        cmp = _compare(vm, evaluate(rule, profile.with_vote(u)), w_v)
        if cmp < 0:
            return False
        improved = improved or cmp > 0
    return improved


def _scan_chunk(args: ScanTask) -> Optional[LinearOrder]:
    rule, profiles, truthful, vm, candidates = args
    for u in candidates:
        if _dominates_truthful(rule, profiles, truthful, vm, u):
            return u
    return None


def find_dominating_manipulation(
    rule: VotingRule,
    info: InformationSet,
    vm: LinearOrder,
    cap: Optional[int] = None,
    jobs: int = 1,
) -> Optional[LinearOrder]:
    """First vote (lexicographic) dominating the truthful vote ``vm``."""
    profiles = list(enumerate_information_set(info, cap))
    truthful = [evaluate(rule, p.with_vote(vm)) for p in profiles]
    candidates = [u for u in all_votes(vm.m) if u != vm]
    if jobs <= 1:
        return _scan_chunk((rule, profiles, truthful, vm, candidates))
    size = math.ceil(len(candidates) / jobs)
    chunks = [candidates[i : i + size] for i in range(0, len(candidates), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_scan_chunk, [(rule, profiles, truthful, vm, c) for c in chunks]))
    # Chunks are in lexicographic order, so the first hit is the smallest.
    return next((u for u in results if u is not None), None)


def classic_manipulation(rule: VotingRule, profile: Profile, vm: LinearOrder) -> Optional[LinearOrder]:
    """Complete-information manipulation: first vote electing someone ``vm`` prefers."""
    truthful = evaluate(rule, profile.with_vote(vm))
    for u in all_votes(vm.m):
        if vm.prefers(evaluate(rule, profile.with_vote(u)), truthful):
            return u
    return None


def _anonymous_profiles(m: int, n: int) -> Iterable[Profile]:
    # All rules here are anonymous, so one profile per multiset of votes suffices.
    for votes in itertools.combinations_with_replacement(all_votes(m), n):
        yield Profile(votes)


def check_no_info_immunity(
    rule: VotingRule,
    m: int,
    n: int,
    cap: Optional[int] = None,
) -> Optional[tuple[LinearOrder, LinearOrder]]:
    """First (vm, u) where u dominates vm with no information, else None."""
    cap = DEFAULT_ENUMERATION_CAP if cap is None else cap
    size = math.comb(math.factorial(m) + n - 1, n)
    if size > cap:
        raise EnumerationTooLarge(size, cap)
    votes = all_votes(m)
    k = len(votes)
    better = [[False] * k for _ in range(k)]
    worse = [[False] * k for _ in range(k)]
    for profile in _anonymous_profiles(m, n):
        winners = [evaluate(rule, profile.with_vote(x)) for x in votes]
        for i, vm in enumerate(votes):
            for j in range(k):
                cmp = _compare(vm, winners[j], winners[i])
                if cmp > 0:
                    better[i][j] = True
                elif cmp < 0:
                    worse[i][j] = True
    log.debug("immunity check %s m=%d n=%d over %d multisets", rule.name, m, n, size)
    for i, j in itertools.product(range(k), repeat=2):
        if i != j and better[i][j] and not worse[i][j]:
            return votes[i], votes[j]
    return None


def winner_only_immunity(
    rule: VotingRule,
    m: int,
    n: int,
    cap: Optional[int] = None,
) -> Optional[tuple[int, LinearOrder, LinearOrder]]:
    """First (winner, vm, u) where u dominates vm knowing only the current winner."""
    for winner in range(m):
        info = WinnerOnly(rule, winner, n, m)
        for vm in all_votes(m):
            u = find_dominating_manipulation(rule, info, vm, cap)
            if u is not None:
                return winner, vm, u
    return None


def condorcet_refutation(vm: LinearOrder, u: LinearOrder, n: int) -> Profile:
    """Non-manipulator profile where voting ``u`` is strictly worse than ``vm``.

    Picks a pair a ≻ b in vm reversed in u, then balances a and b so the
    manipulator's vote decides which one is the Condorcet winner.
    """
    if vm == u:
        raise ValueError("vm and u must differ")
    if n < 2:
        raise ValueError("the refutation needs at least two non-manipulators")
    a, b = next((x, y) for x, y in vm.pairs() if u.prefers(y, x))
    others = [x for x in range(vm.m) if x not in (a, b)]
    first = LinearOrder((a, b, *others))
    second = LinearOrder((b, a, *reversed(others)))
    votes = [first, second] * (n // 2)
    if n % 2:
        # With the vote ranking the lower-index one of a, b second, a and b tie
        # and the tie-break elects that lower-index alternative.
        votes.append(first if a > b else second)
    return Profile(tuple(votes))
