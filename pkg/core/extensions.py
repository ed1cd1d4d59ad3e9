"""Information sets and brute-force possible/necessary winners.

Enumeration is lexicographic everywhere: linear extensions by ranking sequence,
profiles as the Cartesian product of per-ballot extensions. Every enumeration is
counted exactly before it starts and refused above the cap.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Union

from core.orders import Alternative, LinearOrder, PartialOrder, PartialProfile, Profile
from core.rules import VotingRule, evaluate

log = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 10**7


class EnumerationTooLarge(RuntimeError):
    def __init__(self, count: int, cap: int) -> None:
        super().__init__(f"information set has {count} profiles, above the cap of {cap}")
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class Complete:
    profile: Profile


@dataclass(frozen=True)
class NoInformation:
    n: int
    m: int


@dataclass(frozen=True)
class WinnerOnly:
    rule: VotingRule
    winner: Alternative
    n: int
    m: int


@dataclass(frozen=True)
class Partial:
    profile: PartialProfile


InformationSet = Union[Complete, NoInformation, WinnerOnly, Partial]


def information_set_m(info: InformationSet) -> int:
    if isinstance(info, Complete):
        return info.profile.m
    if isinstance(info, Partial):
        return info.profile.m
    return info.m


def _minimal(po: PartialOrder, remaining: frozenset[int]) -> list[int]:
    return sorted(a for a in remaining if not any((b, a) in po.above for b in remaining))


def linear_extensions(po: PartialOrder) -> Iterator[LinearOrder]:
    """All extensions of ``po`` in lexicographic order of their rankings."""

    def walk(prefix: list[int], remaining: frozenset[int]) -> Iterator[tuple[int, ...]]:
        if not remaining:
            yield tuple(prefix)
            return
        for a in _minimal(po, remaining):
            prefix.append(a)
            yield from walk(prefix, remaining - {a})
            prefix.pop()

    for ranking in walk([], frozenset(range(po.m))):
        yield LinearOrder(ranking)


def count_linear_extensions(po: PartialOrder) -> int:
    preds = [0] * po.m
    for a, b in po.above:
        preds[b] |= 1 << a

    @lru_cache(maxsize=None)
    def ways(placed: int) -> int:
        if placed == (1 << po.m) - 1:
            return 1
        total = 0
        for a in range(po.m):
            if not placed >> a & 1 and preds[a] & ~placed == 0:
                total += ways(placed | 1 << a)
        return total

    return ways(0)


def extension_with_top(po: PartialOrder, a: Alternative) -> Optional[LinearOrder]:
    """Lexicographically first extension ranking ``a`` first, if any."""
    if po.predecessors(a):
        return None
    rest = frozenset(range(po.m)) - {a}
    ranking = [a]
    while rest:
        nxt = _minimal(po, rest)[0]
        ranking.append(nxt)
        rest = rest - {nxt}
    return LinearOrder(tuple(ranking))


def extension_with_bottom(po: PartialOrder, a: Alternative) -> Optional[LinearOrder]:
    """Lexicographically first extension ranking ``a`` last, if any."""
    if po.successors(a):
        return None
    rest = frozenset(range(po.m)) - {a}
    ranking = []
    while rest:
        nxt = _minimal(po, rest)[0]
        ranking.append(nxt)
        rest = rest - {nxt}
    return LinearOrder(tuple(ranking) + (a,))


def profile_extensions(pp: PartialProfile) -> Iterator[Profile]:
    per_ballot = [list(linear_extensions(po)) for po in pp]
    for votes in itertools.product(*per_ballot):
        yield Profile(votes)


def information_set_size(info: InformationSet) -> int:
    """Number of profiles enumerated for ``info`` (before WinnerOnly filtering)."""
    if isinstance(info, Complete):
        return 1
    if isinstance(info, Partial):
        return math.prod(count_linear_extensions(po) for po in info.profile)
    return math.factorial(info.m) ** info.n


def all_profiles(m: int, n: int) -> Iterator[Profile]:
    orders = [LinearOrder(p) for p in itertools.permutations(range(m))]
    for votes in itertools.product(orders, repeat=n):
        yield Profile(votes)


def enumerate_information_set(info: InformationSet, cap: Optional[int] = None) -> Iterator[Profile]:
    cap = DEFAULT_ENUMERATION_CAP if cap is None else cap
    size = information_set_size(info)
    if size > cap:
        raise EnumerationTooLarge(size, cap)
    log.debug("enumerating %s: %d profiles", type(info).__name__, size)
    return _enumerate(info)


def _enumerate(info: InformationSet) -> Iterator[Profile]:
    if isinstance(info, Complete):
        yield info.profile
    elif isinstance(info, Partial):
        yield from profile_extensions(info.profile)
    elif isinstance(info, NoInformation):
        yield from all_profiles(info.m, info.n)
    else:
        for profile in all_profiles(info.m, info.n):
            if evaluate(info.rule, profile) == info.winner:
                yield profile


def _outcomes(
    rule: VotingRule,
    info: InformationSet,
    manipulator_vote: Optional[LinearOrder],
    cap: Optional[int],
) -> Iterator[Alternative]:
    for profile in enumerate_information_set(info, cap):
        if manipulator_vote is not None:
            profile = profile.with_vote(manipulator_vote)
        yield evaluate(rule, profile)


def possible_winners(
    rule: VotingRule,
    info: InformationSet,
    manipulator_vote: Optional[LinearOrder] = None,
    cap: Optional[int] = None,
) -> set[Alternative]:
    return set(_outcomes(rule, info, manipulator_vote, cap))


def necessary_winner(
    rule: VotingRule,
    info: InformationSet,
    manipulator_vote: Optional[LinearOrder] = None,
    cap: Optional[int] = None,
) -> Optional[Alternative]:
    winner: Optional[Alternative] = None
    for w in _outcomes(rule, info, manipulator_vote, cap):
        if winner is None:
            winner = w
        elif w != winner:
            return None
    return winner
