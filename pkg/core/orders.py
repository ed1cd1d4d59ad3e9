"""Preference orders shared by every solver.

Alternatives are plain ints in ``range(m)``; alternative ``i`` is printed as
``c{i+1}``. The global tie-break order is ascending index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import networkx as nx

Alternative = int
Pair = tuple[int, int]


class OrderError(ValueError):
    """Malformed ranking or inconsistent partial order."""


def alternative_name(a: Alternative) -> str:
    return f"c{a + 1}"


@dataclass(frozen=True)
class LinearOrder:
    ranking: tuple[int, ...]
    _rank: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ranking = tuple(self.ranking)
        m = len(ranking)
        rank = [-1] * m
        for pos, a in enumerate(ranking):
            if not isinstance(a, int) or a < 0 or a >= m:
                raise OrderError(f"alternative {a} out of range for m={m}")
            if rank[a] != -1:
                raise OrderError(f"duplicate alternative {a}")
            rank[a] = pos
        object.__setattr__(self, "ranking", ranking)
        object.__setattr__(self, "_rank", tuple(rank))

    @property
    def m(self) -> int:
        return len(self.ranking)

    @property
    def top(self) -> Alternative:
        return self.ranking[0]

    @property
    def bottom(self) -> Alternative:
        return self.ranking[-1]

    def rank(self, a: Alternative) -> int:
        return self._rank[a]

    def prefers(self, a: Alternative, b: Alternative) -> bool:
        return self._rank[a] < self._rank[b]

    def alt(self, position: int) -> Alternative:
        """Alternative in the given 1-based position."""
        return self.ranking[position - 1]

    def reversed(self) -> "LinearOrder":
        return LinearOrder(tuple(reversed(self.ranking)))

    def pairs(self) -> Iterator[Pair]:
        r = self.ranking
        for i in range(len(r)):
            for j in range(i + 1, len(r)):
                yield (r[i], r[j])

    def as_partial(self) -> "PartialOrder":
        return PartialOrder(self.m, frozenset(self.pairs()))

    def __iter__(self) -> Iterator[int]:
        return iter(self.ranking)

    def __len__(self) -> int:
        return len(self.ranking)

    def __str__(self) -> str:
        return "≻".join(alternative_name(a) for a in self.ranking)


def make_linear_order(ranking: Sequence[int], m: int | None = None) -> LinearOrder:
    if m is not None and len(ranking) != m:
        raise OrderError(f"expected {m} alternatives, got {len(ranking)}")
    return LinearOrder(tuple(ranking))


def parse_order(text: str, m: int | None = None) -> LinearOrder:
    """Parse the command-line syntax ``"3>2>1"`` (1-based)."""
    parts = [p.strip() for p in text.split(">")]
    try:
        ranking = [int(p) - 1 for p in parts]
    except ValueError:
        raise OrderError(f"cannot parse order {text!r}") from None
    return make_linear_order(ranking, m)


def format_order(order: LinearOrder) -> str:
    return ">".join(str(a + 1) for a in order.ranking)


def promote(order: LinearOrder, a: Alternative) -> LinearOrder:
    """Move ``a`` to the top, others keep their relative order."""
    return LinearOrder((a,) + tuple(x for x in order.ranking if x != a))


def demote(order: LinearOrder, a: Alternative) -> LinearOrder:
    """Move ``a`` to the bottom, others keep their relative order."""
    return LinearOrder(tuple(x for x in order.ranking if x != a) + (a,))


@dataclass(frozen=True)
class PartialOrder:
    """Transitively closed strict order; ``(a, b)`` in ``above`` means a ≻ b."""

    m: int
    above: frozenset[Pair]

    @property
    def undetermined_count(self) -> int:
        return self.m * (self.m - 1) // 2 - len(self.above)

    def undetermined(self) -> list[Pair]:
        return [
            (a, b)
            for a in range(self.m)
            for b in range(a + 1, self.m)
            if (a, b) not in self.above and (b, a) not in self.above
        ]

    def is_linear(self) -> bool:
        return self.undetermined_count == 0

    def predecessors(self, a: Alternative) -> set[int]:
        return {x for (x, y) in self.above if y == a}

    def successors(self, a: Alternative) -> set[int]:
        return {y for (x, y) in self.above if x == a}

    def allows(self, order: LinearOrder) -> bool:
        return all(order.prefers(a, b) for (a, b) in self.above)

    def with_pairs(self, pairs: Iterable[Pair]) -> "PartialOrder":
        return transitive_close(set(self.above) | set(pairs), self.m)

    def to_linear(self) -> LinearOrder:
        if not self.is_linear():
            raise OrderError(f"{self.undetermined_count} pairs still undetermined")
        # Rank by number of alternatives above.
        wins = [0] * self.m
        for a, _ in self.above:
            wins[a] += 1
        return LinearOrder(tuple(sorted(range(self.m), key=lambda a: -wins[a])))


def transitive_close(pairs: Iterable[Pair], m: int) -> PartialOrder:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(m))
    for a, b in pairs:
        if not (0 <= a < m and 0 <= b < m):
            raise OrderError(f"pair ({a},{b}) out of range for m={m}")
        if a == b:
            raise OrderError(f"cycle {a}→{a}")
        graph.add_edge(a, b)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        closure = nx.transitive_closure_dag(graph)
        return PartialOrder(m, frozenset(closure.edges()))
    path = [cycle[0][0]] + [v for _, v in cycle]
    raise OrderError("cycle " + "→".join(str(a) for a in path))


@dataclass(frozen=True)
class Profile:
    votes: tuple[LinearOrder, ...]

    def __post_init__(self) -> None:
        votes = tuple(self.votes)
        if len({v.m for v in votes}) > 1:
            raise OrderError("votes span different alternative universes")
        object.__setattr__(self, "votes", votes)

    @property
    def m(self) -> int:
        if not self.votes:
            raise OrderError("empty profile has no alternative universe")
        return self.votes[0].m

    def with_vote(self, vote: LinearOrder) -> "Profile":
        return Profile(self.votes + (vote,))

    def __iter__(self) -> Iterator[LinearOrder]:
        return iter(self.votes)

    def __len__(self) -> int:
        return len(self.votes)


@dataclass(frozen=True)
class PartialProfile:
    entries: tuple[PartialOrder, ...]

    def __post_init__(self) -> None:
        entries = tuple(self.entries)
        if len({e.m for e in entries}) > 1:
            raise OrderError("ballots span different alternative universes")
        object.__setattr__(self, "entries", entries)

    @property
    def m(self) -> int:
        if not self.entries:
            raise OrderError("empty partial profile has no alternative universe")
        return self.entries[0].m

    @classmethod
    def from_profile(cls, profile: Profile) -> "PartialProfile":
        return cls(tuple(v.as_partial() for v in profile))

    def with_entry(self, entry: PartialOrder) -> "PartialProfile":
        return PartialProfile(self.entries + (entry,))

    def __iter__(self) -> Iterator[PartialOrder]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def tie_break_argmax(scores: Sequence[int]) -> Alternative:
    """Lowest index attaining the maximum score."""
    best = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best]:
            best = i
    return best
