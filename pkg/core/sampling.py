"""Seeded random orders and profiles for oracle tests and sweeps."""

from __future__ import annotations

import random

from core.orders import LinearOrder, PartialOrder, PartialProfile, Profile, transitive_close


def random_linear_order(rng: random.Random, m: int) -> LinearOrder:
    ranking = list(range(m))
    rng.shuffle(ranking)
    return LinearOrder(tuple(ranking))


def random_profile(rng: random.Random, m: int, n: int) -> Profile:
    return Profile(tuple(random_linear_order(rng, m) for _ in range(n)))


def random_partial_order(rng: random.Random, m: int, k: int) -> PartialOrder:
    """A random order with min(k, m-1) adjacent pairs forgotten.

    Nothing else ranks between an adjacent pair, so closing the remaining pairs
    never restores a dropped one: the result has exactly that many
    undetermined pairs.
    """
    base = random_linear_order(rng, m)
    positions = rng.sample(range(m - 1), min(k, m - 1))
    dropped = {(base.ranking[i], base.ranking[i + 1]) for i in positions}
    return transitive_close(set(base.pairs()) - dropped, m)


def random_partial_profile(rng: random.Random, m: int, n: int, k: int) -> PartialProfile:
    return PartialProfile(tuple(random_partial_order(rng, m, rng.randint(0, k)) for _ in range(n)))
