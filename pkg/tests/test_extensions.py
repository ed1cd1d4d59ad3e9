from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.extensions import (
    Complete,
    EnumerationTooLarge,
    NoInformation,
    Partial,
    WinnerOnly,
    count_linear_extensions,
    enumerate_information_set,
    extension_with_bottom,
    extension_with_top,
    information_set_size,
    linear_extensions,
    necessary_winner,
    possible_winners,
    profile_extensions,
)
from core.orders import LinearOrder, PartialOrder, PartialProfile, Profile, transitive_close
from core.rules import borda, plurality

CHAIN = LinearOrder((0, 1, 2)).as_partial()
# c1 and c2 both above c3, order between them unknown
OPEN_TOP = transitive_close({(0, 2), (1, 2)}, 3)
COMPROMISE = PartialProfile((CHAIN, OPEN_TOP))


def empty(m: int) -> PartialOrder:
    return transitive_close(set(), m)


def partial_orders(max_m=5):
    def build(ranking):
        v = LinearOrder(tuple(ranking))
        return st.sets(st.sampled_from(list(v.pairs()))).map(lambda s: transitive_close(s, v.m))

    return st.integers(2, max_m).flatmap(lambda m: st.permutations(list(range(m)))).flatmap(build)


def test_linear_extensions_counts():
    assert len(list(linear_extensions(empty(3)))) == 6
    assert list(linear_extensions(CHAIN)) == [LinearOrder((0, 1, 2))]
    assert len(list(linear_extensions(transitive_close({(0, 1)}, 3)))) == 3


def test_linear_extensions_are_lexicographic():
    rankings = [v.ranking for v in linear_extensions(empty(3))]
    assert rankings == sorted(rankings)


@given(partial_orders())
@settings(max_examples=60, deadline=None)
def test_extension_count_matches_permutation_filter(po):
    brute = [
        LinearOrder(p) for p in itertools.permutations(range(po.m)) if po.allows(LinearOrder(p))
    ]
    assert list(linear_extensions(po)) == brute
    assert count_linear_extensions(po) == len(brute)


def test_profile_extensions_product_rule():
    assert len(list(profile_extensions(PartialProfile((CHAIN, CHAIN))))) == 1
    assert len(list(profile_extensions(PartialProfile((empty(3), CHAIN))))) == 6


@pytest.mark.parametrize("k", [1, 2, 3])
def test_independent_adjacent_swaps_double_per_pair(k):
    m = 2 * k
    # blocks {c1,c2}, {c3,c4}, ... in chain order, each block left open
    kept = [(a, b) for a in range(m) for b in range(m) if a // 2 < b // 2]
    po = transitive_close(kept, m)
    assert po.undetermined_count == k
    assert len(list(linear_extensions(po))) == 2**k


def test_enumerate_information_sets():
    p = Profile((LinearOrder((0, 1)),))
    assert list(enumerate_information_set(Complete(p))) == [p]
    assert len(list(enumerate_information_set(NoInformation(2, 2)))) == 4
    only = list(enumerate_information_set(WinnerOnly(plurality(), 1, 1, 2)))
    assert only == [Profile((LinearOrder((1, 0)),))]


def test_winner_only_sets_partition_no_information():
    sizes = [len(list(enumerate_information_set(WinnerOnly(borda(), w, 2, 3)))) for w in range(3)]
    assert sum(sizes) == 36
    assert sizes[0] > sizes[2]


def test_enumeration_cap_reports_exact_count():
    with pytest.raises(EnumerationTooLarge) as exc:
        enumerate_information_set(NoInformation(3, 3), cap=100)
    assert exc.value.count == 216
    assert exc.value.cap == 100
    pp = PartialProfile((empty(4), empty(4)))
    assert information_set_size(Partial(pp)) == math.factorial(4) ** 2


def test_extension_with_top_and_bottom():
    po = transitive_close({(1, 0), (2, 0)}, 3)
    assert extension_with_top(po, 0) is None
    assert extension_with_top(po, 2) == LinearOrder((2, 1, 0))
    assert extension_with_bottom(po, 0) == LinearOrder((1, 2, 0))
    assert extension_with_bottom(po, 1) is None


def test_possible_winners_compromise_instance():
    info = Partial(COMPROMISE)
    assert possible_winners(plurality(), info, LinearOrder((2, 1, 0))) == {0}
    assert possible_winners(plurality(), info, LinearOrder((1, 2, 0))) == {0, 1}


def test_necessary_winner_compromise_instance():
    info = Partial(COMPROMISE)
    assert necessary_winner(plurality(), info, LinearOrder((2, 1, 0))) == 0
    assert necessary_winner(plurality(), info, LinearOrder((1, 2, 0))) is None


def test_complete_information_winner_sets():
    p = Profile((LinearOrder((1, 0, 2)), LinearOrder((2, 1, 0))))
    assert possible_winners(borda(), Complete(p)) == {1}
    assert necessary_winner(borda(), Complete(p)) == 1


@given(partial_orders(max_m=4), partial_orders(max_m=4))
@settings(max_examples=30, deadline=None)
def test_necessary_winner_iff_single_possible_winner(a, b):
    if a.m != b.m:
        return
    info = Partial(PartialProfile((a, b)))
    pw = possible_winners(borda(), info)
    nw = necessary_winner(borda(), info)
    assert (nw is not None) == (len(pw) == 1)


@given(partial_orders(max_m=4), st.data())
@settings(max_examples=30, deadline=None)
def test_more_pairs_never_add_possible_winners(po, data):
    witness = data.draw(st.sampled_from(list(linear_extensions(po))))
    extra = data.draw(st.sets(st.sampled_from(list(witness.pairs()))))
    tighter = po.with_pairs(extra)
    vote = LinearOrder(tuple(range(po.m)))
    loose = possible_winners(plurality(), Partial(PartialProfile((po, po))), vote)
    tight = possible_winners(plurality(), Partial(PartialProfile((tighter, po))), vote)
    assert tight <= loose
