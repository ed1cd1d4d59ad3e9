from __future__ import annotations

import random

import pytest

from core.domination import dominates, find_dominating_manipulation
from core.extensions import Partial, possible_winners, profile_extensions
from core.orders import LinearOrder, PartialProfile, Profile, transitive_close
from core.reductions import (
    PossibleWinnerInstance,
    ReductionError,
    X3CInstance,
    gen_borda_domination,
    pw1_to_domination,
    pw2_to_dominating_manipulation,
    shift_graph,
    solve_x3c,
    synthesize_profile,
    verify_pw_conditions,
    wmg_partition,
)
from core.rules import (
    WeightedMajorityGraph,
    borda,
    copeland,
    evaluate,
    maximin,
    plurality,
    weighted_majority_graph,
)
from core.sampling import random_profile


def x3c(q, *sets):
    return X3CInstance(q, tuple(frozenset(s) for s in sets))


def pw(pp, c=1, rule=None):
    return PossibleWinnerInstance(rule or copeland(), PartialProfile(tuple(pp)), c)


# Copeland instances with c = c2, d* = c1
ONE_OPEN = pw([transitive_close({(0, 2)}, 3)])
CHAIN_ONLY = pw([LinearOrder((0, 1, 2)).as_partial()])
TWO_BALLOTS = pw([transitive_close({(0, 2), (0, 3)}, 4), LinearOrder((1, 0, 2, 3)).as_partial()])
THIRD_WINNER = pw([transitive_close({(0, 2), (3, 1)}, 4)])
WIDE_FAN = pw([transitive_close({(0, 2), (0, 3), (0, 4)}, 5)])
# the first two ballots are reverses and cancel in the majority graph
CANCELLING_PAIR = pw(
    [LinearOrder((1, 0, 2)).as_partial(), LinearOrder((2, 0, 1)).as_partial(), transitive_close({(0, 2)}, 3)]
)


def test_x3c_validation():
    with pytest.raises(ReductionError, match="multiple of 3"):
        x3c(4, {1, 2, 3})
    with pytest.raises(ReductionError, match="3-subset"):
        x3c(3, {1, 2})
    with pytest.raises(ReductionError, match="3-subset"):
        x3c(3, {1, 2, 4})


def test_solve_x3c():
    assert solve_x3c(x3c(6, {1, 2, 3}, {4, 5, 6}, {1, 4, 5})) == (0, 1)
    assert solve_x3c(x3c(6, {1, 2, 3}, {1, 4, 5}, {2, 5, 6})) is None
    assert solve_x3c(x3c(3, {1, 2, 3})) == (0,)


def test_borda_instance_structure():
    inst, cert = gen_borda_domination(x3c(3, {1, 2, 3}, {1, 2, 3}, {1, 2, 3}))
    assert inst.pp.m == 6
    assert inst.rule == borda()
    assert [po.undetermined_count for po in inst.pp.entries[:3]] == [4, 4, 4]
    assert all(po.is_linear() for po in inst.pp.entries[3:])
    assert inst.vm == inst.v == LinearOrder((1, 0, 5, 2, 3, 4))
    assert inst.u == LinearOrder((1, 5, 0, 2, 3, 4))
    assert cert.holds(3)
    assert cert.scores[1] - cert.scores[0] == 4
    assert all(cert.scores[0] - cert.scores[i] == 1 for i in (2, 3, 4))
    assert all(count >= 0 for count in cert.padding.values())


def test_borda_certificate_matches_recomputed_scores():
    inst, cert = gen_borda_domination(x3c(6, {1, 2, 3}, {4, 5, 6}, {1, 4, 5}))
    assert cert.holds(6)
    assert cert.scores[1] - cert.scores[0] == 8


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_borda_domination_at_q3_is_always_solvable(t):
    x = x3c(3, *([{1, 2, 3}] * t))
    inst, _ = gen_borda_domination(x)
    assert solve_x3c(x) is not None
    assert dominates(inst.rule, Partial(inst.pp), inst.vm, inst.u, inst.v).dominates


@pytest.mark.parametrize(
    "sets, solvable",
    [
        ([{1, 2, 3}, {4, 5, 6}, {1, 4, 5}], True),
        ([{1, 2, 3}, {1, 4, 5}, {2, 5, 6}], False),
        ([{1, 2, 3}, {1, 2, 3}, {4, 5, 6}], True),
        ([{1, 2, 4}, {1, 3, 5}, {2, 3, 6}], False),
        ([{1, 2, 3}, {4, 5, 6}, {1, 2, 4}, {3, 5, 6}], True),
        ([{1, 2, 4}, {1, 3, 5}, {2, 3, 6}, {4, 5, 6}], False),
    ],
)
def test_borda_domination_matches_x3c(sets, solvable):
    x = x3c(6, *sets)
    assert (solve_x3c(x) is not None) == solvable
    inst, _ = gen_borda_domination(x)
    assert dominates(inst.rule, Partial(inst.pp), inst.vm, inst.u, inst.v).dominates == solvable


def test_borda_instance_never_elects_d():
    inst, _ = gen_borda_domination(x3c(3, {1, 2, 3}, {1, 2, 3}))
    d = inst.pp.m - 1
    for profile in profile_extensions(inst.pp):
        assert evaluate(borda(), profile.with_vote(inst.v)) != d
        assert evaluate(borda(), profile.with_vote(inst.u)) != d


def test_wmg_partition_examples():
    chain = PartialProfile((LinearOrder((0, 1, 2)).as_partial(),))
    part = wmg_partition(plurality(), chain)
    assert list(part) == [0] and len(part[0]) == 1

    compromise = PartialProfile(
        (LinearOrder((0, 1, 2)).as_partial(), transitive_close({(0, 2), (1, 2)}, 3))
    )
    part = wmg_partition(plurality(), compromise)
    assert list(part) == [0] and len(part[0]) == 2

    part = wmg_partition(plurality(), PartialProfile((transitive_close(set(), 2),)))
    assert sorted(part) == [0, 1]
    assert {g.margin[0][1] for g in part[0] | part[1]} == {1, -1}


def test_shift_graph():
    g = shift_graph(4, 1, [2, 3])
    assert g.margin[2][1] == 2 and g.margin[1][2] == -2
    assert g.margin[3][1] == 2
    assert g.margin[0][1] == 0


def test_synthesize_profile_realizes_graphs():
    rng = random.Random(4)
    for _ in range(30):
        m = rng.randint(2, 5)
        g = weighted_majority_graph(random_profile(rng, m, rng.randint(1, 6)))
        assert weighted_majority_graph(synthesize_profile(g)) == g
        shifted = g + shift_graph(m, 0, [1])
        assert weighted_majority_graph(synthesize_profile(shifted)) == shifted


def test_synthesize_profile_zero_graph_and_mixed_parity():
    zero = WeightedMajorityGraph(3, ((0, 0, 0), (0, 0, 0), (0, 0, 0)))
    assert weighted_majority_graph(synthesize_profile(zero)) == zero
    mixed = WeightedMajorityGraph(3, ((0, 1, 2), (-1, 0, 1), (-2, -1, 0)))
    with pytest.raises(ReductionError, match="parity"):
        synthesize_profile(mixed)


def test_pw1_transform_structure():
    inst = pw1_to_domination(TWO_BALLOTS, 0, [2])
    assert len(inst.pp) == len(TWO_BALLOTS.pp) + 1
    assert inst.vm == inst.v == LinearOrder((0, 1, 2, 3))
    assert inst.u == LinearOrder((0, 2, 1, 3))
    assert inst.pp.entries[-1] == LinearOrder((3, 2, 1, 0)).as_partial()


def test_pw1_transform_wmg_identities():
    inst = pw1_to_domination(TWO_BALLOTS, 0, [2])
    shift = shift_graph(4, 1, [2])
    for profile in profile_extensions(TWO_BALLOTS.pp):
        base = weighted_majority_graph(profile)
        padded = Profile(profile.votes + (inst.v.reversed(),))
        assert weighted_majority_graph(padded.with_vote(inst.v)) == base
        assert weighted_majority_graph(padded.with_vote(inst.u)) == base + shift


def test_pw_transform_preconditions():
    with pytest.raises(ReductionError):
        pw1_to_domination(ONE_OPEN, 0, [])
    with pytest.raises(ReductionError):
        pw1_to_domination(ONE_OPEN, 0, [1])
    with pytest.raises(ReductionError):
        pw1_to_domination(ONE_OPEN, 1, [2])
    with pytest.raises(ReductionError):
        pw1_to_domination(ONE_OPEN, 2, [2])
    with pytest.raises(ReductionError, match="weighted majority graph"):
        pw1_to_domination(pw(ONE_OPEN.pp, rule=borda()), 0, [2])


def test_pw2_output_is_manipulation_instance():
    inst = pw2_to_dominating_manipulation(ONE_OPEN, 0, [2])
    assert inst.vm == LinearOrder((0, 1, 2))
    assert len(inst.pp) == 2


@pytest.mark.parametrize(
    "instance",
    [ONE_OPEN, CHAIN_ONLY, TWO_BALLOTS, WIDE_FAN, CANCELLING_PAIR],
    ids=["one-open", "chain", "two-ballots", "wide-fan", "cancelling-pair"],
)
def test_verify_pw_conditions_on_hand_built_instances(instance):
    assert verify_pw_conditions(copeland(), instance, 0, [2], level=1)
    assert verify_pw_conditions(copeland(), instance, 0, [2], level=2)


def test_verify_pw_conditions_failures():
    empty = pw([transitive_close(set(), 3)])
    # c3 can win an extension, so it cannot sit in C'
    assert not verify_pw_conditions(copeland(), empty, 0, [2], level=1)
    assert verify_pw_conditions(copeland(), THIRD_WINNER, 0, [2], level=1)
    assert not verify_pw_conditions(copeland(), THIRD_WINNER, 0, [2], level=2)
    with pytest.raises(ReductionError):
        verify_pw_conditions(plurality(), ONE_OPEN, 0, [2])
    with pytest.raises(ReductionError, match="level"):
        verify_pw_conditions(copeland(), ONE_OPEN, 0, [2], level=3)


@pytest.mark.parametrize(
    "instance",
    [ONE_OPEN, CHAIN_ONLY, TWO_BALLOTS, THIRD_WINNER, WIDE_FAN, CANCELLING_PAIR],
    ids=["one-open", "chain", "two-ballots", "third", "wide-fan", "cancelling-pair"],
)
def test_domination_iff_possible_winner(instance):
    assert verify_pw_conditions(copeland(), instance, 0, [2], level=1)
    inst = pw1_to_domination(instance, 0, [2])
    answer = dominates(inst.rule, Partial(inst.pp), inst.vm, inst.u, inst.v).dominates
    assert answer == (instance.c in possible_winners(copeland(), Partial(instance.pp)))


def test_pw2_manipulation_follows_possible_winner():
    found = pw2_to_dominating_manipulation(ONE_OPEN, 0, [2])
    assert find_dominating_manipulation(found.rule, Partial(found.pp), found.vm) is not None
    missing = pw2_to_dominating_manipulation(CHAIN_ONLY, 0, [2])
    assert find_dominating_manipulation(missing.rule, Partial(missing.pp), missing.vm) is None


def test_two_ballot_instance_manipulable():
    inst = pw2_to_dominating_manipulation(TWO_BALLOTS, 0, [2])
    assert find_dominating_manipulation(inst.rule, Partial(inst.pp), inst.vm) is not None


def test_wmg_partition_is_rule_specific():
    part = wmg_partition(maximin(), ONE_OPEN.pp)
    assert sum(len(v) for v in part.values()) == 3


@pytest.mark.parametrize("instance", [WIDE_FAN, CANCELLING_PAIR], ids=["wide-fan", "cancelling-pair"])
def test_reachable_winner_gives_domination(instance):
    assert instance.c in possible_winners(copeland(), Partial(instance.pp))
    inst = pw1_to_domination(instance, 0, [2])
    assert dominates(inst.rule, Partial(inst.pp), inst.vm, inst.u, inst.v).dominates
