"""Voting rules evaluated on complete profiles with the fixed tie-break.

Every rule is resolute: ties go to the lowest-index alternative. Ranked pairs
processes ordered pairs by (margin desc, source asc, target asc); STV drops the
highest-index alternative among those with the lowest plurality score.
"""

from __future__ import annotations

import enum
import logging
import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import networkx as nx

from core.orders import Alternative, LinearOrder, Profile, tie_break_argmax

log = logging.getLogger(__name__)

# A voting tree is a leaf (alternative index) or a pair of subtrees.
Tree = Union[int, tuple["Tree", "Tree"]]


class RuleError(ValueError):
    """Rule specification invalid for the alternative universe."""


class RuleKind(str, enum.Enum):
    SCORING = "scoring"
    PLURALITY = "plurality"
    VETO = "veto"
    BORDA = "borda"
    COPELAND = "copeland"
    MAXIMIN = "maximin"
    RANKED_PAIRS = "ranked_pairs"
    STV = "stv"
    VOTING_TREE = "voting_tree"


WMG_BASED = {RuleKind.COPELAND, RuleKind.MAXIMIN, RuleKind.RANKED_PAIRS, RuleKind.VOTING_TREE}


@dataclass(frozen=True)
class VotingRule:
    kind: RuleKind
    vector: Optional[tuple[int, ...]] = None
    tree: Optional[Tree] = None
    # Copeland points for a pairwise tie, in units where a win is 2.
    copeland_tie_points: int = 0

    @property
    def is_wmg_based(self) -> bool:
        return self.kind in WMG_BASED

    def scoring_vector(self, m: int) -> tuple[int, ...]:
        if self.kind is RuleKind.PLURALITY:
            return (1,) + (0,) * (m - 1)
        if self.kind is RuleKind.VETO:
            return (1,) * (m - 1) + (0,)
        if self.kind is RuleKind.BORDA:
            return tuple(range(m - 1, -1, -1))
        if self.kind is RuleKind.SCORING and self.vector is not None:
            return self.vector
        raise RuleError(f"{self.name} is not a positional scoring rule")

    @property
    def is_positional(self) -> bool:
        return self.kind in (RuleKind.SCORING, RuleKind.PLURALITY, RuleKind.VETO, RuleKind.BORDA)

    @property
    def name(self) -> str:
        if self.kind is RuleKind.SCORING:
            return "score:" + ",".join(str(x) for x in self.vector or ())
        if self.kind is RuleKind.VOTING_TREE:
            return "tree" if self.tree is None else "tree:" + format_tree(self.tree)
        if self.kind is RuleKind.RANKED_PAIRS:
            return "rankedpairs"
        return self.kind.value


def plurality() -> VotingRule:
    return VotingRule(RuleKind.PLURALITY)


def veto() -> VotingRule:
    return VotingRule(RuleKind.VETO)


def borda() -> VotingRule:
    return VotingRule(RuleKind.BORDA)


def copeland(tie_points: int = 0) -> VotingRule:
    return VotingRule(RuleKind.COPELAND, copeland_tie_points=tie_points)


def maximin() -> VotingRule:
    return VotingRule(RuleKind.MAXIMIN)


def ranked_pairs() -> VotingRule:
    return VotingRule(RuleKind.RANKED_PAIRS)


def stv() -> VotingRule:
    return VotingRule(RuleKind.STV)


def scoring(vector: Sequence[int]) -> VotingRule:
    return VotingRule(RuleKind.SCORING, vector=tuple(vector))


def voting_tree(tree: Optional[Tree] = None) -> VotingRule:
    return VotingRule(RuleKind.VOTING_TREE, tree=tree)


def default_tree(m: int) -> Tree:
    """Left-to-right balanced tree over c1..cm."""

    def build(leaves: list[int]) -> Tree:
        if len(leaves) == 1:
            return leaves[0]
        mid = (len(leaves) + 1) // 2
        return (build(leaves[:mid]), build(leaves[mid:]))

    return build(list(range(m)))


def tree_leaves(tree: Tree) -> list[int]:
    if isinstance(tree, int):
        return [tree]
    return tree_leaves(tree[0]) + tree_leaves(tree[1])


def format_tree(tree: Tree) -> str:
    if isinstance(tree, int):
        return str(tree + 1)
    return f"({format_tree(tree[0])},{format_tree(tree[1])})"


def parse_tree(text: str) -> Tree:
    """Parse nested parens with 1-based leaves, e.g. ``((1,2),3)``."""
    tokens = re.findall(r"\(|\)|,|\d+", text.replace(" ", ""))
    if "".join(tokens) != text.replace(" ", ""):
        raise RuleError(f"cannot parse tree {text!r}")
    pos = 0

    def node() -> Tree:
        nonlocal pos
        if pos >= len(tokens):
            raise RuleError(f"truncated tree {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok.isdigit():
            return int(tok) - 1
        if tok != "(":
            raise RuleError(f"unexpected {tok!r} in tree {text!r}")
        left = node()
        if pos >= len(tokens) or tokens[pos] != ",":
            raise RuleError(f"expected ',' in tree {text!r}")
        pos += 1
        right = node()
        if pos >= len(tokens) or tokens[pos] != ")":
            raise RuleError(f"expected ')' in tree {text!r}")
        pos += 1
        return (left, right)

    tree = node()
    if pos != len(tokens):
        raise RuleError(f"trailing input in tree {text!r}")
    return tree


def parse_rule(name: str, copeland_tie_points: int = 0) -> VotingRule:
    key = name.strip().lower()
    simple = {
        "plurality": plurality(),
        "veto": veto(),
        "borda": borda(),
        "copeland": copeland(copeland_tie_points),
        "maximin": maximin(),
        "rankedpairs": ranked_pairs(),
        "ranked_pairs": ranked_pairs(),
        "stv": stv(),
        "tree": voting_tree(),
    }
    if key in simple:
        return simple[key]
    if key.startswith("score:"):
        try:
            return scoring([int(x) for x in key[6:].split(",")])
        except ValueError:
            raise RuleError(f"bad scoring vector in {name!r}") from None
    if key.startswith("tree:"):
        return voting_tree(parse_tree(key[5:]))
    raise RuleError(f"unknown rule {name!r}")


def validate_rule(rule: VotingRule, m: int) -> None:
    if rule.kind is RuleKind.SCORING:
        vec = rule.vector or ()
        if len(vec) != m:
            raise RuleError(f"scoring vector has {len(vec)} entries, expected {m}")
        if any(vec[i] < vec[i + 1] for i in range(m - 1)) or (m > 1 and vec[0] <= vec[-1]):
            raise RuleError(f"scoring vector {vec} must be non-increasing with first > last")
    if rule.kind is RuleKind.VOTING_TREE and rule.tree is not None:
        if sorted(tree_leaves(rule.tree)) != list(range(m)):
            raise RuleError(f"voting tree leaves must be exactly c1..c{m}")
    if rule.copeland_tie_points not in (0, 1):
        raise RuleError("copeland_tie_points must be 0 or 1")


@dataclass(frozen=True)
class WeightedMajorityGraph:
    m: int
    margin: tuple[tuple[int, ...], ...]

    def __add__(self, other: "WeightedMajorityGraph") -> "WeightedMajorityGraph":
        if other.m != self.m:
            raise RuleError("cannot add graphs over different universes")
        return WeightedMajorityGraph(
            self.m,
            tuple(
                tuple(self.margin[i][j] + other.margin[i][j] for j in range(self.m))
                for i in range(self.m)
            ),
        )

    def edges(self) -> list[tuple[int, int, int]]:
        """Positive-weight edges (a, b, w) in index order."""
        return [
            (i, j, self.margin[i][j])
            for i in range(self.m)
            for j in range(self.m)
            if self.margin[i][j] > 0
        ]

    def beats(self, a: Alternative, b: Alternative) -> bool:
        """Pairwise election; an even split goes to the lower index."""
        w = self.margin[a][b]
        return w > 0 or (w == 0 and a < b)


def weighted_majority_graph(profile: Profile) -> WeightedMajorityGraph:
    m = profile.m
    margin = [[0] * m for _ in range(m)]
    for vote in profile:
        for a, b in vote.pairs():
            margin[a][b] += 1
            margin[b][a] -= 1
    return WeightedMajorityGraph(m, tuple(tuple(row) for row in margin))


def condorcet_winner(wmg: WeightedMajorityGraph) -> Optional[Alternative]:
    for i in range(wmg.m):
        if all(wmg.margin[i][j] > 0 for j in range(wmg.m) if j != i):
            return i
    return None


def scoring_totals(vector: Sequence[int], profile: Profile) -> list[int]:
    totals = [0] * len(vector)
    for vote in profile:
        for pos, a in enumerate(vote.ranking):
            totals[a] += vector[pos]
    return totals


def copeland_scores(wmg: WeightedMajorityGraph, tie_points: int = 0) -> list[int]:
    scores = [0] * wmg.m
    for i in range(wmg.m):
        for j in range(wmg.m):
            if i == j:
                continue
            if wmg.margin[i][j] > 0:
                scores[i] += 2
            elif wmg.margin[i][j] == 0:
                scores[i] += tie_points
    return scores


def maximin_scores(wmg: WeightedMajorityGraph) -> list[int]:
    if wmg.m == 1:
        return [0]
    return [min(wmg.margin[i][j] for j in range(wmg.m) if j != i) for i in range(wmg.m)]


def ranked_pairs_ranking(wmg: WeightedMajorityGraph) -> LinearOrder:
    m = wmg.m
    pairs = sorted(
        ((i, j) for i in range(m) for j in range(m) if i != j),
        key=lambda p: (-wmg.margin[p[0]][p[1]], p[0], p[1]),
    )
    locked = nx.DiGraph()
    locked.add_nodes_from(range(m))
    for a, b in pairs:
        if locked.has_edge(b, a) or nx.has_path(locked, b, a):
            log.debug("ranked pairs: skip %d>%d (margin %d)", a, b, wmg.margin[a][b])
            continue
        if locked.has_edge(a, b):
            continue
        locked.add_edge(a, b)
        log.debug("ranked pairs: lock %d>%d (margin %d)", a, b, wmg.margin[a][b])
    # Locked edges form a transitive tournament once all pairs are seen.
    return LinearOrder(tuple(nx.lexicographical_topological_sort(locked)))


def _tree_winner(tree: Tree, wmg: WeightedMajorityGraph) -> Alternative:
    if isinstance(tree, int):
        return tree
    left = _tree_winner(tree[0], wmg)
    right = _tree_winner(tree[1], wmg)
    return left if wmg.beats(left, right) else right


def _stv_winner(profile: Profile) -> Alternative:
    remaining = set(range(profile.m))
    while len(remaining) > 1:
        tally = {a: 0 for a in remaining}
        for vote in profile:
            for a in vote.ranking:
                if a in remaining:
                    tally[a] += 1
                    break
        low = min(tally.values())
        loser = max(a for a in remaining if tally[a] == low)
        remaining.discard(loser)
    return next(iter(remaining))


def evaluate_wmg(rule: VotingRule, wmg: WeightedMajorityGraph) -> Alternative:
    if rule.kind is RuleKind.COPELAND:
        return tie_break_argmax(copeland_scores(wmg, rule.copeland_tie_points))
    if rule.kind is RuleKind.MAXIMIN:
        return tie_break_argmax(maximin_scores(wmg))
    if rule.kind is RuleKind.RANKED_PAIRS:
        return ranked_pairs_ranking(wmg).top
    if rule.kind is RuleKind.VOTING_TREE:
        return _tree_winner(rule.tree if rule.tree is not None else default_tree(wmg.m), wmg)
    raise RuleError(f"{rule.name} is not based on the weighted majority graph")


def evaluate(rule: VotingRule, profile: Profile) -> Alternative:
    if not len(profile):
        raise RuleError("cannot evaluate an empty profile")
    if rule.is_positional:
        return tie_break_argmax(scoring_totals(rule.scoring_vector(profile.m), profile))
    if rule.kind is RuleKind.STV:
        return _stv_winner(profile)
    return evaluate_wmg(rule, weighted_majority_graph(profile))
