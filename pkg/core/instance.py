"""Instance file grammar (1-based on disk).

    m 3
    n 2
    rule plurality
    order 1 2 3
    partial 2
    pair 1 3
    pair 2 3
    vm 3 2 1
    u 2 3 1

``m`` and ``n`` come first; then exactly n ballots, each a full ``order`` or a
``partial k`` header followed by k ``pair a b`` lines (a ≻ b). ``rule``, ``vm``,
``v`` and ``u`` are optional. Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from core.orders import LinearOrder, OrderError, PartialOrder, PartialProfile, Profile, transitive_close
from core.rules import RuleError, VotingRule, parse_rule

Ballot = Union[LinearOrder, PartialOrder]


class InstanceError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        super().__init__(message if line is None else f"{message} at line {line}")
        self.line = line


@dataclass(frozen=True)
class InstanceFile:
    m: int
    n: int
    ballots: tuple[Ballot, ...]
    rule: Optional[VotingRule] = None
    vm: Optional[LinearOrder] = None
    v: Optional[LinearOrder] = None
    u: Optional[LinearOrder] = None

    @property
    def is_complete(self) -> bool:
        return all(isinstance(b, LinearOrder) for b in self.ballots)

    def partial_profile(self) -> PartialProfile:
        return PartialProfile(
            tuple(b.as_partial() if isinstance(b, LinearOrder) else b for b in self.ballots)
        )

    def profile(self) -> Profile:
        if not self.is_complete:
            raise InstanceError("instance has partial ballots")
        return Profile(tuple(b for b in self.ballots if isinstance(b, LinearOrder)))


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise InstanceError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _indices(tokens: list[str], m: int, lineno: int) -> list[int]:
    values = _ints(tokens, lineno)
    for x in values:
        if not 1 <= x <= m:
            raise InstanceError(f"index {x} out of range 1..{m}", lineno)
    return [x - 1 for x in values]


def _order(tokens: list[str], m: int, lineno: int) -> LinearOrder:
    ranking = _indices(tokens, m, lineno)
    if len(ranking) != m:
        raise InstanceError(f"order needs {m} indices, got {len(ranking)}", lineno)
    try:
        return LinearOrder(tuple(ranking))
    except OrderError as e:
        raise InstanceError(str(e), lineno) from None


def parse_instance(text: str, copeland_tie_points: int = 0) -> InstanceFile:
    lines = [
        (no, line.split("#", 1)[0].split())
        for no, line in enumerate(text.splitlines(), start=1)
    ]
    lines = [(no, toks) for no, toks in lines if toks]
    header: dict[str, int] = {}
    ballots: list[Ballot] = []
    orders: dict[str, LinearOrder] = {}
    rule: Optional[VotingRule] = None
    pending: Optional[tuple[int, int, list[tuple[int, int]]]] = None  # (header line, k, pairs)

    def close_partial() -> None:
        nonlocal pending
        if pending is None:
            return
        start, k, pairs = pending
        if len(pairs) != k:
            raise InstanceError(f"partial ballot expects {k} pairs, got {len(pairs)}", start)
        ballots.append(transitive_close(pairs, header["m"]))
        pending = None

    for lineno, toks in lines:
        word, args = toks[0].lower(), toks[1:]
        if word in ("m", "n"):
            if word in header or ballots or pending:
                raise InstanceError(f"unexpected header {word!r}", lineno)
            if word == "n" and "m" not in header:
                raise InstanceError("file must start with m and n", lineno)
            if len(args) != 1:
                raise InstanceError(f"{word} takes one integer", lineno)
            header[word] = _ints(args, lineno)[0]
            if header[word] < (1 if word == "m" else 0):
                raise InstanceError(f"{word} out of range", lineno)
            continue
        if "m" not in header or "n" not in header:
            raise InstanceError("file must start with m and n", lineno)
        m = header["m"]
        if word == "pair":
            if pending is None:
                raise InstanceError("pair outside a partial ballot", lineno)
            if len(pending[2]) == pending[1]:
                raise InstanceError(f"partial ballot expects {pending[1]} pairs", lineno)
            if len(args) != 2:
                raise InstanceError("pair takes two indices", lineno)
            a, b = _indices(args, m, lineno)
            pending[2].append((a, b))
            try:
                transitive_close(pending[2], m)
            except OrderError:
                raise InstanceError("cycle", lineno) from None
            continue
        close_partial()
        if word == "order":
            ballots.append(_order(args, m, lineno))
        elif word == "partial":
            if len(args) != 1:
                raise InstanceError("partial takes a pair count", lineno)
            k = _ints(args, lineno)[0]
            if not 0 <= k <= m * (m - 1) // 2:
                raise InstanceError(f"pair count {k} out of range", lineno)
            pending = (lineno, k, [])
        elif word == "rule":
            try:
                rule = parse_rule(" ".join(args), copeland_tie_points)
            except RuleError as e:
                raise InstanceError(str(e), lineno) from None
        elif word in ("vm", "v", "u"):
            orders[word] = _order(args, m, lineno)
        else:
            raise InstanceError(f"unknown directive {toks[0]!r}", lineno)
        if word in ("order", "partial") and len(ballots) + (pending is not None) > header["n"]:
            raise InstanceError(f"more than n={header['n']} ballots", lineno)

    if "m" not in header or "n" not in header:
        raise InstanceError("missing m/n header")
    close_partial()
    if len(ballots) != header["n"]:
        raise InstanceError(f"expected {header['n']} ballots, got {len(ballots)}")
    return InstanceFile(
        header["m"], header["n"], tuple(ballots), rule,
        orders.get("vm"), orders.get("v"), orders.get("u"),
    )


def load_instance(path: Path, copeland_tie_points: int = 0) -> InstanceFile:
    return parse_instance(path.read_text(encoding="utf-8"), copeland_tie_points)


def _one_based(order: LinearOrder) -> str:
    return " ".join(str(a + 1) for a in order.ranking)


def serialize_instance(x: InstanceFile) -> str:
    out = [f"m {x.m}", f"n {x.n}"]
    if x.rule is not None:
        out.append(f"rule {x.rule.name}")
    for b in x.ballots:
        if isinstance(b, LinearOrder):
            out.append(f"order {_one_based(b)}")
        else:
            pairs = sorted(b.above)
            out.append(f"partial {len(pairs)}")
            out.extend(f"pair {a + 1} {c + 1}" for a, c in pairs)
    for key in ("vm", "v", "u"):
        order = getattr(x, key)
        if order is not None:
            out.append(f"{key} {_one_based(order)}")
    return "\n".join(out) + "\n"
