"""Ground game model.

Coalitions and partitions over 1-based players encoded as bitmasks,
partition-function games, the classic Shapley machinery, and the weight
schemes of the five extended values (MQ, EF, HY, SS, MY).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .combinatorics import (
    CapExceededError,
    Partition,
    Rational,
    bell,
    enumerate_set_partitions,
    factorial,
    r_bell,
)

__all__ = [
    "Coalition",
    "Partition",
    "ValueKind",
    "EmbeddedCoalition",
    "PartitionGame",
    "coalition",
    "members",
    "full_coalition",
    "canon_partition",
    "enumerate_embedded_coalitions",
    "zeta",
    "esv_weight",
    "weight_from_shape",
    "esv_bruteforce",
    "shapley",
    "externality_free_lift",
    "game_add",
    "game_scale",
]

# A coalition is a bitmask: bit p-1 set means player p belongs.
Coalition = int

_ZERO = Fraction(0)


def coalition(players: Iterable[int]) -> int:
    mask = 0
    for p in players:
        if p < 1:
            raise ValueError(f"player indices are 1-based, got {p}")
        mask |= 1 << (p - 1)
    return mask


def members(mask: int) -> tuple[int, ...]:
    out = []
    p = 1
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return tuple(out)


def full_coalition(n: int) -> int:
    return (1 << n) - 1


def canon_partition(blocks: Iterable[int]) -> Partition:
    """Order blocks by ascending minimal element."""
    return tuple(sorted(blocks, key=lambda m: m & -m))


def _check_partition(partition: Partition, n: int) -> None:
    union = 0
    for block in partition:
        if block == 0:
            raise ValueError("partition blocks must be nonempty")
        if block & union:
            raise ValueError("partition blocks must be pairwise disjoint")
        union |= block
    if union != full_coalition(n):
        raise ValueError(f"partition must cover players 1..{n}")


class ValueKind(Enum):
    """The five extended Shapley values."""

    MQ = "mq"
    EF = "ef"
    HY = "hy"
    SS = "ss"
    MY = "my"


@dataclass(frozen=True)
class EmbeddedCoalition:
    """A coalition together with the partition it sits in."""

    coalition: int
    partition: Partition

    def __post_init__(self) -> None:
        if self.coalition not in self.partition:
            raise ValueError("coalition must be a block of its partition")


class PartitionGame:
    """Sparse partition-function game; missing embedded coalitions value 0.

    Stored values are exact rationals; explicit zeros are dropped on
    construction so equality compares supports.
    """

    __slots__ = ("n", "_values")

    def __init__(
        self,
        n: int,
        values: Mapping[tuple[int, Iterable[int]], Rational | int] | None = None,
    ) -> None:
        if n < 1:
            raise ValueError(f"need at least one player, got n={n}")
        self.n = n
        store: dict[tuple[int, Partition], Fraction] = {}
        for (s, p), v in (values or {}).items():
            part = canon_partition(p)
            _check_partition(part, n)
            if s not in part:
                raise ValueError("coalition must be a block of its partition")
            val = Fraction(v)
            if val:
                store[(s, part)] = val
        self._values = store

    def value(self, s: int, partition: Iterable[int]) -> Fraction:
        return self._values.get((s, canon_partition(partition)), _ZERO)

    def items(self) -> list[tuple[tuple[int, Partition], Fraction]]:
        return sorted(self._values.items())

    def support_size(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartitionGame):
            return NotImplemented
        return self.n == other.n and self._values == other._values

    def __repr__(self) -> str:
        return f"PartitionGame(n={self.n}, nonzero={len(self._values)})"


def game_add(*games: PartitionGame) -> PartitionGame:
    if not games:
        raise ValueError("game_add needs at least one game")
    n = games[0].n
    if any(g.n != n for g in games):
        raise ValueError("games must share the player count")
    acc: dict[tuple[int, Partition], Fraction] = {}
    for g in games:
        for key, v in g.items():
            acc[key] = acc.get(key, _ZERO) + v
    return PartitionGame(n, acc)


def game_scale(factor: Rational | int, game: PartitionGame) -> PartitionGame:
    f = Fraction(factor)
    return PartitionGame(game.n, {key: f * v for key, v in game.items()})


def enumerate_embedded_coalitions(n: int, cap: int | None = None) -> Iterator[EmbeddedCoalition]:
    for partition in enumerate_set_partitions(n, cap):
        for block in partition:
            yield EmbeddedCoalition(block, partition)


@lru_cache(maxsize=None)
def _zeta_sizes(n: int, s: int, in_s: bool) -> Fraction:
    if in_s:
        return Fraction(factorial(s - 1) * factorial(n - s), factorial(n))
    return Fraction(-factorial(s) * factorial(n - s - 1), factorial(n))


def zeta(s: Coalition, i: int, n: int) -> Fraction:
    """Signed probability weight of coalition S for player i.

    For i in S this is the probability that, in a uniformly random ordering,
    the predecessors of i are exactly S minus i; for i outside S, minus the
    probability that they are exactly S.
    """
    if s == 0:
        raise ValueError("zeta is undefined for the empty coalition")
    if s >> n:
        raise ValueError(f"coalition is not a subset of 1..{n}")
    return _zeta_sizes(n, s.bit_count(), bool(s >> (i - 1) & 1))


@lru_cache(maxsize=None)
def weight_from_shape(
    kind: ValueKind,
    n: int,
    s: int,
    in_s: bool,
    other_sizes: tuple[int, ...],
    t_i: int = 0,
) -> Fraction:
    """Weight of an embedded coalition described only by block sizes.

    ``s`` is the size of the distinguished coalition S, ``other_sizes`` the
    sizes of the remaining blocks, ``in_s`` whether the target player sits in
    S, and ``t_i`` (used by MY when in_s is false) the size of the block
    holding the target player.
    """
    z = _zeta_sizes(n, s, in_s)
    p = len(other_sizes) + 1
    if kind is ValueKind.MQ:
        return z if p <= 2 else _ZERO
    if kind is ValueKind.EF:
        return z if p - 1 == n - s else _ZERO
    if kind is ValueKind.HY:
        return z * Fraction(r_bell(s, p - 1), bell(n))
    if kind is ValueKind.SS:
        prod = 1
        for t in other_sizes:
            prod *= factorial(t - 1)
        return z * Fraction(prod, factorial(n - s))
    if kind is ValueKind.MY:
        # Sum over blocks beside S that avoid the target player. When p = 1
        # the sum is empty and is taken as 0 before (p-2)! is ever formed.
        sizes = list(other_sizes)
        if not in_s:
            sizes.remove(t_i)
        total = _ZERO
        if sizes:
            f = factorial(p - 2)
            for t in sizes:
                total += Fraction(f, n - t)
        total -= Fraction(factorial(p - 1), n)
        return total if p % 2 == 0 else -total
    raise ValueError(f"unknown value kind: {kind!r}")


def _shape_of(ec_coalition: int, partition: Partition, i: int) -> tuple[int, bool, tuple[int, ...], int]:
    bit = 1 << (i - 1)
    s = ec_coalition.bit_count()
    in_s = bool(ec_coalition & bit)
    others = tuple(sorted(b.bit_count() for b in partition if b != ec_coalition))
    t_i = 0
    if not in_s:
        for b in partition:
            if b & bit:
                t_i = b.bit_count()
                break
    return s, in_s, others, t_i


def esv_weight(kind: ValueKind, ec: EmbeddedCoalition, i: int, n: int) -> Fraction:
    """Weight placed by the chosen extended value on one embedded coalition."""
    s, in_s, others, t_i = _shape_of(ec.coalition, ec.partition, i)
    return weight_from_shape(kind, n, s, in_s, others, t_i)


def esv_bruteforce(game: PartitionGame, kind: ValueKind, i: int, cap: int | None = None) -> Fraction:
    """Extended value of player i as the full weighted sum over embedded coalitions."""
    if not 1 <= i <= game.n:
        raise ValueError(f"player {i} outside 1..{game.n}")
    total = _ZERO
    for partition in enumerate_set_partitions(game.n, cap):
        for block in partition:
            v = game.value(block, partition)
            if v:
                s, in_s, others, t_i = _shape_of(block, partition, i)
                total += weight_from_shape(kind, game.n, s, in_s, others, t_i) * v
    return total


def shapley(n: int, char_fn: Mapping[int, Rational | int]) -> tuple[Fraction, ...]:
    """Classic Shapley value of a characteristic-function game.

    ``char_fn`` maps coalition masks to values; missing masks count as 0 and
    the empty coalition must be absent or 0.
    """
    if Fraction(char_fn.get(0, 0)) != 0:
        raise ValueError("the empty coalition must have value 0")
    out = []
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        acc = _ZERO
        for mask, v in char_fn.items():
            val = Fraction(v)
            if mask and val:
                acc += _zeta_sizes(n, mask.bit_count(), bool(mask & bit)) * val
        out.append(acc)
    return tuple(out)


def externality_free_lift(
    n: int, char_fn: Mapping[int, Rational | int], cap: int | None = None
) -> PartitionGame:
    """Partition game whose value ignores the partition beside S."""
    store: dict[tuple[int, Partition], Fraction] = {}
    for partition in enumerate_set_partitions(n, cap):
        for block in partition:
            v = Fraction(char_fn.get(block, 0))
            if v:
                store[(block, partition)] = v
    return PartitionGame(n, store)
