"""Exact combinatorial kernels.

Bell-family counting, set-partition enumeration, and rational linear
algebra. Everything in here returns ints or Fractions; no floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Rational = Fraction

# A set partition is a tuple of bitmasks (bit p-1 set means element p is in
# the block), ordered by ascending minimal element.
Partition = tuple[int, ...]

# Partition streams refuse ground sets larger than this unless overridden.
DEFAULT_PARTITION_CAP = 12


class CapExceededError(RuntimeError):
    """An enumeration was asked to exceed its configured size cap."""


class SingularMatrixError(ValueError):
    """The coefficient matrix of a linear solve has no inverse."""


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial expects n >= 0, got {n}")
    return math.factorial(n)


@lru_cache(maxsize=None)
def stirling2(r: int, i: int) -> int:
    """Number of partitions of r labeled elements into exactly i nonempty blocks."""
    if r < 0 or i < 0:
        raise ValueError("stirling2 expects nonnegative arguments")
    if r == 0:
        return 1 if i == 0 else 0
    if i == 0 or i > r:
        return 0
    return i * stirling2(r - 1, i) + stirling2(r - 1, i - 1)


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    """Number of set partitions of n labeled elements."""
    if n < 0:
        raise ValueError("bell expects n >= 0")
    return sum(stirling2(n, i) for i in range(n + 1))


def r_bell(n: int, r: int) -> int:
    """Partitions of n + r labeled elements with the first r pairwise separated.

    Computed as sum over j of C(n, j) * bell(j) * r**(n - j); the r = 0 and
    r = 1 cases reduce to bell(n) and bell(n + 1).
    """
    if n < 0 or r < 0:
        raise ValueError("r_bell expects nonnegative arguments")
    return sum(math.comb(n, j) * bell(j) * r ** (n - j) for j in range(n + 1))


def enumerate_set_partitions(ground_size: int, cap: int | None = None) -> Iterator[Partition]:
    """Yield every set partition of {1..ground_size} exactly once.

    Order is restricted-growth-string order: element 1 opens block 0 and each
    later element tries existing blocks first (ascending), then a new block.
    Blocks inside a partition are ordered by first appearance, which equals
    ascending minimal element. The cap is validated before the first yield.
    """
    limit = DEFAULT_PARTITION_CAP if cap is None else cap
    if ground_size < 1:
        raise ValueError(f"ground_size must be >= 1, got {ground_size}")
    if ground_size > limit:
        raise CapExceededError(
            f"set partitions of {ground_size} elements exceed the cap of {limit}"
        )

    def walk(element: int, blocks: list[int]) -> Iterator[Partition]:
        if element > ground_size:
            yield tuple(blocks)
            return
        bit = 1 << (element - 1)
        for idx in range(len(blocks)):
            blocks[idx] |= bit
            yield from walk(element + 1, blocks)
            blocks[idx] &= ~bit
        blocks.append(bit)
        yield from walk(element + 1, blocks)
        blocks.pop()

    return walk(1, [])


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable rectangular matrix of exact rationals."""

    rows: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Rational | int]]) -> "RationalMatrix":
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if data and any(len(row) != len(data[0]) for row in data):
            raise ValueError("all matrix rows must have equal length")
        return cls(data)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def is_square(self) -> bool:
        return self.nrows == self.ncols


def _as_matrix(a: RationalMatrix | Iterable[Iterable[Rational | int]]) -> RationalMatrix:
    if isinstance(a, RationalMatrix):
        return a
    return RationalMatrix.from_rows(a)


def determinant(a: RationalMatrix | Iterable[Iterable[Rational | int]]) -> Fraction:
    """Exact determinant via rational Gaussian elimination."""
    m = _as_matrix(a)
    if not m.is_square():
        raise ValueError(f"determinant needs a square matrix, got {m.nrows}x{m.ncols}")
    size = m.nrows
    if size == 0:
        return Fraction(1)
    work = [list(row) for row in m.rows]
    sign = 1
    det = Fraction(1)
    for col in range(size):
        pivot_row = next((r for r in range(col, size) if work[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            sign = -sign
        pivot = work[col][col]
        det *= pivot
        for r in range(col + 1, size):
            if work[r][col] != 0:
                factor = work[r][col] / pivot
                for c in range(col, size):
                    work[r][c] -= factor * work[col][c]
    return det * sign


def solve_linear(
    a: RationalMatrix | Iterable[Iterable[Rational | int]],
    b: Sequence[Rational | int],
) -> tuple[Fraction, ...]:
    """Solve A x = b exactly. A must be square and nonsingular."""
    m = _as_matrix(a)
    if not m.is_square():
        raise ValueError(f"solve_linear needs a square matrix, got {m.nrows}x{m.ncols}")
    size = m.nrows
    rhs = [Fraction(x) for x in b]
    if len(rhs) != size:
        raise ValueError(f"right-hand side has length {len(rhs)}, expected {size}")
    work = [list(row) for row in m.rows]
    for col in range(size):
        pivot_row = next((r for r in range(col, size) if work[r][col] != 0), None)
        if pivot_row is None:
            raise SingularMatrixError("coefficient matrix is singular")
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            rhs[col], rhs[pivot_row] = rhs[pivot_row], rhs[col]
        pivot = work[col][col]
        for r in range(col + 1, size):
            if work[r][col] != 0:
                factor = work[r][col] / pivot
                for c in range(col, size):
                    work[r][c] -= factor * work[col][c]
                rhs[r] -= factor * rhs[col]
    out = [Fraction(0)] * size
    for row in range(size - 1, -1, -1):
        acc = rhs[row]
        for c in range(row + 1, size):
            acc -= work[row][c] * out[c]
        out[row] = acc / work[row][row]
    return tuple(out)
