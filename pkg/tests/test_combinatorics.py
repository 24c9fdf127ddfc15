"""Exact counting primitives and the linear algebra kernel."""

from fractions import Fraction
from math import factorial as pyfact
from random import Random

import pytest

from exshap import (
    CapExceededError,
    RationalMatrix,
    SingularMatrixError,
    bell,
    determinant,
    enumerate_set_partitions,
    r_bell,
    solve_linear,
    stirling2,
)
from exshap.combinatorics import factorial

from .helpers import naive_bell, naive_r_bell, naive_stirling2, perm_det


def test_factorial_rejects_negative():
    with pytest.raises(ValueError):
        factorial(-1)
    assert factorial(0) == 1
    assert factorial(5) == 120


def test_stirling_and_bell_against_enumeration():
    for n in range(1, 7):
        assert bell(n) == naive_bell(n)
        for k in range(0, n + 2):
            assert stirling2(n, k) == naive_stirling2(n, k)


def test_bell_values():
    assert [bell(n) for n in range(0, 9)] == [
        1, 1, 2, 5, 15, 52, 203, 877, 4140,
    ]


def test_r_bell_small_table():
    assert r_bell(1, 2) == 3
    assert r_bell(2, 2) == 10
    assert r_bell(2, 3) == 17
    assert r_bell(2, 4) == 26
    assert r_bell(3, 2) == 37
    assert r_bell(3, 3) == 77
    assert r_bell(4, 2) == 151
    assert r_bell(1, 3) == 4
    assert r_bell(1, 4) == 5


def test_r_bell_against_enumeration():
    for n in range(0, 5):
        for r in range(1, 5):
            assert r_bell(n, r) == naive_r_bell(n, r)


def test_r_bell_reduces_to_bell():
    for n in range(0, 8):
        assert r_bell(n, 1) == bell(n + 1)


def test_bell_from_r_bell_identity():
    # B_{n+r} expands over r-constrained partitions by how the first r
    # elements clump together.
    for n in range(0, 9):
        for r in range(1, 9):
            assert bell(n + r) == sum(
                stirling2(r, i) * r_bell(n, i) for i in range(1, r + 1)
            )


def _poly_bell_det_form(k: int) -> Fraction:
    prod = 1
    for i in range(k + 1):
        prod *= pyfact(i)
    return prod * sum(Fraction(1, pyfact(i)) for i in range(k + 1))


def test_r_bell_determinant_closed_form():
    for k in range(1, 7):
        rows = [[r_bell(j, m) for m in range(1, k + 1)] for j in range(1, k + 1)]
        assert determinant(rows) == _poly_bell_det_form(k)
    assert _poly_bell_det_form(2) == 5
    assert _poly_bell_det_form(3) == 32


def test_factorial_hankel_determinant():
    for k in range(0, 6):
        rows = [[pyfact(i + j) for j in range(k + 1)] for i in range(k + 1)]
        expected = 1
        for i in range(k + 1):
            expected *= pyfact(i) ** 2
        assert determinant(rows) == expected


def test_bell_hankel_determinant():
    for k in range(1, 6):
        rows = [[bell(i + j) for j in range(1, k + 1)] for i in range(1, k + 1)]
        assert determinant(rows) == _poly_bell_det_form(k)


def test_set_partition_order_n3():
    got = list(enumerate_set_partitions(3))
    assert got == [(7,), (3, 4), (5, 2), (1, 6), (1, 2, 4)]


def test_set_partition_counts():
    for n in range(1, 8):
        parts = list(enumerate_set_partitions(n))
        assert len(parts) == bell(n)
        assert len(set(tuple(sorted(p)) for p in parts)) == bell(n)
        for part in parts:
            union = 0
            for block in part:
                assert block
                assert not (union & block)
                union |= block
            assert union == (1 << n) - 1
            # blocks come out ordered by their smallest member
            lows = [b & -b for b in part]
            assert lows == sorted(lows)


def test_set_partition_cap_is_eager():
    with pytest.raises(CapExceededError):
        enumerate_set_partitions(13)
    with pytest.raises(CapExceededError):
        enumerate_set_partitions(4, cap=3)
    assert len(list(enumerate_set_partitions(4, cap=4))) == 15
    with pytest.raises(ValueError):
        enumerate_set_partitions(0)


def test_rational_matrix_validation():
    m = RationalMatrix.from_rows([[1, 2], [3, 4]])
    assert m.nrows == 2 and m.ncols == 2 and m.is_square
    assert m.rows[0][1] == Fraction(2)
    with pytest.raises(ValueError):
        RationalMatrix.from_rows([[1, 2], [3]])


def test_determinant_against_permutation_expansion():
    rng = Random(7)
    for size in range(1, 5):
        for _ in range(20):
            rows = [
                [Fraction(rng.randrange(-6, 7), rng.randrange(1, 4)) for _ in range(size)]
                for _ in range(size)
            ]
            assert determinant(rows) == perm_det(rows)


def test_determinant_requires_square():
    with pytest.raises(ValueError):
        determinant([[1, 2, 3], [4, 5, 6]])


def test_solve_linear_roundtrip():
    rng = Random(11)
    for size in range(1, 6):
        for _ in range(10):
            rows = [
                [Fraction(rng.randrange(-5, 6)) for _ in range(size)]
                for _ in range(size)
            ]
            if determinant(rows) == 0:
                continue
            x = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)) for _ in range(size)]
            rhs = [
                sum(rows[i][j] * x[j] for j in range(size)) for i in range(size)
            ]
            assert solve_linear(rows, rhs) == tuple(x)


def test_solve_linear_singular():
    with pytest.raises(SingularMatrixError):
        solve_linear([[1, 2], [2, 4]], [1, 2])
