from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from intertwiner.exact import (
    SqrtRational,
    binomial,
    exact_rank,
    factorial,
    square_free_decompose,
)


def test_factorial_small_values():
    assert factorial(0) == 1
    assert factorial(1) == 1
    assert factorial(5) == 120


def test_factorial_negative_raises():
    with pytest.raises(ValueError):
        factorial(-1)


@given(st.integers(min_value=0, max_value=300))
def test_factorial_recurrence(n):
    assert factorial(n + 1) == (n + 1) * factorial(n)


def test_binomial_values_and_range():
    assert binomial(4, 2) == 6
    assert binomial(3, 5) == 0
    assert binomial(0, 0) == 1
    assert binomial(7, -1) == 0


@given(st.integers(0, 12), st.integers(0, 12), st.integers(0, 24))
def test_vandermonde_identity(p, q, j):
    assert sum(binomial(p, k) * binomial(q, j - k) for k in range(j + 1)) == binomial(p + q, j)


@given(st.integers(0, 10), st.integers(0, 10), st.integers(0, 10))
def test_alternating_binomial_identity(p, q, j):
    # sum_k (-1)^k C(p,k) C(j+q-k, q) = C(j+q-p, j), for p <= q
    if p > q:
        p, q = q, p
    lhs = sum((-1) ** k * binomial(p, k) * binomial(j + q - k, q) for k in range(p + 1))
    assert lhs == binomial(j + q - p, j)


def test_square_free_decompose():
    assert square_free_decompose(1) == (1, 1)
    assert square_free_decompose(12) == (2, 3)
    assert square_free_decompose(49) == (7, 1)
    s, m = square_free_decompose(360)
    assert s * s * m == 360 and m == 10


def test_sqrt_rational_arithmetic():
    a = SqrtRational.from_sqrt(Fraction(4, 9))
    assert a.is_rational() and a.as_fraction() == Fraction(2, 3)
    b = SqrtRational.from_sqrt(Fraction(1, 2))
    assert b.squared() == Fraction(1, 2)
    assert (b * b).as_fraction() == Fraction(1, 2)
    c = SqrtRational(Fraction(3), 8)  # 3 sqrt(8) = 6 sqrt(2)
    assert c.q == 6 and c.m == 2
    assert (b + b).squared() == 2
    with pytest.raises(ValueError):
        SqrtRational(Fraction(1), 2) + SqrtRational(Fraction(1), 3)
    assert float(SqrtRational(Fraction(1), 4)) == 2.0
    assert SqrtRational(Fraction(-1, 2), 3).pretty() == "(-1/2)*sqrt(3)"


def test_exact_rank():
    rows = [[Fraction(4), Fraction(2), Fraction(-2)],
            [Fraction(2), Fraction(4), Fraction(2)],
            [Fraction(-2), Fraction(2), Fraction(4)]]
    assert exact_rank(rows) == 2
    assert exact_rank([[Fraction(0)]]) == 0
    assert exact_rank([]) == 0
