"""Arbitrary-precision integer/rational arithmetic and memoized combinatorics.

All spin bookkeeping in this package is done with twice-spins (integers 2j)
so every intermediate quantity is an exact integer or Fraction.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

__all__ = [
    "Fraction",
    "factorial",
    "binomial",
    "SqrtRational",
    "square_free_decompose",
    "exact_rank",
]

# Shared factorial table.  Reads are lock-free (list append never moves
# existing entries under CPython); growth is serialized.
_FACT = [1]
_FACT_LOCK = threading.Lock()


def factorial(n: int) -> int:
    """n! with a monotonically growing shared cache."""
    if n < 0:
        raise ValueError(f"factorial of negative argument {n}")
    if n < len(_FACT):
        return _FACT[n]
    with _FACT_LOCK:
        while len(_FACT) <= n:
            _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


def binomial(n: int, k: int) -> int:
    """C(n, k); zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"binomial with negative n = {n}")
    if k < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


def square_free_decompose(n: int) -> tuple[int, int]:
    """Write n = s^2 * m with m square-free; return (s, m).  Requires n >= 0."""
    if n < 0:
        raise ValueError("square_free_decompose needs a non-negative integer")
    if n in (0, 1):
        return (1 if n else 0, 1) if n else (0, 1)
    s, m = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                m *= p
        p += 1 if p == 2 else 2
    # leftover n is prime (or 1)
    m *= n
    return s, m


class SqrtRational:
    """Exact number of the form q * sqrt(m), q rational, m square-free positive.

    Closed under multiplication and rational scaling; addition is only defined
    between values sharing the same radicand.  Used for 6j symbols and
    normalized contractions whose squares are rational.
    """

    __slots__ = ("q", "m")

    def __init__(self, q: Fraction, m: int = 1):
        q = Fraction(q)
        if m <= 0:
            raise ValueError("radicand must be positive")
        s, m_free = square_free_decompose(m)
        self.q = q * s
        self.m = 1 if self.q == 0 else m_free

    @classmethod
    def from_sqrt(cls, x: Fraction) -> "SqrtRational":
        """sqrt(x) for non-negative rational x, kept exact."""
        x = Fraction(x)
        if x < 0:
            raise ValueError("from_sqrt needs a non-negative rational")
        if x == 0:
            return cls(Fraction(0))
        # sqrt(p/q) = sqrt(p*q)/q
        return cls(Fraction(1, x.denominator), x.numerator * x.denominator)

    def __mul__(self, other):
        if isinstance(other, SqrtRational):
            return SqrtRational(self.q * other.q, self.m * other.m)
        return SqrtRational(self.q * Fraction(other), self.m)

    __rmul__ = __mul__

    def __neg__(self):
        return SqrtRational(-self.q, self.m)

    def __add__(self, other):
        if not isinstance(other, SqrtRational):
            other = SqrtRational(Fraction(other))
        if self.q == 0:
            return other
        if other.q == 0:
            return self
        if self.m != other.m:
            raise ValueError("cannot add SqrtRational values with different radicands")
        return SqrtRational(self.q + other.q, self.m)

    def __eq__(self, other):
        if isinstance(other, SqrtRational):
            return self.q == other.q and self.m == other.m
        return self.m == 1 and self.q == other

    def __hash__(self):
        return hash((self.q, self.m))

    def is_rational(self) -> bool:
        return self.m == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.q

    def squared(self) -> Fraction:
        return self.q * self.q * self.m

    def __float__(self) -> float:
        return float(self.q) * math.sqrt(self.m)

    def __repr__(self):
        if self.m == 1:
            return f"SqrtRational({self.q})"
        return f"SqrtRational({self.q}*sqrt({self.m}))"

    def pretty(self) -> str:
        """Render as 'p/q' or '(p/q)*sqrt(m)'."""
        if self.m == 1:
            return str(self.q)
        return f"({self.q})*sqrt({self.m})"


def exact_rank(rows: list[list[Fraction]]) -> int:
    """Rank of a rational matrix by fraction-exact Gaussian elimination."""
    mat = [list(map(Fraction, row)) for row in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    col = 0
    while rank < len(mat) and col < ncols:
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        col += 1
    return rank
