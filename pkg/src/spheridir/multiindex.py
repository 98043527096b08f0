"""Multi-index arithmetic and graded monomial-basis enumeration.

A multi-index is a plain tuple of non-negative integers, one entry per
complex variable.  All spherical sums in this package run over index sets
produced here, weighted by the multinomial coefficient |gamma|!/gamma!.
"""

from __future__ import annotations

import itertools
from math import comb, factorial
from typing import Iterator

MultiIndex = tuple[int, ...]


def validate(alpha: MultiIndex, d: int | None = None) -> None:
    if d is not None and len(alpha) != d:
        raise ValueError(f"multi-index {alpha} does not have dimension {d}")
    if len(alpha) < 1:
        raise ValueError("multi-index must have dimension >= 1")
    if any(a < 0 for a in alpha):
        raise ValueError(f"multi-index {alpha} has a negative entry")


def order(alpha: MultiIndex) -> int:
    """Total order |alpha| = sum of the entries."""
    return sum(alpha)


def index_factorial(alpha: MultiIndex) -> int:
    """alpha! = product of the entrywise factorials."""
    out = 1
    for a in alpha:
        out *= factorial(a)
    return out


def multinomial_weight(gamma: MultiIndex) -> int:
    """|gamma|!/gamma!, the number of words with letter multiplicities gamma.

    Exact integer; safe for |gamma| well beyond 40 (Python ints are
    arbitrary precision).
    """
    return factorial(order(gamma)) // index_factorial(gamma)


def unit(d: int, j: int) -> MultiIndex:
    """The j-th coordinate index epsilon_j (0-based j)."""
    if not 0 <= j < d:
        raise ValueError(f"direction {j} out of range for dimension {d}")
    return tuple(1 if i == j else 0 for i in range(d))


def zero(d: int) -> MultiIndex:
    return (0,) * d


def add(alpha: MultiIndex, gamma: MultiIndex) -> MultiIndex:
    if len(alpha) != len(gamma):
        raise ValueError("dimension mismatch in multi-index addition")
    return tuple(a + g for a, g in zip(alpha, gamma))


def sub(alpha: MultiIndex, gamma: MultiIndex) -> MultiIndex | None:
    """Componentwise difference, or None when gamma is not <= alpha."""
    if len(alpha) != len(gamma):
        raise ValueError("dimension mismatch in multi-index subtraction")
    if any(g > a for a, g in zip(alpha, gamma)):
        return None
    return tuple(a - g for a, g in zip(alpha, gamma))


def enumerate_exact(d: int, k: int) -> list[MultiIndex]:
    """All indices of order exactly k, lexicographically descending."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if k < 0:
        raise ValueError("order must be >= 0")
    out: list[MultiIndex] = []

    def rec(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for a in range(remaining, -1, -1):
            rec(prefix + [a], remaining - a, slots - 1)

    rec([], k, d)
    return out


def enumerate_upto(d: int, N: int) -> list[MultiIndex]:
    """All indices with |alpha| <= N in graded order.

    Grades are ascending; within a grade the order is lexicographically
    descending on the entries, so layouts of matrices indexed by this
    basis are reproducible.  Length is C(N+d, d).
    """
    if N < 0:
        raise ValueError("degree bound must be >= 0")
    out: list[MultiIndex] = []
    for k in range(N + 1):
        out.extend(enumerate_exact(d, k))
    assert len(out) == comb(N + d, d)
    return out


def iter_grades(d: int, N: int) -> Iterator[list[MultiIndex]]:
    for k in range(N + 1):
        yield enumerate_exact(d, k)


def count_upto(d: int, N: int) -> int:
    return comb(N + d, d)


def distinct_permutation_count(gamma: MultiIndex) -> int:
    """Brute-force count of distinct words with letter multiset gamma.

    Independent of multinomial_weight; exponential in |gamma|, meant for
    small cross-checks only.
    """
    letters: list[int] = []
    for j, g in enumerate(gamma):
        letters.extend([j] * g)
    return len(set(itertools.permutations(letters)))
