"""Symmetric multi-indices stored as sorted tuples of base indices (1-based)."""

from __future__ import annotations

from collections import Counter
from math import comb, factorial


MultiIndex = tuple  # sorted nondecreasing tuple of ints in 1..n


def mi(*indices: int) -> MultiIndex:
    """Canonical (sorted) multi-index from a sequence of base indices."""
    return tuple(sorted(indices))


def mi_append(I: MultiIndex, i: int) -> MultiIndex:
    """The multi-index Ij, re-sorted into canonical form."""
    return tuple(sorted(I + (i,)))


def mi_concat(I: MultiIndex, J: MultiIndex) -> MultiIndex:
    return tuple(sorted(I + J))


def mi_weight(I: MultiIndex) -> int:
    """Number of distinct orderings of I (multinomial |I|! / prod of repeats)."""
    c = Counter(I)
    w = factorial(len(I))
    for k in c.values():
        w //= factorial(k)
    return w


def mi_sym_factor(I: MultiIndex):
    """prod(counts!)/|I|!  -- converts a sorted-coordinate partial derivative
    into the symmetrized per-tuple derivative."""
    from fractions import Fraction

    return Fraction(1, mi_weight(I))


def all_multiindices(n: int, max_len: int):
    """All sorted multi-indices over 1..n with length <= max_len, by length."""
    out = [()]
    level = [()]
    for _ in range(max_len):
        nxt = []
        for I in level:
            lo = I[-1] if I else 1
            for i in range(lo, n + 1):
                nxt.append(I + (i,))
        out.extend(nxt)
        level = nxt
    return out


def binom(a: int, b: int) -> int:
    return comb(a, b)
