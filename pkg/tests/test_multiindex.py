from fractions import Fraction

from hypothesis import given, strategies as st

from varseq.multiindex import (all_multiindices, binom, mi, mi_append,
                               mi_concat, mi_sym_factor, mi_weight)


def test_mi_sorts():
    assert mi(3, 1, 2) == (1, 2, 3)
    assert mi() == ()


def test_append_and_concat_keep_order():
    assert mi_append((1, 3), 2) == (1, 2, 3)
    assert mi_concat((2,), (1, 3)) == (1, 2, 3)


def test_weights_hand_computed():
    # distinct orderings of small index multisets
    assert mi_weight(()) == 1
    assert mi_weight((1,)) == 1
    assert mi_weight((1, 1)) == 1
    assert mi_weight((1, 2)) == 2
    assert mi_weight((1, 1, 2)) == 3
    assert mi_weight((1, 2, 3)) == 6


def test_sym_factor_inverts_weight():
    for I in all_multiindices(3, 4):
        assert mi_sym_factor(I) * mi_weight(I) == Fraction(1)


def test_all_multiindices_count():
    # number of sorted tuples of length <= r over n symbols is
    # sum_k C(n+k-1, k)
    for n in (1, 2, 3):
        for r in (0, 1, 2, 3):
            expect = sum(binom(n + k - 1, k) for k in range(r + 1))
            got = all_multiindices(n, r)
            assert len(got) == expect
            assert len(set(got)) == expect
            assert all(tuple(sorted(I)) == I for I in got)


@given(st.lists(st.integers(1, 4), max_size=6), st.integers(1, 4))
def test_weight_recurrence(I, j):
    """Appending one index multiplies the orderings by a simple ratio:
    w(Ij) = w(I) * (|I|+1) / (count of j in Ij)."""
    I = tuple(sorted(I))
    J = mi_append(I, j)
    assert mi_weight(J) * J.count(j) == mi_weight(I) * (len(I) + 1)
