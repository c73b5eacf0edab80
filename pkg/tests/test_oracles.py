from math import factorial

import pytest

from charsheaf.arith import LaurentPoly
from charsheaf.oracles import (MatrixGroup, burnside_table, centralizer_dimension, charge, fixed_flag_count,
                               kostka_foulkes, normalizer, parabolic_elements, reflection_matrices,
                               semistandard_tableaux, swap_tensor_trace)
from charsheaf.springer import partitions

A2 = [[2, -1], [-1, 2]]


def test_reflection_matrix_group_orders():
    assert MatrixGroup(reflection_matrices(A2)).order == 6
    assert MatrixGroup(reflection_matrices([[2, -2], [-1, 2]])).order == 8
    assert MatrixGroup(reflection_matrices([[2, -1], [-3, 2]])).order == 12


def test_burnside_table_of_s3():
    G = MatrixGroup(reflection_matrices(A2))
    classes, rows = burnside_table(G)
    assert sorted(len(c) for c in classes) == [1, 2, 3]
    assert sorted(int(r[[len(c) for c in classes].index(1)]) for r in rows) == [1, 1, 2]


def test_parabolic_and_normalizer():
    G = MatrixGroup(reflection_matrices(A2))
    P = parabolic_elements(G, [0])
    assert len(P) == 2
    assert normalizer(G, P) == sorted(P)
    assert len(normalizer(G, [G.identity])) == 6


def test_word_lengths_of_s3():
    G = MatrixGroup(reflection_matrices(A2))
    assert sorted(G.length(x) for x in range(G.order)) == [0, 1, 1, 2, 2, 3]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kostka_foulkes_specializations(n):
    ones = (1,) * n
    for lam in partitions(n):
        for mu in partitions(n):
            K = kostka_foulkes(lam, mu)
            assert sum(K.values()) == len(semistandard_tableaux(lam, mu))
        assert kostka_foulkes(lam, lam) == {0: 1}
    assert kostka_foulkes((n,), ones) == {n * (n - 1) // 2: 1}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kostka_foulkes_sum_to_q_factorial(n):
    ones = (1,) * n
    total = LaurentPoly()
    for lam in partitions(n):
        f = len(semistandard_tableaux(lam, ones))
        total = total + LaurentPoly.from_dict(kostka_foulkes(lam, ones)).scale(f)
    qfact = LaurentPoly([1])
    for k in range(1, n + 1):
        qfact = qfact * LaurentPoly([1] * k)
    assert total == qfact
    assert total.evaluate(1) == factorial(n)


def test_charge_of_small_words():
    assert charge([1]) == 0
    assert charge([1, 2]) == 1
    assert charge([2, 1]) == 0
    assert charge([1, 1, 2, 2]) == 2


def test_fixed_flag_counts():
    assert [fixed_flag_count(lam, 2) for lam in [(3,), (2, 1), (1, 1, 1)]] == [1, 5, 21]
    assert [fixed_flag_count(lam, 3) for lam in [(3,), (2, 1), (1, 1, 1)]] == [1, 7, 52]
    with pytest.raises(ValueError):
        fixed_flag_count((2,), 4)


def test_centralizer_dimensions():
    assert [centralizer_dimension(lam) for lam in [(3,), (2, 1), (1, 1, 1)]] == [3, 5, 9]


def test_swap_tensor_trace_is_trace_of_product():
    A = [[0, 1], [1, 0]]
    B = [[1, 2], [3, 4]]
    assert swap_tensor_trace(A, B) == 2 + 3
    assert swap_tensor_trace([[1, 0], [0, 1]], [[1, 0], [0, 1]]) == 2
