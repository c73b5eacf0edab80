from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charsheaf.chartab import (ClassFunction, character_table, check_orthogonality, induce, inner_product,
                               reflection_character, regular_character, restrict, sign_character,
                               trivial_character)
from charsheaf.coxeter import build_group, levi
from charsheaf.errors import ValidationError
from charsheaf.oracles import MatrixGroup, burnside_table, reflection_matrices


def table_of(label):
    return character_table(build_group(label))


def test_a1_rows():
    t = table_of("A1")
    assert [list(chi.values) for chi in t] == [[1, 1], [1, -1]]


@pytest.mark.parametrize("label,degrees", [("A2", [1, 1, 2]), ("B2", [1, 1, 1, 1, 2]),
                                           ("G2", [1, 1, 1, 1, 2, 2]), ("A3", [1, 1, 2, 3, 3])])
def test_degrees(label, degrees):
    assert table_of(label).degrees == degrees


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3"])
def test_table_matches_burnside_oracle(label):
    g = build_group(label)
    G = MatrixGroup(reflection_matrices(g.cartan.matrix))
    classes, rows = burnside_table(G)
    to_oracle = [G.index[tuple(tuple(int(x) for x in r) for r in g.matrix(w))] for w in range(g.order)]
    where = {x: j for j, cl in enumerate(classes) for x in cl}
    ours = sorted(tuple(Fraction(chi(c.representative)) for c in g.classes) for chi in character_table(g))
    theirs = sorted(tuple(row[where[to_oracle[c.representative]]] for c in g.classes) for row in rows)
    assert ours == theirs


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2", "A3", "B3", "A2xA2", "D4", "F4"])
def test_orthogonality_and_integrality(label):
    t = table_of(label)
    check_orthogonality(t)
    assert all(chi.is_rational_integral() for chi in t)
    assert t.degrees == sorted(t.degrees)


def test_trivial_sorted_before_sign():
    t = table_of("B2")
    g = t.group
    assert t[0] == trivial_character(g)
    assert t.index(sign_character(g)) > 0
    assert t.b_invariants.count(4) == 1
    assert t.b_invariants[t.index(sign_character(g))] == 4


def test_inner_product_examples():
    g = build_group("A1")
    t = character_table(g)
    assert inner_product(t[0], t[1]) == 0
    for chi in t:
        assert inner_product(chi, chi) == 1
    s3 = build_group("A2")
    reg = regular_character(s3)
    for chi in character_table(s3):
        assert inner_product(reg, chi) == chi.degree


def test_induction_examples():
    g = build_group("A2")
    t = character_table(g)
    full = g.subgroup(list(range(g.order)))
    f = reflection_character(g)
    assert induce(full, restrict(full, f)).values == f.values
    s2 = g.subgroup(levi(g, [0]).elements)
    ind = induce(s2, trivial_character(s2.group))
    assert ind == trivial_character(g) + reflection_character(g)
    assert t.decompose(ind) == [1, 0, 1]
    one = g.subgroup([0])
    assert induce(one, trivial_character(one.group)) == regular_character(g)


def test_mismatched_groups_rejected():
    with pytest.raises(ValidationError):
        inner_product(trivial_character(build_group("A1")), trivial_character(build_group("A2")))
    with pytest.raises(ValidationError):
        ClassFunction(build_group("A2"), [1, 2])


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3", "B3"])
@given(data=st.data())
@settings(max_examples=10, deadline=None)
def test_frobenius_reciprocity(label, data):
    g = build_group(label)
    J = data.draw(st.sets(st.integers(0, g.rank - 1)))
    sub = g.subgroup(levi(g, sorted(J)).elements)
    H = sub.group
    vals = st.integers(-4, 4)
    f = ClassFunction(H, data.draw(st.lists(vals, min_size=len(H.classes), max_size=len(H.classes))))
    chi = ClassFunction(g, data.draw(st.lists(vals, min_size=len(g.classes), max_size=len(g.classes))))
    assert inner_product(induce(sub, f), chi) == inner_product(f, restrict(sub, chi))
