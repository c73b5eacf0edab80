import pytest

from charsheaf.arith import LaurentPoly
from charsheaf.errors import ValidationError
from charsheaf.green import (check_solution, compute_omega, convert_normalization, green_for_blocks, green_transition,
                             ordered_pairs, solve_green_system, x_from_y)
from charsheaf.oracles import kostka_foulkes
from charsheaf.springer import load_fixture, parse_partition, typeA_springer_block

q = LaurentPoly.monomial(1)
ONE = LaurentPoly.constant(1)
ZERO = LaurentPoly()
FIXTURES = ["b2_springer", "c2_springer", "c2_levi_a1", "g2_springer", "g2_cuspidal"]


def test_one_by_one_system():
    w = LaurentPoly([1, 0, 3])
    P, L = solve_green_system([[w]], [-5])
    assert P == [[ONE]] and L == [[w]]


def test_diagonal_omega_with_distinct_a_values():
    om = [[LaurentPoly([2]), ZERO], [ZERO, LaurentPoly([0, 1])]]
    P, L = solve_green_system(om, [-1, -3])
    assert P == [[ONE, ZERO], [ZERO, ONE]] and L == om


def test_gl2_single_off_diagonal_entry():
    gt = green_transition(typeA_springer_block(2))
    assert gt.labels == ["1,1:1", "2:1"]
    assert gt.P == [[ONE, q], [ZERO, ONE]]


def test_gl3_omega_symmetric():
    om = compute_omega(typeA_springer_block(3))
    assert all(om[i][j] == om[j][i] for i in range(3) for j in range(3))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_type_a_matches_charge_oracle(n):
    gt = green_transition(typeA_springer_block(n))
    for i, row_label in enumerate(gt.labels):
        for j, col_label in enumerate(gt.labels):
            lam = parse_partition(col_label.split(":")[0])
            mu = parse_partition(row_label.split(":")[0])
            expected = LaurentPoly.from_dict(kostka_foulkes(lam, mu))
            assert gt.P[i][j] == expected
            assert all(isinstance(c, int) and c >= 0 for c in gt.P[i][j].coeffs)


def test_known_kostka_foulkes_values():
    assert kostka_foulkes((2,), (1, 1)) == {1: 1}
    assert kostka_foulkes((3,), (1, 1, 1)) == {3: 1}
    assert kostka_foulkes((2, 1), (1, 1, 1)) == {1: 1, 2: 1}
    assert kostka_foulkes((2, 2), (1, 1, 1, 1)) == {2: 1, 4: 1}


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("norm", ["kostka", "stalk"])
def test_fixture_systems_solve(name, norm):
    gt = green_transition(load_fixture(name), norm)
    gt.check()
    n = gt.size
    for i in range(n):
        assert gt.P[i][i] == ONE
        for j in range(i):
            assert not gt.P[i][j]


def test_permuting_a_stratum_permutes_the_solution():
    block = load_fixture("b2_springer")
    om = compute_omega(block)
    avals = [block.ab(p)[0] for p in ordered_pairs(block)]
    P, L = solve_green_system(om, avals)
    tie = [i for i in range(len(avals)) if avals.count(avals[i]) > 1]
    assert len(tie) == 2
    perm = list(range(len(avals)))
    perm[tie[0]], perm[tie[1]] = tie[1], tie[0]
    om2 = [[om[perm[i]][perm[j]] for j in range(len(om))] for i in range(len(om))]
    P2, L2 = solve_green_system(om2, [avals[perm[i]] for i in range(len(avals))])
    for i in range(len(om)):
        for j in range(len(om)):
            assert P2[i][j] == P[perm[i]][perm[j]]
            assert L2[i][j] == L[perm[i]][perm[j]]


def test_normalizations_are_related():
    for block in [typeA_springer_block(3), load_fixture("g2_springer")]:
        dims = [p.dim for p in ordered_pairs(block)]
        k = green_transition(block, "kostka")
        s = green_transition(block, "stalk")
        assert convert_normalization(s, dims) == k.P
        assert convert_normalization(k, dims) == s.P


def test_stalk_p_for_gl2_is_one_on_the_closure():
    gt = green_transition(typeA_springer_block(2), "stalk")
    assert gt.P == [[ONE, ONE], [ZERO, ONE]]


def test_combined_blocks_do_not_couple():
    blocks = [load_fixture("c2_springer"), load_fixture("c2_levi_a1")]
    for norm in ["kostka", "stalk"]:
        gt = green_for_blocks(blocks, norm)
        for i, a in enumerate(gt.labels):
            for j, b in enumerate(gt.labels):
                if a.split("/")[0] != b.split("/")[0]:
                    assert not gt.P[i][j] and not gt.Lam[i][j]


def test_bad_systems_rejected():
    with pytest.raises(ValidationError):
        solve_green_system([[ONE, q], [ZERO, ONE]], [-2, -4])
    with pytest.raises(ValidationError):
        solve_green_system([[ONE, ZERO], [ZERO, ONE]], [-4, -2])
    with pytest.raises(ValidationError):
        compute_omega(typeA_springer_block(2), "other")


def test_check_solution_detects_tampering():
    from charsheaf.errors import InconsistencyError
    gt = green_transition(typeA_springer_block(3))
    bad = [row[:] for row in gt.P]
    bad[0][2] = bad[0][2] + ONE
    with pytest.raises(InconsistencyError):
        check_solution(gt.omega, bad, gt.Lam, gt.a_values)


def test_x_from_y():
    Y = [[LaurentPoly([1]), ZERO], [ZERO, LaurentPoly([2])]]
    ident = [[ONE, ZERO], [ZERO, ONE]]
    assert x_from_y(ident, Y) == Y
    assert x_from_y([[ONE]], [[LaurentPoly([5])]]) == [[LaurentPoly([5])]]
    with pytest.raises(ValidationError):
        x_from_y(ident, Y[:1])


def test_gl3_regular_x_at_subregular_class():
    gt = green_transition(typeA_springer_block(3), "stalk")
    n = gt.size
    Y = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
    X = x_from_y(gt.P, Y)
    reg, sub = gt.index("3:1"), gt.index("2,1:1")
    assert X[reg][sub] == gt.entry("2,1:1", "3:1") * Y[sub][sub]


def test_json_export():
    doc = green_transition(typeA_springer_block(2)).to_json()
    assert doc["P"]["entries"] == [["1", "q"], ["0", "1"]]
    assert doc["order"] == ["1,1:1", "2:1"]
