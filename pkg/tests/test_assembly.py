from types import SimpleNamespace

import pytest

from charsheaf.arith import LaurentPoly, ParityError
from charsheaf.assembly import (BonnafeCharacter, FrobeniusDatum, MultiplicityData, coset_multiplicity,
                                columns_of, e8_b6_sign, multiplicities, sheaf_value_table, stabilizer_coset_data,
                                sub_extension, transported_multiplicity, ambient_extension, y_function, y_table)
from charsheaf.chartab import character_table, induce, inner_product, sign_character
from charsheaf.errors import ValidationError
from charsheaf.green import green_transition, ordered_pairs, x_from_y
from charsheaf.oracles import coset_induce_direct, coset_inner_direct, fixed_flag_count
from charsheaf.springer import block_from_json, load_fixture, parse_partition, typeA_springer_block

q = LaurentPoly.monomial(1)


def poly(*coeffs):
    return LaurentPoly(coeffs)


def gl2_squared_block():
    """The Springer block of GL2 x GL2: classes are pairs of partitions of 2."""
    from charsheaf.coxeter import build_group, levi, relative_weyl_group
    g = build_group("A1xA1")
    rel = relative_weyl_group(g, levi(g, ()))
    W = rel.group
    table = character_table(W)
    gens = [rel.coxeter_generators[k] for k in sorted(rel.coxeter_generators)]
    pairs = []
    for l1, d1 in (("2", 1), ("1,1", 0)):
        for l2, d2 in (("2", 1), ("1,1", 0)):
            signs = [1 if l1 == "2" else -1, 1 if l2 == "2" else -1]
            idx = next(i for i, chi in enumerate(table) if [chi(s) for s in gens] == signs)
            pairs.append({"class": f"{l1}x{l2}", "dim": 2 * (d1 + d2), "comp_group": "1", "comp_char": "1",
                          "correspondent_index": idx})
    doc = {"id": "GL2xGL2-springer", "cartan": {"type": "A1xA1"}, "dim_G": 8, "levi": [],
           "cuspidal": {"class": "1", "dim_class": 0, "dim_center": 4, "local_system": "1"}, "pairs": pairs}
    return block_from_json(doc)


# local-system data -----------------------------------------------------------------

def test_full_stabilizer_degenerate_case():
    block = typeA_springer_block(3)
    lsd = stabilizer_coset_data(block)
    assert lsd.stabilizer == list(range(block.relative_group.order))
    assert lsd.Z == lsd.stabilizer and lsd.w == 0


def test_trivial_stabilizer_one_coset_per_element():
    block = typeA_springer_block(3)
    W = block.relative_group
    lsd = stabilizer_coset_data(block, stabilizer=[0], Z=list(range(W.order)), connected_centre=False)
    assert lsd.w == 0
    assert sorted(lsd.minimal_reps) == list(range(W.order))


def test_index_two_stabilizer_picks_nontrivial_minimal_representative():
    block = load_fixture("c2_levi_a1")
    W = block.relative_group
    assert W.order == 2
    s = W.generators[0]
    lsd = stabilizer_coset_data(block, stabilizer=[0], Z=[s], connected_centre=False)
    assert lsd.w == s and lsd.minimal_reps == [s]


def test_stabilizer_validation():
    block = typeA_springer_block(3)
    W = block.relative_group
    with pytest.raises(ValidationError):
        stabilizer_coset_data(block, stabilizer=[0, W.generators[0], W.generators[1]])
    with pytest.raises(ValidationError):
        stabilizer_coset_data(block, stabilizer=[0], Z=[], connected_centre=False)
    with pytest.raises(ValidationError):
        stabilizer_coset_data(block, stabilizer=[0], Z=list(range(W.order)))
    with pytest.raises(ValidationError):
        stabilizer_coset_data(block, stabilizer=[0, W.generators[0]], Z=[W.generators[1]], connected_centre=False)


# multiplicities ------------------------------------------------------------------------

def test_full_stabilizer_multiplicities_are_kronecker_deltas():
    block = typeA_springer_block(3)
    lsd = stabilizer_coset_data(block)
    mult = multiplicities(lsd)
    for r, k in enumerate(mult.rows):
        E = character_table(lsd.sub.group, with_b=False)[k]
        for i, p in enumerate(mult.pairs):
            chi = block.correspondent(p)
            same = all(chi(lsd.sub.embedding[h]) == E(h) for h in range(lsd.sub.group.order))
            assert mult.values[r][i] == (1 if same else 0)


def test_proper_stabilizer_matches_ordinary_induction():
    block = typeA_springer_block(3)
    W = block.relative_group
    H = W.closure([W.generators[0]])
    lsd = stabilizer_coset_data(block, stabilizer=H)
    mult = multiplicities(lsd)
    Htab = character_table(lsd.sub.group, with_b=False)
    for r, k in enumerate(mult.rows):
        ind = induce(lsd.sub, Htab[k])
        for i, p in enumerate(mult.pairs):
            assert mult.values[r][i] == inner_product(block.correspondent(p), ind)


def test_swapped_squares_multiplicity_matches_double_sum():
    block = gl2_squared_block()
    fd = FrobeniusDatum((1, 0))
    W = block.relative_group
    sigma = fd.relative(block).element_perm
    s1, s2 = W.generators
    checked = 0
    for H, Z in (([0], [0]), ([0], [s1]), ([0], [W.mul(s1, s2)]), (list(range(W.order)), list(range(W.order)))):
        lsd = stabilizer_coset_data(block, stabilizer=H, Z=Z, frobenius=fd, connected_centre=False)
        for E in character_table(lsd.sub.group, with_b=False):
            if not all(E(h) == E(lsd.twisted_perm[h]) for h in range(lsd.sub.group.order)):
                continue
            eE = sub_extension(lsd, E)
            for p in ordered_pairs(block):
                chi = block.correspondent(p)
                if not all(chi(x) == chi(sigma[x]) for x in range(W.order)):
                    continue
                eI = ambient_extension(lsd, chi)
                direct = coset_induce_direct(W.mul, W.inv, sigma, W.order, lsd.coset.elements,
                                             {x: eE(x) for x in lsd.coset.elements}, len(H))
                expected = coset_inner_direct({x: eI(x) for x in range(W.order)}, direct, range(W.order),
                                              W.order)
                assert coset_multiplicity(eI, eE, lsd) == expected
                assert transported_multiplicity(eI, eE, lsd) == expected
                checked += 1
    assert checked >= 8


def test_pairs_outside_the_block_have_zero_multiplicity():
    block = typeA_springer_block(3)
    mult = multiplicities(stabilizer_coset_data(block))
    foreign = typeA_springer_block(2).pairs[0]
    assert isinstance(mult, MultiplicityData)
    assert all(mult.value(k, foreign) == 0 for k in mult.rows)


# Y-functions -----------------------------------------------------------------------------

def test_type_a_y_functions_are_class_indicators():
    block = typeA_springer_block(3)
    lsd = stabilizer_coset_data(block)
    fd = FrobeniusDatum.untwisted(2)
    Y = y_table(lsd, BonnafeCharacter.trivial(block.relative_group), fd)
    cols = columns_of(block)
    for p, row in zip(ordered_pairs(block), Y):
        assert row == [1 if c == p.class_label else 0 for c, _ in cols]


def test_y_function_with_trivial_w_is_component_character():
    block = load_fixture("g2_springer")
    lsd = stabilizer_coset_data(block)
    fd = FrobeniusDatum.untwisted(2)
    gamma = BonnafeCharacter.trivial(block.relative_group)
    cols = columns_of(block)
    p = block.pair_by_label("G2(a1):r")
    cg = block.comp_groups[p.comp_group]
    row = y_function(p, lsd, gamma, fd, cols)
    for (cls, a), v in zip(cols, row):
        assert v == (cg.value("r", a) if cls == "G2(a1)" else 0)


def test_e8_b6_sign_rule():
    e8 = SimpleNamespace(cartan=SimpleNamespace(label="E8"))
    assert [e8_b6_sign(e8, "E8(b6)", k) for k in (2, 3, 4, 5, 7, 8)] == [-1, 1, 1, -1, 1, -1]
    assert e8_b6_sign(e8, "E8(a1)", 2) == 1
    assert e8_b6_sign(typeA_springer_block(2), "E8(b6)", 2) == 1
    with pytest.raises(ValidationError):
        e8_b6_sign(e8, "E8(b6)", "symbolic")


def test_bonnafe_character_validation():
    W = typeA_springer_block(3).relative_group
    with pytest.raises(ValidationError):
        BonnafeCharacter(sign_character(W), None)
    assert not BonnafeCharacter(sign_character(W), "file").is_trivial
    refl = character_table(W)[2]
    with pytest.raises(ValidationError):
        BonnafeCharacter(refl, "file")


def test_frobenius_validation():
    with pytest.raises(ValidationError):
        FrobeniusDatum((0, 1), q=1)
    assert FrobeniusDatum((1, 0)).split is False


# value tables --------------------------------------------------------------------------

def test_cuspidal_single_term():
    block = load_fixture("g2_cuspidal")
    t = sheaf_value_table(block)
    p = block.pairs[0]
    a = block.ab(p)[0]
    scale = (1 if a % 2 == 0 else -1) * LaurentPoly.monomial((block.dim_G + a) // 2)
    cg = block.comp_groups[p.comp_group]
    assert t.entries == [[scale * cg.value(p.comp_char, c) for c in cg.class_labels]]
    assert t.entries == [[q * q, -q * q, q * q]]


def test_gl2_table():
    t = sheaf_value_table(typeA_springer_block(2))
    assert t.row_labels == ["2:1", "1,1:1"]
    assert t.column_labels == ["2|1", "1,1|1"]
    assert t.entries == [[poly(1), poly(1)], [poly(), q]]
    assert t.evaluate(5) == [[1, 1], [0, 5]]


@pytest.mark.parametrize("n", [2, 3])
def test_split_reduction_to_x_functions(n):
    block = typeA_springer_block(n)
    gt = green_transition(block, "stalk")
    lsd = stabilizer_coset_data(block)
    Y = y_table(lsd, BonnafeCharacter.trivial(block.relative_group), FrobeniusDatum.untwisted(n - 1))
    X = x_from_y(gt.P, [[LaurentPoly.constant(v) for v in row] for row in Y])
    t = sheaf_value_table(block, lsd=lsd, gt=gt)
    for label, row in zip(t.row_labels, t.entries):
        i = gt.index(label)
        a = gt.a_values[i]
        scale = (1 if a % 2 == 0 else -1) * LaurentPoly.monomial((block.dim_G + a) // 2)
        assert row == [scale * x for x in X[i]]
        assert all(e.var == "q" and all(isinstance(c, int) for c in e.coeffs) for e in row)


@pytest.mark.parametrize("qq", [2, 3])
def test_gl3_rows_reproduce_flag_counts(qq):
    block = typeA_springer_block(3)
    t = sheaf_value_table(block)
    degrees = {p.label: block.correspondent(p).degree for p in block.pairs}
    total = [sum(degrees[lab] * row[c].evaluate(qq) for lab, row in zip(t.row_labels, t.entries))
             for c in range(len(t.column_labels))]
    counts = [fixed_flag_count(parse_partition(col.split("|")[0]), qq) for col in t.column_labels]
    ratios = {x / y for x, y in zip(total, counts)}
    assert len(ratios) == 1
    r = ratios.pop()
    assert abs(r) == 1 or any(abs(r) == qq ** k for k in range(1, 10))


def test_twisted_a2_table_is_integral_and_matches_split_shape():
    block = typeA_springer_block(3)
    split = sheaf_value_table(block)
    twisted = sheaf_value_table(block, frobenius=FrobeniusDatum((1, 0)))
    assert twisted.entries == split.entries
    assert twisted.metadata["sigma"] == [1, 0]


def test_swapped_squares_table_is_integral():
    t = sheaf_value_table(gl2_squared_block(), frobenius=FrobeniusDatum((1, 0), q=3))
    assert all(e.var == "q" for row in t.entries for e in row)
    assert t.evaluate(3)


def test_disconnected_centre_levi_block_needs_half_powers():
    block = load_fixture("c2_levi_a1")
    with pytest.raises(ParityError):
        sheaf_value_table(block)
    t = sheaf_value_table(block, allow_half_powers=True)
    assert all(e.var == "q½" for row in t.entries for e in row)
    with pytest.raises(ParityError):
        t.evaluate(3)


def test_exports_carry_metadata():
    t = sheaf_value_table(typeA_springer_block(2))
    assert t.to_tsv().splitlines()[0] == "A\t2|1\t1,1|1"
    assert t.to_tsv(3).splitlines()[2] == "1,1:1\t0\t3"
    doc = t.to_json()
    for key in ("block", "w", "sigma", "gamma_source", "springer_convention", "extension_convention"):
        assert key in doc["metadata"]
    assert t.to_json(2)["entries"] == [["1", "1"], ["0", "2"]]


def test_wrong_green_normalization_rejected():
    block = typeA_springer_block(2)
    with pytest.raises(ValidationError):
        sheaf_value_table(block, gt=green_transition(block, "kostka"))
