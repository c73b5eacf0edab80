import json
from math import factorial

import pytest

from charsheaf.errors import ValidationError
from charsheaf.molien import b_invariant
from charsheaf.oracles import centralizer_dimension
from charsheaf.springer import (block_from_json, check_partition, class_dimension_gl, load_block_data,
                               load_fixture, parse_partition, partitions, symmetric_character, transpose,
                               typeA_springer_block)

FIXTURES = ["b2_springer", "c2_springer", "c2_levi_a1", "g2_springer", "g2_cuspidal"]


def test_gl2_a_and_b_values():
    block = typeA_springer_block(2)
    assert block.ab(block.pair_by_label("2:1")) == (-4, 0)
    assert block.ab(block.pair_by_label("1,1:1")) == (-2, 2)


def test_cuspidal_block_has_b_zero():
    block = load_fixture("g2_cuspidal")
    assert [block.ab(p)[1] for p in block.pairs] == [0]


@pytest.mark.parametrize("n,dims", [(2, [2, 0]), (3, [6, 4, 0])])
def test_class_dimensions(n, dims):
    block = typeA_springer_block(n)
    assert [p.dim for p in block.pairs] == dims


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_type_a_dimension_identities(n):
    block = typeA_springer_block(n)
    assert sorted(p.correspondent_index for p in block.pairs) == list(range(len(block.table)))
    assert sum(block.correspondent(p).degree ** 2 for p in block.pairs) == factorial(n)
    for p in block.pairs:
        lam = parse_partition(p.class_label)
        if n <= 4:
            assert p.dim + centralizer_dimension(lam) == n * n
        assert p.dim == class_dimension_gl(lam)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_type_a_b_values_are_twice_the_molien_b(n):
    block = typeA_springer_block(n)
    rel = block.relative_group
    for p in block.pairs:
        assert block.ab(p)[1] == 2 * b_invariant(block.correspondent(p), rel)[1]


def test_regular_class_goes_to_trivial_character():
    block = typeA_springer_block(4)
    assert block.correspondent(block.pairs[0]).values == block.table[0].values
    signed = typeA_springer_block(4, "sign-twisted")
    chi = signed.correspondent(signed.pairs[0])
    assert all(abs(v) == 1 for v in chi.values) and chi != signed.table[0]


def test_partitions_and_transpose():
    assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert transpose((3, 1)) == (2, 1, 1)
    g = typeA_springer_block(3).relative_group
    assert symmetric_character(g, (3,)).values == (1,) * len(g.classes)


def test_gl2_round_trip(tmp_path):
    block = typeA_springer_block(2)
    path = tmp_path / "gl2.json"
    path.write_text(block.dumps(), encoding="utf-8")
    loaded = load_block_data(path)
    assert loaded.dumps() == block.dumps()
    assert [(p.label, p.correspondent_index) for p in loaded.pairs] == \
           [(p.label, p.correspondent_index) for p in block.pairs]


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_round_trip_bit_exactly(name):
    from charsheaf.springer import data_path
    text = data_path(name + ".json").read_text(encoding="utf-8")
    assert load_fixture(name).dumps() == text


def test_fixture_a_and_b_values():
    expected = {
        "b2_springer": [(-10, 0), (-8, 2), (-8, 2), (-6, 4), (-2, 8)],
        "c2_springer": [(-10, 0), (-8, 2), (-8, 2), (-6, 4), (-2, 8)],
        "c2_levi_a1": [(-9, 0), (-5, 4)],
        "g2_springer": [(-14, 0), (-12, 2), (-12, 2), (-10, 4), (-8, 6), (-2, 12)],
        "g2_cuspidal": [(-10, 0)],
    }
    for name, ab in expected.items():
        block = load_fixture(name)
        assert [block.ab(p) for p in block.pairs] == ab


def test_duplicated_pair_rejected():
    doc = typeA_springer_block(2).to_json()
    doc["pairs"].append(dict(doc["pairs"][0]))
    with pytest.raises(ValidationError, match="correspondence not injective"):
        block_from_json(doc)


def test_contradictory_a_value_names_the_pair():
    doc = typeA_springer_block(2).to_json()
    doc["pairs"][1]["a"] = -3
    with pytest.raises(ValidationError, match="1,1:1"):
        block_from_json(doc)


def test_missing_field_and_bad_json(tmp_path):
    doc = typeA_springer_block(2).to_json()
    del doc["dim_G"]
    with pytest.raises(ValidationError):
        block_from_json(doc)
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    with pytest.raises(ValidationError):
        load_block_data(bad)


def test_nontrivial_sigma_action_rejected():
    doc = typeA_springer_block(2).to_json()
    doc["sigma_action"] = "swap"
    with pytest.raises(ValidationError):
        block_from_json(doc)


def test_blocks_partition_pairs():
    block = typeA_springer_block(3)
    keys = [p.key for p in block.pairs]
    check_partition([block], keys)
    with pytest.raises(ValidationError):
        check_partition([block, block], keys)
    sp4 = [load_fixture("c2_springer"), load_fixture("c2_levi_a1")]
    all_keys = [p.key for b in sp4 for p in b.pairs]
    check_partition(sp4, all_keys)
    assert len(set(all_keys)) == 7


def test_component_group_tables_are_orthogonal():
    for name in FIXTURES:
        for cg in load_fixture(name).comp_groups.values():
            cg.validate()


def test_unknown_convention_rejected():
    with pytest.raises(ValidationError):
        typeA_springer_block(3, "other")
    doc = json.loads(typeA_springer_block(2).dumps())
    doc["convention"] = "other"
    with pytest.raises(ValidationError):
        block_from_json(doc)
