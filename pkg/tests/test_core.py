"""Unit tests for the search space, landscapes, and restrictions."""

import json

import numpy as np
import pytest

from nsfland import (
    FitnessLandscape,
    Restriction,
    ValidationError,
    bit_position,
    bits_to_index,
    global_maxima,
    index_to_bits,
    load_landscape,
    load_landscapes,
    neighbour_table,
    neighbours,
    restrict,
    save_landscape,
)


def test_first_variable_is_most_significant_bit():
    assert bit_position(1, 3) == 2
    assert bit_position(3, 3) == 0
    assert index_to_bits(5, 3) == "101"
    assert bits_to_index("101") == 5
    for idx in range(16):
        assert bits_to_index(index_to_bits(idx, 4)) == idx


def test_bit_helpers_reject_bad_input():
    with pytest.raises(ValidationError):
        bit_position(0, 3)
    with pytest.raises(ValidationError):
        bit_position(4, 3)
    with pytest.raises(ValidationError):
        bits_to_index("12")
    with pytest.raises(ValidationError):
        bits_to_index("")
    with pytest.raises(ValidationError):
        index_to_bits(8, 3)


def test_neighbours_are_single_flips():
    assert neighbours(0, 3) == {4, 2, 1}
    assert neighbours(5, 3) == {1, 7, 4}
    for s in range(8):
        for t in neighbours(s, 3):
            assert bin(s ^ t).count("1") == 1


def test_neighbour_table_columns_flip_each_variable():
    table = neighbour_table(3)
    assert table.shape == (8, 3)
    assert list(table[0]) == [4, 2, 1]
    assert not table.flags.writeable
    for s in range(8):
        assert set(int(t) for t in table[s]) == neighbours(s, 3)
    with pytest.raises(ValidationError):
        neighbour_table(0)


def test_landscape_basic_properties():
    landscape = FitnessLandscape(
        num_vars=3, values=np.arange(8), klass="external"
    )
    assert landscape.size == 8
    assert landscape.global_maximum() == 7
    assert global_maxima(landscape) == {7}
    assert landscape.max_edge_difference() == 4
    assert not landscape.values.flags.writeable


def test_global_maxima_returns_all_argmax_solutions():
    landscape = FitnessLandscape(
        num_vars=2, values=np.array([3, 1, 3, 0]), klass="external"
    )
    assert global_maxima(landscape) == {0, 2}


def test_landscape_validation():
    with pytest.raises(ValidationError):
        FitnessLandscape(num_vars=2, values=np.arange(3))
    with pytest.raises(ValidationError):
        FitnessLandscape(num_vars=2, values=np.array([0.5, 1.0, 1.0, 2.0]))
    with pytest.raises(ValidationError):
        FitnessLandscape(num_vars=2, values=np.array([-1, 0, 0, 0]))
    with pytest.raises(ValidationError):
        FitnessLandscape(num_vars=2, values=np.zeros(4, dtype=int), klass="x")
    with pytest.raises(ValidationError):
        FitnessLandscape(
            num_vars=2,
            values=np.array([0, 1, 2, 3]),
            value_domain_size=3,
        )
    with pytest.raises(ValidationError):
        FitnessLandscape(num_vars=0, values=np.array([0]))


def test_constrained_class_enforces_edge_bound():
    FitnessLandscape(
        num_vars=2, values=np.array([0, 1, 1, 2]), klass="NSF"
    )
    with pytest.raises(ValidationError):
        FitnessLandscape(
            num_vars=2, values=np.array([0, 2, 0, 0]), klass="NSF"
        )


def test_restriction_from_variables_builds_expected_mask():
    r = Restriction.from_variables(3, {1, 3}, {2: 1})
    assert r.chosen_mask == 5
    assert r.num_chosen == 2
    assert r.chosen_variables() == (1, 3)
    assert r.fixed_values == ((2, 1),)


def test_restriction_embed_places_variables():
    r = Restriction.from_variables(3, {1, 3}, {2: 1})
    # Sub-index bits feed chosen variables (1, 3); variable 2 is frozen
    # at 1, i.e. index bit 1 is always set.
    assert [r.embed(k) for k in range(4)] == [2, 3, 6, 7]
    with pytest.raises(ValidationError):
        r.embed(4)


def test_restriction_validation():
    with pytest.raises(ValidationError):
        Restriction(total_vars=3, chosen_mask=0)
    with pytest.raises(ValidationError):
        Restriction(total_vars=3, chosen_mask=8)
    with pytest.raises(ValidationError):
        Restriction(total_vars=3, chosen_mask=5, fixed_values=())
    with pytest.raises(ValidationError):
        Restriction(total_vars=3, chosen_mask=5, fixed_values=((2, 2),))
    with pytest.raises(ValidationError):
        Restriction(total_vars=3, chosen_mask=5, fixed_values=((1, 0),))


def test_restrict_produces_sub_landscape():
    base = FitnessLandscape(num_vars=3, values=np.arange(8))
    r = Restriction.from_variables(3, {1, 3}, {2: 1})
    sub = restrict(base, r)
    assert sub.num_vars == 2
    assert list(sub.values) == [2, 3, 6, 7]
    assert sub.klass == "external"


def test_restrict_rejects_mismatched_sizes():
    base = FitnessLandscape(num_vars=2, values=np.zeros(4, dtype=int))
    r = Restriction.from_variables(3, {1, 3}, {2: 1})
    with pytest.raises(ValidationError):
        restrict(base, r)


def test_landscape_json_roundtrip(tmp_path):
    landscape = FitnessLandscape(
        num_vars=2,
        values=np.array([0, 1, 1, 2]),
        klass="NSF",
        seed=77,
        value_domain_size=4,
    )
    path = tmp_path / "one.json"
    save_landscape(landscape, path)
    loaded = load_landscape(path)
    assert loaded.num_vars == 2
    assert list(loaded.values) == [0, 1, 1, 2]
    assert loaded.klass == "NSF"
    assert loaded.seed == 77
    assert loaded.value_domain_size == 4


def test_load_landscapes_accepts_arrays(tmp_path):
    item = {"num_vars": 1, "values": [0, 1]}
    path = tmp_path / "two.json"
    path.write_text(json.dumps([item, item]))
    loaded = load_landscapes(path)
    assert len(loaded) == 2
    with pytest.raises(ValidationError):
        load_landscape(path)


def test_load_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValidationError):
        load_landscape(bad)
    empty = tmp_path / "empty.json"
    empty.write_text("[]")
    with pytest.raises(ValidationError):
        load_landscape(empty)
    missing_fields = tmp_path / "partial.json"
    missing_fields.write_text('{"num_vars": 2}')
    with pytest.raises(ValidationError):
        load_landscape(missing_fields)
    with pytest.raises(OSError):
        load_landscape(tmp_path / "absent.json")
