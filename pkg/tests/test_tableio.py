import json
import os

import numpy as np
import pytest

from gl2reps.ring import RingSpec, ring_make
from gl2reps.tableio import (
    SCHEMA_VERSION,
    load_cached_table,
    read_table,
    ring_elem_from_str,
    ring_elem_to_str,
    store_cached_table,
    table_cache_path,
    table_from_jsonable,
    table_to_jsonable,
    write_table,
)


def test_padic_elem_strings():
    R = ring_make(RingSpec("padic", 2, 3))
    for x in R.elements:
        assert ring_elem_from_str(R, ring_elem_to_str(R, x)) == x
    assert ring_elem_to_str(R, 5) == "5"


def test_laurent_elem_strings():
    R = ring_make(RingSpec("laurent", 2, 3))
    rendered = {ring_elem_to_str(R, x) for x in R.elements}
    assert "0" in rendered and "1" in rendered
    assert "1+t^2" in rendered
    assert "t" in rendered
    for x in R.elements:
        assert ring_elem_from_str(R, ring_elem_to_str(R, x)) == x
    R3 = ring_make(RingSpec("laurent", 3, 2))
    assert ring_elem_to_str(R3, R3._encode((2, 2))) == "2+2t"
    for x in R3.elements:
        assert ring_elem_from_str(R3, ring_elem_to_str(R3, x)) == x


def test_bad_elem_strings():
    R = ring_make(RingSpec("laurent", 2, 2))
    with pytest.raises(ValueError):
        ring_elem_from_str(R, "t^5")
    with pytest.raises(ValueError):
        ring_elem_from_str(R, "u+1")
    Rp = ring_make(RingSpec("padic", 2, 2))
    with pytest.raises(ValueError):
        ring_elem_from_str(Rp, "17")


@pytest.mark.parametrize("flavor", ["padic", "laurent"])
def test_round_trip_bit_identical(tmp_path, table_for, flavor):
    table = table_for(flavor, 2, 2)
    path = tmp_path / "table.json"
    write_table(str(path), table)
    loaded = read_table(str(path))
    assert loaded.spec == table.spec
    assert loaded.group_order == 96
    assert loaded.certified
    assert loaded.class_reps == list(table.classes.reps)
    assert loaded.sizes == list(table.classes.sizes)
    original = np.array([r.chi.values for r in table.irreps])
    assert np.array_equal(loaded.values, original)  # bit-identical floats
    # a second write produces identical bytes
    path2 = tmp_path / "table2.json"
    write_table(str(path2), table)
    assert path.read_bytes() == path2.read_bytes()


def test_schema_version_rejected(tmp_path, table_for):
    data = table_to_jsonable(table_for("padic", 2, 1))
    data["schema_version"] = 99
    with pytest.raises(ValueError, match="schema_version"):
        table_from_jsonable(data)


def test_cache_roundtrip_and_stale_schema(tmp_path, table_for):
    spec = RingSpec("padic", 2, 1)
    cache = str(tmp_path)
    assert load_cached_table(spec, cache) is None
    data = table_to_jsonable(table_for("padic", 2, 1))
    store_cached_table(spec, data, cache)
    hit = load_cached_table(spec, cache)
    assert hit == data
    # stale schema entries are ignored
    path = table_cache_path(spec, cache)
    stale = dict(data)
    stale["schema_version"] = SCHEMA_VERSION + 1
    with open(path, "w") as fh:
        json.dump(stale, fh)
    assert load_cached_table(spec, cache) is None
    # uncertified entries are ignored too
    bad = dict(data)
    bad["certified"] = False
    with open(path, "w") as fh:
        json.dump(bad, fh)
    assert load_cached_table(spec, cache) is None


def test_cache_key_separates_specs(tmp_path, table_for):
    cache = str(tmp_path)
    store_cached_table(
        RingSpec("padic", 2, 1), table_to_jsonable(table_for("padic", 2, 1)), cache
    )
    assert load_cached_table(RingSpec("laurent", 2, 1), cache) is None
    assert load_cached_table(RingSpec("padic", 2, 2), cache) is None
