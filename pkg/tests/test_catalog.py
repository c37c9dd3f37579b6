from collections import Counter

import pytest

from exforge.catalog import (
    CatalogError, catalog, catalog_ids, entry, t_degree_report, table_only, verify_entry, z3_table,
    z3_table_swapped,
)
from exforge.gradlib import AbGroup, GradingError


def test_catalog_shape():
    ids = catalog_ids(include_aux=False)
    assert len(ids) == 42
    assert Counter(entry(i).lie_type for i in ids) == {"e6": 14, "e7": 14, "e8": 14}
    # 39 labelled fine gradings plus the three root space decompositions
    assert sum(1 for i in ids if not i.startswith("cartan-")) == 39
    assert all(entry(i).fine for i in ids)
    aux = set(catalog_ids()) - set(ids)
    assert "z4-remark" in aux and not entry("z4-remark").fine


def test_declared_type_sums():
    dims = {"e6": 78, "e7": 133, "e8": 248}
    for i in catalog_ids(include_aux=False):
        e = entry(i)
        assert sum(k * h for k, h in enumerate(e.type, 1)) == dims[e.lie_type], i


def test_unknown_id():
    with pytest.raises(CatalogError):
        entry("9g1")


def test_small_entry_verifies():
    r = verify_entry("6g4")
    assert r.status() == "PASS"
    assert r.group == AbGroup.parse("Z_2xZ_3^3")
    assert r.to_json()["type"] == [26, 26]


def test_same_type_different_groups():
    a, b = verify_entry("6g1"), verify_entry("6g8")
    assert a.type == b.type == (48, 1, 0, 7)
    assert a.group == AbGroup(0, (2,) * 6)
    assert b.group == AbGroup(2, (2, 2, 2))
    assert a.group != b.group


def test_auxiliary_flags():
    L, g = catalog("skeleton-e6")
    assert {"not-fine", "auxiliary"} <= g.flags
    assert verify_entry("skeleton-e6").status() == "PASS-WITH-FLAG"


def test_t_degrees_match_restricted_table():
    rep = t_degree_report()
    assert rep and all(exp == found for exp, found in rep.values())


def test_swapped_table_is_not_a_grading():
    swapped, good = z3_table_swapped(), z3_table()
    assert swapped[0][2] == good[2][2] and swapped[2][2] == good[0][2]
    with pytest.raises(GradingError):
        table_only("pQ", swapped, 3, "pC", "swapped")
