from __future__ import annotations

from collections import Counter

import pytest

from gbt.classifier import (
    DELTA_GENERATORS,
    TABLE_GROUPS,
    TABLE_LABELS,
    TranscriptionError,
    classification_summary,
    contained_in,
    delta_orbits,
    free_subgroups,
    free_subspaces,
    group_by_label,
    match_table_groups,
    orbit_family_dimension,
    orbit_of_label,
    pullback_v9,
)
from gbt.f2linalg import enumerate_subspaces, image
from gbt.fixedpoints import ELEMENT_10

ORBIT_OF_LABEL = {
    "S1": 7, "S2": 3, "S3": 6, "S4": 9, "S5": 0, "S6": 1, "S7": 5, "S8": 8,
    "S9": 11, "S10": 10, "S11": 4, "S12": 13, "S13": 12, "S14": 2, "S15": 14, "S16": 15,
}


def test_delta_generators_are_invertible():
    assert len(DELTA_GENERATORS) == 5
    assert all(g.is_invertible() for g in DELTA_GENERATORS)


def test_free_census():
    assert len(enumerate_subspaces(6, 3)) == 1395
    assert len(free_subspaces()) == 161
    assert len(free_subgroups()) == 161


def test_orbits_partition_the_free_subgroups():
    orbits = delta_orbits()
    assert len(orbits) == 16
    members = [s for o in orbits for s in o.members]
    assert len(members) == len(set(members)) == 161
    assert sorted(o.size for o in orbits) == [1, 2, 3, 3, 6, 6, 6, 6, 8, 12, 12, 12, 12, 24, 24, 24]


def test_delta_closure_on_every_pair():
    free = set(free_subspaces())
    assert all(image(g, s) in free for s in free for g in DELTA_GENERATORS)


def test_orbits_are_delta_stable():
    for o in delta_orbits():
        ms = set(o.members)
        assert all(image(g, s) in ms for s in ms for g in DELTA_GENERATORS)


def test_table_labels_biject_with_orbits():
    m = match_table_groups()
    assert m == ORBIT_OF_LABEL
    assert sorted(m.values()) == list(range(16))


def test_table_rows_pull_back():
    for rows in TABLE_GROUPS.values():
        for r in rows:
            assert pullback_v9(r).dim == 6


def test_bad_transcription_is_reported():
    with pytest.raises(TranscriptionError):
        pullback_v9("010000000")  # eta1 bits disagree
    bad = dict(TABLE_GROUPS)
    bad["S2"] = TABLE_GROUPS["S1"]
    with pytest.raises(TranscriptionError):
        match_table_groups(bad)


def test_family_dimensions():
    dims = {l: orbit_family_dimension(orbit_of_label(l)) for l in TABLE_LABELS}
    assert {l for l, d in dims.items() if d == 4} == {"S1", "S2"}
    assert "G1'" in contained_in(group_by_label("S1"))
    assert "G1" in contained_in(group_by_label("S2"))


def test_element10_occurrence():
    e10 = ELEMENT_10.bits
    with_e10 = [r for r in free_subgroups() if r.contains_element10]
    assert with_e10 and all(e10 in r.subspace for r in with_e10)


def test_summary_is_consistent():
    s = classification_summary()
    assert (s["subspace_count"], s["free_count"], s["orbit_count"]) == (1395, 161, 16)
    assert Counter(o["family_dim"] for o in s["orbits"]) == Counter({3: 14, 4: 2})
    assert all(o["label"] is not None for o in s["orbits"])


def test_unknown_label():
    with pytest.raises(KeyError):
        orbit_of_label("S17")
