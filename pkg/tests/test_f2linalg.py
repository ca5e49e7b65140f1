from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gbt.f2linalg import (
    BitMatrix,
    BitVec,
    ClosureViolation,
    DimensionMismatch,
    SingularMatrix,
    Subspace,
    enumerate_subspaces,
    gaussian_binomial,
    image,
    partition_orbits,
    rref,
    span,
)
from oracles import all_subspaces_brute


def test_bitvec_layout_is_msb_first():
    v = BitVec.from_str("100000")
    assert v.coords() == (1, 0, 0, 0, 0, 0)
    assert v[0] == 1 and v.bits == 32
    assert str(BitVec.from_coords([0, 1, 1])) == "011"


def test_bitvec_rejects_overflow_and_mixed_dims():
    with pytest.raises(ValueError):
        BitVec(8, 3)
    with pytest.raises(DimensionMismatch):
        BitVec(1, 3) + BitVec(1, 4)


def test_rref_examples():
    S = rref([BitVec.from_str(s) for s in ("110000", "011000", "101000")])
    assert S.dim == 2
    assert S.to_json() == ["011000", "101000"]


def test_rref_mixed_dims_rejected():
    with pytest.raises(DimensionMismatch):
        rref([BitVec.from_str("10"), BitVec.from_str("100")])


@given(st.lists(st.integers(0, 63), max_size=6))
def test_span_is_canonical_and_closed(rows):
    S = span(rows, 6)
    els = S.elements()
    assert len(els) == 2 ** S.dim
    assert all(x in S for x in rows)
    assert all((a ^ b) in S for a in els for b in els)
    # independent of generator order and redundancy
    assert span(list(reversed(rows)) + rows, 6) == S


@given(st.lists(st.integers(0, 63), min_size=1, max_size=5))
def test_json_round_trip(rows):
    S = span(rows, 6)
    if S.dim:
        assert Subspace.from_json(S.to_json(), 6) == S


@pytest.mark.parametrize("n,k", [(4, 2), (5, 2), (6, 2), (6, 3)])
def test_enumeration_count_matches_gaussian_binomial(n, k):
    subs = enumerate_subspaces(n, k)
    assert len(subs) == gaussian_binomial(n, k) == len(set(subs))


def test_enumeration_matches_brute_force():
    ours = {frozenset(S.elements()) for S in enumerate_subspaces(6, 3)}
    assert ours == all_subspaces_brute(6, 3)
    assert gaussian_binomial(6, 3) == 1395


def test_enumeration_is_sorted():
    subs = enumerate_subspaces(5, 2)
    assert subs == sorted(subs)


def test_matrix_columns_are_images():
    M = BitMatrix.from_columns([BitVec.from_str(s) for s in ("01", "11")])
    assert M(BitVec.from_str("10")) == BitVec.from_str("01")
    assert M(BitVec.from_str("01")) == BitVec.from_str("11")
    assert M.to_lists() == [[0, 1], [1, 1]]


@given(st.lists(st.integers(0, 15), min_size=4, max_size=4), st.lists(st.integers(0, 15), min_size=4, max_size=4),
       st.integers(0, 15))
def test_matmul_is_composition(a, b, x):
    A, B = BitMatrix(tuple(a), 4), BitMatrix(tuple(b), 4)
    assert (A @ B).apply(x) == A.apply(B.apply(x))


def test_image_requires_invertible():
    M = BitMatrix.from_lists([[1, 1], [1, 1]])
    with pytest.raises(SingularMatrix):
        image(M, span([1], 2))


def test_partition_orbits_under_swap():
    swap = BitMatrix.from_lists([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    lines = enumerate_subspaces(3, 1)
    orbits = partition_orbits(lines, [swap])
    assert sum(len(o) for o in orbits) == 7
    assert sorted(len(o) for o in orbits) == [1, 1, 1, 2, 2]
    assert all(o == sorted(o) for o in orbits)


def test_partition_orbits_reports_closure_violation():
    swap = BitMatrix.from_lists([[0, 1], [1, 0]])
    with pytest.raises(ClosureViolation) as exc:
        partition_orbits([span([0b10], 2)], [swap])
    assert exc.value.generator_index == 0
