from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gbt.heisenberg import (
    FinAbGroup,
    GPMatrixC,
    RootOfUnity,
    eigenvector_F,
    heisenberg_commutation_holds,
    match_z2_divisors,
    pairing,
    sv_translate,
    sv_twist,
    tensor_translate,
    tensor_twist,
    verify_decomposition,
    xy_expansion,
    z2_geometric_eigenvectors,
)

GROUPS = [(2,), (3,), (4,), (2, 2), (6,), (2, 4), (3, 3)]
small_groups = st.sampled_from(GROUPS).map(FinAbGroup)


def test_group_validation():
    with pytest.raises(ValueError):
        FinAbGroup((4, 2))
    with pytest.raises(ValueError):
        FinAbGroup(())
    G = FinAbGroup.parse("2,4")
    assert (G.order, G.exponent) == (8, 4)
    assert [G.index(g) for g in G.elements()] == list(range(8))


def test_roots_of_unity_reduce():
    assert RootOfUnity(7, 3).exponent == 1
    assert str(RootOfUnity(3, 3)) == "1"


def test_generalized_permutation_product():
    A = GPMatrixC((1, 0), (1, 0), 4)
    assert (A @ A) == GPMatrixC((0, 1), (1, 1), 4)
    assert A @ GPMatrixC.identity(2, 4) == A
    with pytest.raises(ValueError):
        GPMatrixC((0, 0), (0, 0), 2)


@given(small_groups, st.data())
def test_pairing_is_bilinear(G, data):
    els = G.elements()
    a, b, c = (data.draw(st.sampled_from(els)) for _ in range(3))
    assert pairing(G, G.add(a, b), c) == pairing(G, a, c) * pairing(G, b, c)
    assert pairing(G, a, G.add(b, c)) == pairing(G, a, b) * pairing(G, a, c)


@given(small_groups, st.data())
def test_actions_are_homomorphisms(G, data):
    els = G.elements()
    a, b = (data.draw(st.sampled_from(els)) for _ in range(2))
    for op in (sv_translate, sv_twist, tensor_translate, tensor_twist):
        assert op(G, a) @ op(G, b) == op(G, G.add(a, b))


@pytest.mark.parametrize("factors", GROUPS)
def test_commutation_relation(factors):
    assert heisenberg_commutation_holds(FinAbGroup(factors))


@given(small_groups, st.data())
def test_tensor_actions_commute(G, data):
    # the central scalars cancel on V (x) V-bar
    els = G.elements()
    h, eta = (data.draw(st.sampled_from(els)) for _ in range(2))
    assert tensor_translate(G, h) @ tensor_twist(G, eta) == tensor_twist(G, eta) @ tensor_translate(G, h)


@pytest.mark.parametrize("factors", [(2,), (3,), (4,), (2, 2), (6,), (2, 4), (3, 3), (6, 6)])
def test_decomposition(factors):
    G = FinAbGroup(factors)
    rep = verify_decomposition(G)
    assert rep.ok, rep.failures
    assert rep.eigenvectors == G.order ** 2


def test_size_guard():
    with pytest.raises(ValueError):
        verify_decomposition(FinAbGroup((7,)), max_order=6)


def test_eigenvectors_are_nonzero_everywhere():
    G = FinAbGroup((3,))
    F = eigenvector_F(G, (1,), (2,))
    assert len(F) == 9 and all(x is not None for x in F)


def test_z2_divisors():
    assert match_z2_divisors() == {
        "F_00": "x0y0 + x1y1",
        "F_01": "x0y0 - x1y1",
        "F_10": "x0y1 + x1y0",
        "F_11": "x0y1 - x1y0",
    }


def test_z2_divisors_have_distinct_geometric_characters():
    for flag in (True, False):
        chars = z2_geometric_eigenvectors(flag)
        assert len(set(chars.values())) == 4


def test_xy_expansion_needs_exponent_two():
    G = FinAbGroup((3,))
    with pytest.raises(ValueError):
        xy_expansion(G, eigenvector_F(G, (0,), (0,)))
