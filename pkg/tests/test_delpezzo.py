from __future__ import annotations

import itertools

import pytest

from gbt.delpezzo import (
    CASES,
    EIGENVALUES,
    IDENTITY,
    MONOMIALS,
    TABLE_ROWS,
    ZERO,
    LiftSelectionError,
    TripleAut,
    action_matrix,
    apply,
    character_decomposition,
    check_invariance_table,
    classify_invariant_subgroups,
    conjugacy_identities,
    eigenspaces,
    flattening,
    form,
    has_irreducible_member,
    hermitian,
    is_generalized_permutation,
    is_invariant,
    is_irreducible,
    lift,
    lifts_commute,
    matmul,
    monomial_index,
    move_generators,
    pencil_orbit_check,
    same_span,
    subgroup_of,
)

ALL = [TripleAut.from_bits(b) for b in range(64)]


def F(**terms):
    return form(terms)


# character spaces as stated for the three normal forms (up to scalars)
EXPECTED = {
    "i": {
        "++": [F(s1s2s3=1, t1t2t3=1), F(s1t2t3=1, t1s2s3=1)],
        "+-": [F(s1s2t3=1, t1t2s3=1), F(s1t2s3=1, t1s2t3=1)],
        "-+": [F(s1s2s3=1, t1t2t3=-1), F(s1t2t3=1, t1s2s3=-1)],
        "--": [F(s1s2t3=1, t1t2s3=-1), F(s1t2s3=1, t1s2t3=-1)],
    },
    "ii": {
        "++": [F(s1s2s3=1), F(t1t2t3=1)],
        "+-": [F(s1t2t3=1), F(t1s2s3=1)],
        "-+": [F(s1s2t3=1), F(t1t2s3=1)],
        "--": [F(s1t2s3=1), F(t1s2t3=1)],
    },
    "h0": {
        "+++": [F(s1s2s3=1, t1t2t3=1)],
        "+-+": [F(s1s2s3=1, t1t2t3=-1)],
        "++-": [F(s1t2t3=1, t1s2s3=1)],
        "+--": [F(s1t2t3=1, t1s2s3=-1)],
        "-++": [F(s1s2t3=1, t1t2s3=1)],
        "--+": [F(s1s2t3=1, t1t2s3=-1)],
        "-+-": [F(t1s2t3=1, s1t2s3=1)],
        "---": [F(t1s2t3=1, s1t2s3=-1)],
    },
}


def test_monomial_order():
    assert MONOMIALS[0] == "s1s2s3" and MONOMIALS[7] == "t1t2t3"
    assert monomial_index("t3s1s2") == 1
    with pytest.raises(ValueError):
        monomial_index("s1s2")


def test_tags_round_trip():
    for h in ALL:
        assert TripleAut.from_bits(h.bits) == h
        assert TripleAut.parse(str(h)) == h
    with pytest.raises(ValueError):
        TripleAut("C", "Id", "Id")


def test_action_is_generalized_permutation():
    assert all(is_generalized_permutation(action_matrix(h)) for h in ALL)


def test_action_is_projective_homomorphism():
    # the action of gh agrees with that of g then h up to one scalar
    for g, h in itertools.product(ALL[::7], ALL[::5]):
        P = matmul(action_matrix(g), action_matrix(h))
        Q = action_matrix(g * h)
        ratios = {P[i][j] / Q[i][j] for i in range(8) for j in range(8) if Q[i][j] != ZERO}
        assert len(ratios) == 1


def test_lifts_square_to_scalars():
    for h in ALL:
        L = lift(h)
        sq = matmul(L, L)
        assert sq[0][0] in (EIGENVALUES[0], EIGENVALUES[1])
        assert all(sq[i][j] == (sq[0][0] if i == j else ZERO) for i in range(8) for j in range(8))


def test_invariance_table_rows():
    checks = check_invariance_table()
    assert len(TABLE_ROWS) == 9
    assert len(checks) == 25
    bad = [(c.row, c.element) for c in checks if not c.ok]
    assert bad == []


def test_eigenspaces_fill_v():
    for h in ALL:
        assert sum(len(b) for b in eigenspaces(action_matrix(h)).values()) == 8


@pytest.mark.parametrize("case", ["i", "ii", "h0"])
def test_character_decomposition_basis_for_basis(case):
    spaces = {c.label: c.basis for c in character_decomposition(CASES[case])}
    assert set(spaces) == set(EXPECTED[case])
    for label, basis in EXPECTED[case].items():
        assert same_span(spaces[label], basis), label


def test_character_spaces_are_orthogonal():
    spaces = character_decomposition(CASES["h0"])
    for a, b in itertools.combinations(spaces, 2):
        assert all(hermitian(u, v) == ZERO for u in a.basis for v in b.basis)


def test_anticommuting_lifts_are_rejected():
    g, h = TripleAut("A1", "Id", "Id"), TripleAut("B", "Id", "Id")
    assert not lifts_commute(g, h)
    with pytest.raises(LiftSelectionError):
        character_decomposition([g, h])


def test_irreducibility():
    assert is_irreducible(F(s1s2s3=1, t1t2t3=1))
    assert not is_irreducible(F(s1s2s3=1, s1t2t3=1))  # s1 splits off
    assert len(flattening(F(s1s2s3=1), 0)) == 2
    assert not has_irreducible_member([F(s1s2s3=1), F(s1t2t3=1)])
    assert has_irreducible_member([F(s1s2s3=1), F(t1t2t3=1)])


def test_reference_surface_is_invariant():
    Y = F(s1s2s3=1, t1t2t3=1)
    for g in CASES["h0"]:
        assert is_invariant(Y, g)
    assert is_invariant(Y, IDENTITY)
    assert apply(action_matrix(IDENTITY), Y) == Y


def test_conjugacy_identities():
    assert all(ok for _, ok in conjugacy_identities())


def test_moves_are_invertible():
    assert all(m.is_invertible() for m in move_generators())


def test_rank_two_classes():
    classes = classify_invariant_subgroups(2)
    assert len(classes) == 2
    assert sorted(c.reference for c in classes) == ["i", "ii"]
    assert sorted(len(c.members) for c in classes) == [27, 162]
    for c in classes:
        assert subgroup_of(CASES[c.reference]) in c.members


def test_rank_three_class():
    classes = classify_invariant_subgroups(3)
    assert len(classes) == 1
    assert classes[0].reference == "h0"
    assert subgroup_of(CASES["h0"]) in classes[0].members


def test_classify_rejects_rank():
    with pytest.raises(ValueError):
        classify_invariant_subgroups(4)


def test_pencil_orbits():
    ok, checks = pencil_orbit_check()
    assert ok
    assert len(checks) == 3 + 3 + 7
