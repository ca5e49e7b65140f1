"""Involutions of (P^1)^3 acting on multidegree (1,1,1) forms.

A form is ``sum(lam[m] * m)`` over the eight monomials; monomial ``m`` has
index ``4*b1 + 2*b2 + b3`` where ``b_k = 0`` for ``s_k`` and ``1`` for
``t_k`` (so index 0 is s1s2s3 and index 7 is t1t2t3).  Each factor
involution is one of Id, A1, B, Am1, encoded as two bits with the group law
XOR (A1 * B = Am1 projectively).  All arithmetic is exact over Q(i).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ_I
from sympy.polys.matrices import DomainMatrix

from .f2linalg import BitMatrix, BitVec, Subspace, enumerate_subspaces, partition_orbits, span

Vec = Tuple  # eight Gaussian rationals

FACTOR_BITS: Dict[str, int] = {"Id": 0b00, "A1": 0b10, "B": 0b01, "Am1": 0b11}
BITS_FACTOR = {v: k for k, v in FACTOR_BITS.items()}

ZERO = QQ_I(0, 0)
ONE = QQ_I(1, 0)
I_UNIT = QQ_I(0, 1)
EIGENVALUES = (ONE, -ONE, I_UNIT, -I_UNIT)
EIGEN_LABELS = {ONE: "+", -ONE: "-", I_UNIT: "+i", -I_UNIT: "-i"}


class LiftSelectionError(ValueError):
    """The chosen linear lifts of the generators do not commute."""


def _q(x) -> object:
    if isinstance(x, tuple):
        return QQ_I(*x)
    return QQ_I.convert(x)


# point maps (s:t) -> image, as 2x2 matrices; substituting them into a form
# gives the action on coefficients
POINT_MATRICES: Dict[str, Tuple[Tuple[int, int], Tuple[int, int]]] = {
    "Id": ((1, 0), (0, 1)),
    "A1": ((0, 1), (1, 0)),
    "B": ((1, 0), (0, -1)),
    "Am1": ((0, -1), (1, 0)),
}

# coordinate changes used to relabel the involutions on one factor
GAMMA_1 = ((ONE, ONE), (ONE, -ONE))
GAMMA_M1 = ((I_UNIT, I_UNIT), (-ONE, ONE))


@dataclass(frozen=True, order=True)
class TripleAut:
    h1: str = "Id"
    h2: str = "Id"
    h3: str = "Id"

    def __post_init__(self) -> None:
        for t in self.tags:
            if t not in FACTOR_BITS:
                raise ValueError(f"unknown factor involution {t!r}")

    @property
    def tags(self) -> Tuple[str, str, str]:
        return (self.h1, self.h2, self.h3)

    @property
    def bits(self) -> int:
        b = 0
        for t in self.tags:
            b = (b << 2) | FACTOR_BITS[t]
        return b

    @classmethod
    def from_bits(cls, bits: int) -> "TripleAut":
        return cls(*(BITS_FACTOR[(bits >> s) & 3] for s in (4, 2, 0)))

    @classmethod
    def parse(cls, text: str) -> "TripleAut":
        return cls(*[p.strip() for p in text.strip("() ").split(",")])

    def __mul__(self, other: "TripleAut") -> "TripleAut":
        return TripleAut.from_bits(self.bits ^ other.bits)

    def __str__(self) -> str:
        return "(" + ",".join(self.tags) + ")"


IDENTITY = TripleAut()

MONOMIALS: Tuple[str, ...] = tuple(
    "".join(("s" if (m >> (2 - k)) & 1 == 0 else "t") + str(k + 1) for k in range(3)) for m in range(8)
)


def monomial_index(name: str) -> int:
    """Index of a monomial written like ``s1t2s3`` (factors in any order)."""
    bits = [None, None, None]
    for var, k in zip(name[0::2], name[1::2]):
        bits[int(k) - 1] = 0 if var == "s" else 1
    if None in bits:
        raise ValueError(f"{name!r} is not a (1,1,1) monomial")
    return 4 * bits[0] + 2 * bits[1] + bits[2]


def form(terms: Dict[str, object]) -> Vec:
    """Coefficient vector from ``{monomial: coefficient}``."""
    v = [ZERO] * 8
    for name, c in terms.items():
        v[monomial_index(name)] += _q(c)
    return tuple(v)


def render(v: Sequence) -> str:
    parts = []
    for m, c in enumerate(v):
        if c == ZERO:
            continue
        s = str(QQ_I.to_sympy(c))
        if s == "1":
            coef = ""
        elif s == "-1":
            coef = "-"
        elif any(ch in s for ch in "+-*") and not s.lstrip("-").isdigit():
            coef = f"({s})"
        else:
            coef = s
        parts.append(f"{coef}{MONOMIALS[m]}")
    out = " + ".join(parts).replace("+ -", "- ")
    return out or "0"


# -- matrices ------------------------------------------------------------------


def _factor_action(tag: str) -> List[List[object]]:
    """Coefficient action of substituting the point map into a linear form in (s, t).

    F(s, t) = a s + b t becomes F(P(s, t)); the new coefficient of s (resp. t)
    is read off the first (resp. second) column of P.
    """
    P = POINT_MATRICES[tag]
    # F(P x) = (a, b) . P x, so the new coefficient row is (a, b) P, i.e. P^T acts
    return [[_q(P[j][i]) for j in range(2)] for i in range(2)]


def _kron(mats: Sequence[List[List[object]]]) -> List[List[object]]:
    out = [[ONE]]
    for M in mats:
        n, m = len(out), len(M)
        new = [[ZERO] * (n * m) for _ in range(n * m)]
        for i in range(n):
            for j in range(n):
                if out[i][j] == ZERO:
                    continue
                for k in range(m):
                    for l in range(m):
                        new[i * m + k][j * m + l] = out[i][j] * M[k][l]
        out = new
    return out


@lru_cache(maxsize=None)
def action_matrix(h: TripleAut) -> Tuple[Tuple, ...]:
    """Signed permutation matrix of h on coefficient vectors (column = image of a monomial)."""
    M = _kron([_factor_action(t) for t in h.tags])
    return tuple(tuple(r) for r in M)


def is_generalized_permutation(M: Sequence[Sequence]) -> bool:
    n = len(M)
    units = {ONE, -ONE}
    rows_ok = all(sum(x != ZERO for x in r) == 1 and all(x in units or x == ZERO for x in r) for r in M)
    cols_ok = all(sum(M[i][j] != ZERO for i in range(n)) == 1 for j in range(n))
    return rows_ok and cols_ok


@lru_cache(maxsize=None)
def lift(h: TripleAut) -> Tuple[Tuple, ...]:
    """Linear lift of h normalized to +1 at the first nonzero entry of row 0."""
    M = action_matrix(h)
    first = next(x for x in M[0] if x != ZERO)
    if first == ONE:
        return M
    return tuple(tuple(-x for x in r) for r in M)


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Tuple[Tuple, ...]:
    n, k, m = len(A), len(B), len(B[0])
    return tuple(
        tuple(sum((A[i][l] * B[l][j] for l in range(k)), ZERO) for j in range(m)) for i in range(n)
    )


def apply(M: Sequence[Sequence], v: Sequence) -> Vec:
    return tuple(sum((M[i][j] * v[j] for j in range(len(v))), ZERO) for i in range(len(M)))


def _dm(rows: Sequence[Sequence], ncols: int = 8) -> DomainMatrix:
    if not rows:
        return DomainMatrix.zeros((0, ncols), QQ_I)
    return DomainMatrix([list(r) for r in rows], (len(rows), ncols), QQ_I)


def rank(rows: Sequence[Sequence], ncols: int = 8) -> int:
    return _dm(rows, ncols).rank() if rows else 0


def _normalize(v: Sequence) -> Vec:
    first = next(x for x in v if x != ZERO)
    return tuple(x / first for x in v)


def _rows_of(D: DomainMatrix) -> List[Vec]:
    n, m = D.shape
    dense = D.to_dense()
    return [_normalize(tuple(dense[i, j].element for j in range(m))) for i in range(n)]


def nullspace(rows: Sequence[Sequence], ncols: int = 8) -> List[Vec]:
    """Basis of the solution space, each vector scaled to lead with 1."""
    if not rows:
        return [tuple(ONE if i == j else ZERO for j in range(ncols)) for i in range(ncols)]
    return _rows_of(_dm(rows, ncols).to_sparse().nullspace())


def same_span(U: Sequence[Sequence], V: Sequence[Sequence]) -> bool:
    r = rank(U)
    return r == rank(V) == rank(list(U) + list(V))


def eigenspace(M: Sequence[Sequence], mu) -> List[Vec]:
    n = len(M)
    rows = [tuple(M[i][j] - (mu if i == j else ZERO) for j in range(n)) for i in range(n)]
    return nullspace(rows, n)


def eigenspaces(M: Sequence[Sequence]) -> Dict[object, List[Vec]]:
    out = {}
    for mu in EIGENVALUES:
        E = eigenspace(M, mu)
        if E:
            out[mu] = E
    return out


def is_invariant(F: Sequence, h: TripleAut) -> bool:
    """True iff h maps the divisor F = 0 to itself."""
    return rank([tuple(F), apply(action_matrix(h), F)]) == 1


# -- the invariance table --------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    pattern: Tuple[str, str, str]  # "Id", "A" (A1 or Am1 by alpha) or "B"
    # each condition: (target slot, sign, alpha indices, source slot), slots 1-based,
    # meaning lam[target] = sign * c * prod(alpha) * lam[source]
    conditions: Tuple[Tuple[int, int, Tuple[int, ...], int], ...] = ()
    csq: Tuple[int, ...] = ()
    zero_patterns: Tuple[Tuple[int, ...], ...] = ()

    def label(self) -> str:
        names = [f"A{k + 1}" if p == "A" else p for k, p in enumerate(self.pattern)]
        return "(" + ",".join(names) + ")"


TABLE_ROWS: Tuple[TableRow, ...] = (
    TableRow(("Id", "Id", "A"), ((2, 1, (), 1), (4, 1, (), 3), (6, 1, (), 5), (8, 1, (), 7)), (3,)),
    TableRow(("Id", "Id", "B"), zero_patterns=((2, 4, 6, 8), (1, 3, 5, 7))),
    TableRow(("Id", "A", "A"), ((3, 1, (3,), 2), (4, 1, (), 1), (7, 1, (3,), 6), (8, 1, (), 5)), (2, 3)),
    TableRow(("Id", "A", "B"), ((3, 1, (), 1), (4, -1, (), 2), (7, 1, (), 5), (8, -1, (), 6)), (2,)),
    TableRow(("Id", "B", "B"), zero_patterns=((2, 3, 6, 7), (1, 4, 5, 8))),
    TableRow(("A", "A", "A"), ((5, 1, (2, 3), 4), (6, 1, (2,), 3), (7, 1, (3,), 2), (8, 1, (), 1)), (1, 2, 3)),
    TableRow(("A", "A", "B"), ((5, 1, (2,), 3), (6, -1, (2,), 4), (7, 1, (), 1), (8, -1, (), 2)), (1, 2)),
    TableRow(("A", "B", "B"), ((5, 1, (), 1), (6, -1, (), 2), (7, -1, (), 3), (8, 1, (), 4)), (1,)),
    TableRow(("B", "B", "B"), zero_patterns=((2, 3, 5, 8), (1, 4, 6, 7))),
)


def _row_instances(row: TableRow):
    """Yield (alphas by factor, TripleAut) for every choice of alpha = +-1."""
    a_slots = [k for k, p in enumerate(row.pattern) if p == "A"]
    for signs in itertools.product((1, -1), repeat=len(a_slots)):
        alphas = {k + 1: s for k, s in zip(a_slots, signs)}
        tags = [p if p != "A" else ("A1" if alphas[k + 1] == 1 else "Am1") for k, p in enumerate(row.pattern)]
        yield alphas, TripleAut(*tags)


def _c_values(csq: int) -> List[object]:
    return [ONE, -ONE] if csq == 1 else [I_UNIT, -I_UNIT]


def table_solution_spaces(row: TableRow, alphas: Dict[int, int]) -> List[List[Vec]]:
    spaces = []
    if row.zero_patterns:
        for zeros in row.zero_patterns:
            eqs = [tuple(ONE if j == z - 1 else ZERO for j in range(8)) for z in zeros]
            spaces.append(nullspace(eqs))
        return spaces
    csq = 1
    for k in row.csq:
        csq *= alphas[k]
    for c in _c_values(csq):
        eqs = []
        for tgt, sign, al, src in row.conditions:
            coef = c * sign
            for k in al:
                coef *= alphas[k]
            e = [ZERO] * 8
            e[tgt - 1] += ONE
            e[src - 1] -= coef
            eqs.append(tuple(e))
        spaces.append(nullspace(eqs))
    return spaces


@dataclass
class TableCheck:
    row: str
    element: str
    csq: Optional[int]
    eigenvalues: List[str]
    ok: bool


def _spaces_match(A: List[List[Vec]], B: List[List[Vec]]) -> bool:
    if len(A) != len(B):
        return False
    unused = list(B)
    for U in A:
        hit = next((V for V in unused if same_span(U, V)), None)
        if hit is None:
            return False
        unused.remove(hit)
    return True


def check_invariance_table() -> List[TableCheck]:
    """Compare every row of the invariance table with the eigenspaces of the action."""
    out = []
    for row in TABLE_ROWS:
        for alphas, h in _row_instances(row):
            eig = eigenspaces(action_matrix(h))
            csq = None
            if not row.zero_patterns:
                csq = 1
                for k in row.csq:
                    csq *= alphas[k]
                # c^2 = csq is the same statement as eigenvalues being the square roots of csq
                if set(eig) != set(_c_values(csq)):
                    out.append(TableCheck(row.label(), str(h), csq, [EIGEN_LABELS[m] for m in eig], False))
                    continue
            ok = _spaces_match(list(eig.values()), table_solution_spaces(row, alphas))
            out.append(TableCheck(row.label(), str(h), csq, sorted(EIGEN_LABELS[m] for m in eig), ok))
    return out


# -- irreducibility ------------------------------------------------------------


def flattening(F: Sequence, k: int) -> List[List[object]]:
    """2 x 4 matrix of F grouped by the (s_k, t_k) variable of factor k (0-based)."""
    rows: List[List[object]] = [[], []]
    for m in range(8):
        rows[(m >> (2 - k)) & 1].append(F[m])
    return rows


def is_irreducible(F: Sequence) -> bool:
    if all(x == ZERO for x in F):
        raise ValueError("the zero form does not define a surface")
    return all(rank(flattening(F, k), 4) == 2 for k in range(3))


def _minor_coefficients(basis: Sequence[Sequence], k: int):
    """Coefficients of every 2x2 minor of flattening k as a quadratic form in the
    combination coefficients x_j of ``sum x_j basis[j]``."""
    flats = [flattening(v, k) for v in basis]
    d = len(basis)
    for a, b in itertools.combinations(range(4), 2):
        coeffs = []
        for j in range(d):
            for l in range(j, d):
                Fj, Fl = flats[j], flats[l]
                c = Fj[0][a] * Fl[1][b] - Fj[0][b] * Fl[1][a]
                if l != j:
                    c += Fl[0][a] * Fj[1][b] - Fl[0][b] * Fj[1][a]
                coeffs.append(c)
        yield coeffs


def has_irreducible_member(basis: Sequence[Sequence]) -> bool:
    """Whether the generic element of span(basis) is an irreducible form.

    Reducibility of one flattening is the vanishing of its 2x2 minors, which
    are quadratic forms in the combination coefficients.  The span has an
    irreducible member iff for every factor some minor is not identically
    zero; this is decided exactly from the coefficients.
    """
    if not basis:
        return False
    for k in range(3):
        if all(c == ZERO for coeffs in _minor_coefficients(basis, k) for c in coeffs):
            return False
    return True


# -- character decompositions --------------------------------------------------


@dataclass
class CharacterSpace:
    character: Tuple[str, ...]
    basis: List[Vec]

    @property
    def label(self) -> str:
        return "".join(self.character)

    @property
    def dim(self) -> int:
        return len(self.basis)


@lru_cache(maxsize=None)
def _lift_dm(h: TripleAut) -> DomainMatrix:
    return _dm(lift(h)).to_sparse()


@lru_cache(maxsize=None)
def _shifted(h: TripleAut, mu) -> DomainMatrix:
    return _lift_dm(h) - DomainMatrix.eye(8, QQ_I).to_sparse() * mu


@lru_cache(maxsize=None)
def lift_eigenvalues(h: TripleAut) -> Tuple:
    """The lift squares to +I or -I, so its eigenvalues are +-1 or +-i."""
    M = _lift_dm(h)
    return (ONE, -ONE) if M * M == DomainMatrix.eye(8, QQ_I).to_sparse() else (I_UNIT, -I_UNIT)


def lifts_commute(g: TripleAut, h: TripleAut) -> bool:
    A, B = _lift_dm(g), _lift_dm(h)
    return A * B == B * A


def character_decomposition(gens: Sequence[TripleAut]) -> List[CharacterSpace]:
    """Simultaneous eigenspaces of the normalized lifts of ``gens``.

    Characters list one eigenvalue label per generator, in generator order.
    """
    for g, h in itertools.combinations(gens, 2):
        if not lifts_commute(g, h):
            raise LiftSelectionError(f"lifts of {g} and {h} do not commute")
    out = []

    def rec(prefix, stack):
        k = len(prefix)
        if k == len(gens):
            ns = stack.nullspace()
            if ns.shape[0]:
                out.append(CharacterSpace(tuple(EIGEN_LABELS[m] for m in prefix), _rows_of(ns)))
            return
        for mu in lift_eigenvalues(gens[k]):
            block = _shifted(gens[k], mu)
            nxt = block if stack is None else stack.vstack(block)
            if nxt.rank() < 8:
                rec(prefix + (mu,), nxt)

    rec((), None)
    if sum(c.dim for c in out) != 8:
        raise ArithmeticError("character spaces do not fill V")
    return out


def hermitian(u: Sequence, v: Sequence):
    return sum((a * QQ_I(b.x, -b.y) for a, b in zip(u, v)), ZERO)


def invariant_irreducible_spaces(gens: Sequence[TripleAut]) -> List[CharacterSpace]:
    try:
        spaces = character_decomposition(gens)
    except LiftSelectionError:
        # anticommuting lifts have no common eigenvector
        return []
    return [c for c in spaces if has_irreducible_member(c.basis)]


# named subgroups
CASE_I = (TripleAut("A1", "A1", "A1"), TripleAut("Id", "B", "B"))
CASE_II = (TripleAut("Id", "B", "B"), TripleAut("B", "B", "Id"))
CASE_H0 = (TripleAut("Id", "B", "B"), TripleAut("A1", "A1", "A1"), TripleAut("B", "B", "Id"))
CASES = {"i": CASE_I, "ii": CASE_II, "h0": CASE_H0}


# -- subgroup classification ---------------------------------------------------


def _projective_eq(P, Q) -> bool:
    """P = c Q for a nonzero scalar c (2x2)."""
    a = [x for r in P for x in r]
    b = [x for r in Q for x in r]
    return all(a[i] * b[j] == a[j] * b[i] for i in range(4) for j in range(4)) and any(x != ZERO for x in a)


def _inv2(P):
    (a, b), (c, d) = P
    det = a * d - b * c
    return ((d / det, -b / det), (-c / det, a / det))


def _mul2(P, Q):
    return tuple(tuple(sum((P[i][k] * Q[k][j] for k in range(2)), ZERO) for j in range(2)) for i in range(2))


def _point(tag: str):
    return tuple(tuple(_q(x) for x in r) for r in POINT_MATRICES[tag])


def conjugate_tag(gamma, tag: str) -> str:
    """The involution gamma^-1 o tag o gamma, as a tag."""
    C = _mul2(_mul2(_inv2(gamma), _point(tag)), gamma)
    for t in FACTOR_BITS:
        if _projective_eq(C, _point(t)):
            return t
    raise ArithmeticError(f"conjugate of {tag} is not one of the four involutions")


def conjugacy_identities() -> List[Tuple[str, bool]]:
    """The six stated conjugacies of the factor involutions, checked projectively."""
    claims = [
        (GAMMA_1, "A1", "B", "f1^-1 A1 f1 = B"),
        (GAMMA_M1, "Am1", "B", "f-1^-1 A-1 f-1 = B"),
        (GAMMA_1, "B", "A1", "f1^-1 B f1 = A1"),
        (GAMMA_M1, "B", "A1", "f-1^-1 B f-1 = A1"),
        (GAMMA_1, "Am1", "Am1", "f1^-1 A-1 f1 = A-1"),
        (GAMMA_M1, "A1", "Am1", "f-1^-1 A1 f-1 = A-1"),
    ]
    return [(text, conjugate_tag(g, x) == y) for g, x, y, text in claims]


def _factor_move(gamma, factor: int) -> BitMatrix:
    cols = []
    for j in range(6):
        x = 1 << (5 - j)
        h = TripleAut.from_bits(x)
        tags = list(h.tags)
        tags[factor] = conjugate_tag(gamma, tags[factor])
        cols.append(BitVec(TripleAut(*tags).bits, 6))
    return BitMatrix.from_columns(cols)


def _swap_factors(a: int, b: int) -> BitMatrix:
    cols = []
    for j in range(6):
        h = TripleAut.from_bits(1 << (5 - j))
        tags = list(h.tags)
        tags[a], tags[b] = tags[b], tags[a]
        cols.append(BitVec(TripleAut(*tags).bits, 6))
    return BitMatrix.from_columns(cols)


@lru_cache(maxsize=None)
def move_generators() -> Tuple[BitMatrix, ...]:
    moves = [_swap_factors(0, 1), _swap_factors(1, 2)]
    for k in range(3):
        moves.append(_factor_move(GAMMA_1, k))
        moves.append(_factor_move(GAMMA_M1, k))
    return tuple(moves)


def subgroup_of(gens: Sequence[TripleAut]) -> Subspace:
    return span((g.bits for g in gens), 6)


def subgroup_generators(S: Subspace) -> List[TripleAut]:
    return [TripleAut.from_bits(r) for r in S.rows]


def admits_irreducible_invariant(S: Subspace) -> bool:
    return bool(invariant_irreducible_spaces(subgroup_generators(S)))


@dataclass
class SubgroupClass:
    representative: Subspace
    members: List[Subspace]
    reference: Optional[str]  # name of the known normal form in this class, if any

    def to_json(self) -> dict:
        return {
            "representative": [str(g) for g in subgroup_generators(self.representative)],
            "size": len(self.members),
            "reference": self.reference,
        }


REFERENCE_FORMS = {2: {"i": CASE_I, "ii": CASE_II}, 3: {"h0": CASE_H0}}


def classify_invariant_subgroups(rank: int) -> List[SubgroupClass]:
    """Classes of rank-``rank`` subgroups with an invariant irreducible form,
    under factor permutations and the f1 / f-1 relabelings."""
    if rank not in (1, 2, 3):
        raise ValueError("rank must be 1, 2 or 3")
    survivors = [S for S in enumerate_subspaces(6, rank) if admits_irreducible_invariant(S)]
    refs = {subgroup_of(g): name for name, g in REFERENCE_FORMS.get(rank, {}).items()}
    out = []
    for orbit in partition_orbits(survivors, move_generators()):
        ref = next((refs[s] for s in orbit if s in refs), None)
        out.append(SubgroupClass(orbit[0], orbit, ref))
    return out


# -- pencils -------------------------------------------------------------------


def _pencil(*terms: Dict[str, int]) -> List[Vec]:
    return [form(t) for t in terms]


PENCILS: Dict[int, List[List[Vec]]] = {
    1: [
        _pencil({"s1s2s3": 1, "t1t2t3": 1}, {"s1t2t3": 1, "t1s2s3": 1}),
        _pencil({"s1s2t3": 1, "t1t2s3": 1}, {"s1t2s3": 1, "t1s2t3": 1}),
        _pencil({"s1s2s3": 1, "t1t2t3": -1}, {"s1t2t3": 1, "t1s2s3": -1}),
        _pencil({"s1s2t3": 1, "t1t2s3": -1}, {"s1t2s3": 1, "t1s2t3": -1}),
    ],
    2: [
        _pencil({"s1s2s3": 1}, {"t1t2t3": 1}),
        _pencil({"s1t2s3": 1}, {"t1s2t3": 1}),
        _pencil({"s1t2t3": 1}, {"t1s2s3": 1}),
        _pencil({"s1s2t3": 1}, {"t1t2s3": 1}),
    ],
    3: [
        _pencil({"s1s2s3": 1, "t1t2t3": 1}),
        _pencil({"s1s2s3": 1, "t1t2t3": -1}),
        _pencil({"s1t2t3": 1, "t1s2s3": 1}),
        _pencil({"s1t2t3": 1, "t1s2s3": -1}),
        _pencil({"s1s2t3": 1, "t1t2s3": 1}),
        _pencil({"s1s2t3": 1, "t1t2s3": -1}),
        _pencil({"t1s2t3": 1, "s1t2s3": 1}),
        _pencil({"t1s2t3": 1, "s1t2s3": -1}),
    ],
}

# explicit moves named for the first case: s3 <-> t3, and t1 -> -t1
NAMED_PENCIL_MOVES = {(1, 1): TripleAut("Id", "Id", "A1"), (1, 2): TripleAut("B", "Id", "Id")}


def image_space(h: TripleAut, basis: Sequence[Sequence]) -> List[Vec]:
    M = action_matrix(h)
    return [apply(M, v) for v in basis]


@dataclass
class PencilCheck:
    case: int
    target: int
    element: Optional[str]
    ok: bool


def pencil_orbit_check() -> Tuple[bool, List[PencilCheck]]:
    """For each case, find an element of the 64-element group carrying the first
    pencil onto each of the others (and confirm the named moves)."""
    checks = []
    elements = [TripleAut.from_bits(b) for b in range(64)]
    for case, pencils in PENCILS.items():
        first = pencils[0]
        for t, P in enumerate(pencils[1:], start=1):
            named = NAMED_PENCIL_MOVES.get((case, t))
            if named is not None:
                ok = same_span(image_space(named, first), P)
                checks.append(PencilCheck(case, t, str(named), ok))
                continue
            h = next((h for h in elements if same_span(image_space(h, first), P)), None)
            checks.append(PencilCheck(case, t, None if h is None else str(h), h is not None))
    return all(c.ok for c in checks), checks
