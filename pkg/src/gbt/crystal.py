"""Fundamental groups as crystallographic groups on R^6 and their H_1.

Lattice coordinates on R^6 are ``(x1, y1, x2, y2, x3, y3)`` where
``z_k = x_k + y_k * tau_k``.  The value of ``tau_k`` never enters: every
computation is done on lattice coordinates with exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .f2linalg import Subspace
from .fixedpoints import ElementG0, to_v9

HALF = Fraction(1, 2)
Word = Tuple[Tuple[int, int], ...]  # (generator index, exponent) pairs

GEN_NAMES = ("t1", "t2", "t3", "t4", "t5", "t6", "g1", "g2", "g3")


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class AffineMap:
    """``v -> diag(signs) v + translation`` style map, general integer linear part allowed."""

    linear: Tuple[Tuple[int, ...], ...]
    translation: Tuple[Fraction, ...]

    @classmethod
    def identity(cls, n: int = 6) -> "AffineMap":
        lin = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return cls(lin, tuple(Fraction(0) for _ in range(n)))

    @classmethod
    def translation_by(cls, v: Sequence) -> "AffineMap":
        n = len(v)
        return cls(cls.identity(n).linear, tuple(Fraction(x) for x in v))

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        # (self o other)(v) = A (B v + b) + a
        A, B = self.linear, other.linear
        n = len(A)
        lin = tuple(
            tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)) for i in range(n)
        )
        t = tuple(
            sum((A[i][k] * other.translation[k] for k in range(n)), Fraction(0)) + self.translation[i]
            for i in range(n)
        )
        return AffineMap(lin, t)

    def inverse(self) -> "AffineMap":
        inv = _int_matrix_inverse(self.linear)
        n = len(inv)
        t = tuple(
            -sum((inv[i][k] * self.translation[k] for k in range(n)), Fraction(0)) for i in range(n)
        )
        return AffineMap(tuple(tuple(int(x) for x in row) for row in inv), t)

    def is_identity(self) -> bool:
        return self == AffineMap.identity(len(self.linear))

    def is_lattice_translation(self) -> bool:
        return self.linear == AffineMap.identity(len(self.linear)).linear and all(
            x.denominator == 1 for x in self.translation
        )


def _int_matrix_inverse(M: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular linear part")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("linear part is not unimodular")
    return inv


@dataclass(frozen=True)
class AffineGen:
    """Lift of one element of G: per-curve sign and half-lattice translation."""

    block_signs: Tuple[int, int, int]
    translation: Tuple[Fraction, ...]

    @classmethod
    def from_element(cls, e: ElementG0) -> "AffineGen":
        signs = []
        trans: List[Fraction] = []
        for s in to_v9(e):
            signs.append(-1 if s.weight % 2 else 1)
            # z -> -z (a), -z + tau/2 (b), -z + 1/2 (c), composed and reduced mod the lattice
            trans += [HALF * s.c, HALF * s.b]
        return cls(tuple(signs), tuple(trans))  # type: ignore[arg-type]

    def coordinate_signs(self) -> Tuple[int, ...]:
        return tuple(s for s in self.block_signs for _ in range(2))

    def as_affine(self) -> AffineMap:
        sg = self.coordinate_signs()
        lin = tuple(tuple(sg[i] if i == j else 0 for j in range(6)) for i in range(6))
        return AffineMap(lin, self.translation)


@dataclass(frozen=True)
class Presentation:
    ngens: int
    relators: Tuple[Word, ...]
    names: Tuple[str, ...] = ()

    def exponent_matrix(self) -> List[List[int]]:
        rows = []
        for w in self.relators:
            row = [0] * self.ngens
            for g, e in w:
                row[g] += e
            rows.append(row)
        return rows


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if any(d < 2 for d in self.torsion):
            raise ValueError("invariant factors must be >= 2")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("invariant factors must form a divisibility chain")

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for d, k in _runs(self.torsion):
            parts.append(f"(Z/{d})" if k == 1 else f"(Z/{d})^{k}")
        return " x ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @property
    def order_of_torsion(self) -> int:
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def primary_parts(self) -> Dict[int, List[int]]:
        """Prime-power decomposition of the torsion: ``{p: [p^a, ...]}``."""
        out: Dict[int, List[int]] = {}
        for d in self.torsion:
            for p, a in _factor(d).items():
                out.setdefault(p, []).append(p ** a)
        return {p: sorted(v) for p, v in out.items()}


def _runs(xs: Sequence[int]):
    for d, grp in itertools.groupby(xs):
        yield d, len(list(grp))


def _factor(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class CrystalGroup:
    gens: Tuple[AffineGen, AffineGen, AffineGen]
    source_subspace: Subspace
    lattice_rank: int = 6
    basis: Tuple[int, int, int] = field(default=(0, 0, 0))

    def affine_generators(self) -> List[AffineMap]:
        lattice = [AffineMap.translation_by([int(i == j) for j in range(6)]) for i in range(6)]
        return lattice + [g.as_affine() for g in self.gens]

    def coset_representatives(self) -> Dict[Tuple[int, ...], List[Tuple[Fraction, ...]]]:
        """Linear part (as coordinate signs) -> translations mod Z^6 of the 8 lifts."""
        out: Dict[Tuple[int, ...], List[Tuple[Fraction, ...]]] = {}
        for x in self.source_subspace.elements():
            g = AffineGen.from_element(ElementG0.from_bits(x))
            out.setdefault(g.coordinate_signs(), []).append(tuple(t % 1 for t in g.translation))
        return out


def build_gamma(G: Subspace, basis: Sequence[int] | None = None) -> CrystalGroup:
    """Lift the canonical basis of G (or ``basis``, three ints spanning G) to affine maps."""
    if G.ambient_dim != 6 or G.dim != 3:
        raise ValueError("G must be a 3-dimensional subspace of F_2^6")
    rows = tuple(G.rows) if basis is None else tuple(basis)
    if basis is not None:
        from .f2linalg import span

        if span(rows, 6) != G:
            raise ValueError("basis does not span G")
    gens = tuple(AffineGen.from_element(ElementG0.from_bits(r)) for r in rows)
    return CrystalGroup(gens, G, basis=rows)  # type: ignore[arg-type]


def _lattice_word(v: Sequence[Fraction]) -> List[Tuple[int, int]]:
    out = []
    for i, x in enumerate(v):
        if x.denominator != 1:
            raise ConstructionError(f"vector {v} is not in the lattice")
        if x:
            out.append((i, int(x)))
    return out


def _inv(word: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    return [(g, -e) for g, e in reversed(word)]


def presentation(gamma: CrystalGroup) -> Presentation:
    """Presentation of the extension 0 -> Z^6 -> Gamma -> (Z/2)^3 -> 1.

    Generators 0..5 are the lattice translations, 6..8 the lifts.
    """
    rels: List[Word] = []
    for i, j in itertools.combinations(range(6), 2):
        rels.append(((i, 1), (j, 1), (i, -1), (j, -1)))
    for k, g in enumerate(gamma.gens):
        gk = 6 + k
        sg = g.coordinate_signs()
        for i in range(6):
            # g t_i g^-1 = t_i^{sign}
            rels.append(((gk, 1), (i, 1), (gk, -1), (i, -sg[i])))
    maps = [g.as_affine() for g in gamma.gens]
    for k, m in enumerate(maps):
        sq = m @ m
        if not sq.is_lattice_translation():
            raise ConstructionError(f"square of generator {k} is not a lattice translation")
        rels.append(tuple([(6 + k, 2)] + _inv(_lattice_word(sq.translation))))
    for j, k in itertools.combinations(range(3), 2):
        c = maps[j] @ maps[k] @ maps[j].inverse() @ maps[k].inverse()
        if not c.is_lattice_translation():
            raise ConstructionError(f"commutator of generators {j},{k} is not a lattice translation")
        rels.append(tuple([(6 + j, 1), (6 + k, 1), (6 + j, -1), (6 + k, -1)] + _inv(_lattice_word(c.translation))))
    return Presentation(9, tuple(rels), GEN_NAMES)


def evaluate_word(word: Word, gens: Sequence[AffineMap]) -> AffineMap:
    out = AffineMap.identity(len(gens[0].linear))
    inverses: Dict[int, AffineMap] = {}
    for g, e in word:
        m = gens[g]
        if e < 0:
            m = inverses.setdefault(g, gens[g].inverse())
        for _ in range(abs(e)):
            out = out @ m
    return out


def relators_hold(gamma: CrystalGroup) -> bool:
    gens = gamma.affine_generators()
    return all(evaluate_word(w, gens).is_identity() for w in presentation(gamma).relators)


def smith_normal_form(M: Sequence[Sequence[int]]) -> Tuple[List[int], int]:
    """Invariant factors (including 1s) and rank of an integer matrix.

    Pivot: smallest nonzero absolute value, scanned row by row.  Python ints
    are unbounded, so there is no overflow path.
    """
    A = [list(map(int, row)) for row in M]
    nr = len(A)
    nc = len(A[0]) if nr else 0
    diag: List[int] = []
    t = 0
    while t < min(nr, nc):
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, nr):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, nc):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    dirty = True
            if not dirty:
                # enforce divisibility of the remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if A[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # move the smallest remainder into the pivot slot
            best = (t, t)
            for i in range(t, nr):
                if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, nc):
                if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                    best = (t, j)
            if best[1] == t:
                A[t], A[best[0]] = A[best[0]], A[t]
            else:
                for row in A:
                    row[t], row[best[1]] = row[best[1]], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag, len(diag)


def abelian_invariants_of_matrix(M: Sequence[Sequence[int]], ngens: int) -> AbelianInvariants:
    factors, rank = smith_normal_form(M) if M else ([], 0)
    return AbelianInvariants(ngens - rank, tuple(d for d in factors if d > 1))


def abelianization(gamma: CrystalGroup) -> AbelianInvariants:
    pres = presentation(gamma)
    return abelian_invariants_of_matrix(pres.exponent_matrix(), pres.ngens)


def irregularity(gamma: CrystalGroup) -> int:
    r = abelianization(gamma).free_rank
    if r % 2:
        raise ConstructionError(f"odd first Betti number {r}")
    return r // 2


def is_torsion_free(gamma: CrystalGroup) -> bool:
    """No nontrivial element of Gamma has a fixed point in R^6.

    A lift of g fixes a point iff every block with sign +1 carries a lattice
    translation, i.e. g acts trivially on that factor.
    """
    for x in gamma.source_subspace.elements():
        if not x:
            continue
        g = AffineGen.from_element(ElementG0.from_bits(x))
        if all(
            sign == -1 or (g.translation[2 * k] == 0 and g.translation[2 * k + 1] == 0)
            for k, sign in enumerate(g.block_signs)
        ):
            return False
    return True
