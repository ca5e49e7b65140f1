"""Linear algebra over F_2 on packed int bitsets.

Coordinates are stored most-significant first: coordinate ``i`` of a vector in
F_2^n lives at bit ``n - 1 - i``.  With this layout the string form of a
vector is just its binary expansion, and integer order equals lexicographic
order of bitstrings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

MAX_DIM = 16


class DimensionMismatch(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


class ClosureViolation(ValueError):
    """An orbit computation left the supplied item set."""

    def __init__(self, item: "Subspace", generator_index: int) -> None:
        self.item = item
        self.generator_index = generator_index
        super().__init__(
            f"image of {item.to_json()} under generator {generator_index} "
            "is not among the items"
        )


def _check_dim(dim: int) -> None:
    if not 0 <= dim <= MAX_DIM:
        raise ValueError(f"dimension {dim} outside 0..{MAX_DIM}")


@dataclass(frozen=True, order=True)
class BitVec:
    bits: int
    dim: int

    def __post_init__(self) -> None:
        _check_dim(self.dim)
        if self.bits < 0 or self.bits >> self.dim:
            raise ValueError(f"bits {self.bits:#b} do not fit in dimension {self.dim}")

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "BitVec":
        bits = 0
        for c in coords:
            bits = (bits << 1) | (int(c) & 1)
        return cls(bits, len(coords))

    @classmethod
    def from_str(cls, s: str) -> "BitVec":
        return cls(int(s, 2) if s else 0, len(s))

    def coords(self) -> Tuple[int, ...]:
        return tuple((self.bits >> (self.dim - 1 - i)) & 1 for i in range(self.dim))

    def __getitem__(self, i: int) -> int:
        return (self.bits >> (self.dim - 1 - i)) & 1

    def __add__(self, other: "BitVec") -> "BitVec":
        if other.dim != self.dim:
            raise DimensionMismatch(f"{self.dim} != {other.dim}")
        return BitVec(self.bits ^ other.bits, self.dim)

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def __str__(self) -> str:
        return format(self.bits, f"0{self.dim}b") if self.dim else ""


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def rref_rows(rows: Iterable[int]) -> Tuple[int, ...]:
    """Reduced row echelon basis of the span of ``rows`` (ints, same width).

    Pivots are leading (leftmost) coordinates, so the result is sorted in
    strictly decreasing integer order and each pivot bit appears in exactly
    one row.
    """
    basis: List[int] = []
    for r in rows:
        for b in basis:
            if r & _top_bit(b):
                r ^= b
        if r:
            top = _top_bit(r)
            basis = [b ^ r if b & top else b for b in basis]
            basis.append(r)
    basis.sort(reverse=True)
    return tuple(basis)


def _top_bit(x: int) -> int:
    return 1 << (x.bit_length() - 1)


@dataclass(frozen=True, order=True)
class Subspace:
    """A subspace of F_2^n held by its canonical RREF basis."""

    rows: Tuple[int, ...]
    ambient_dim: int

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> List[BitVec]:
        return [BitVec(r, self.ambient_dim) for r in self.rows]

    def elements(self) -> List[int]:
        """All 2**dim elements as ints, in increasing order."""
        out = [0]
        for r in self.rows:
            out += [x ^ r for x in out]
        return sorted(out)

    def __contains__(self, v: object) -> bool:
        x = v.bits if isinstance(v, BitVec) else int(v)  # type: ignore[arg-type]
        for b in self.rows:
            if x & _top_bit(b):
                x ^= b
        return x == 0

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(r in other for r in self.rows)

    def to_json(self) -> List[str]:
        return sorted(str(b) for b in self.basis)

    @classmethod
    def from_json(cls, data: Sequence[str], ambient_dim: int | None = None) -> "Subspace":
        vecs = [BitVec.from_str(s) for s in data]
        if ambient_dim is not None and any(v.dim != ambient_dim for v in vecs):
            raise DimensionMismatch("serialized basis has wrong width")
        if not vecs:
            return Subspace((), ambient_dim or 0)
        return rref(vecs)


def rref(vectors: Sequence[BitVec], ambient_dim: int | None = None) -> Subspace:
    """Canonical subspace spanned by ``vectors``."""
    dims = {v.dim for v in vectors}
    if ambient_dim is not None:
        dims.add(ambient_dim)
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
    if not dims:
        raise ValueError("ambient dimension unknown for an empty generating set")
    n = dims.pop()
    return Subspace(rref_rows(v.bits for v in vectors), n)


def span(rows: Iterable[int], ambient_dim: int) -> Subspace:
    return Subspace(rref_rows(rows), ambient_dim)


def gaussian_binomial(n: int, k: int, q: int = 2) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(ambient_dim: int, dim: int) -> List[Subspace]:
    """Every ``dim``-dimensional subspace of F_2^ambient_dim, sorted by canonical basis."""
    _check_dim(ambient_dim)
    if not 0 <= dim <= ambient_dim:
        raise ValueError(f"need 0 <= dim <= ambient_dim, got {dim}, {ambient_dim}")
    n = ambient_dim
    out: List[Subspace] = []
    for pivots in itertools.combinations(range(n), dim):
        pivot_set = set(pivots)
        # free coordinates of row i: non-pivot columns right of its pivot
        free = [[c for c in range(p + 1, n) if c not in pivot_set] for p in pivots]
        total_free = sum(len(f) for f in free)
        for fill in range(1 << total_free):
            rows = []
            shift = 0
            for p, cols in zip(pivots, free):
                r = 1 << (n - 1 - p)
                for j, c in enumerate(cols):
                    if (fill >> (shift + j)) & 1:
                        r |= 1 << (n - 1 - c)
                shift += len(cols)
                rows.append(r)
            out.append(Subspace(tuple(rows), n))
    out.sort()
    return out


@dataclass(frozen=True)
class BitMatrix:
    """Matrix over F_2; row ``i`` is packed like a vector of length ``ncols``.

    Column ``j`` is the image of the ``j``-th basis vector and the action is
    matrix-times-column-vector.
    """

    rows: Tuple[int, ...]
    ncols: int

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        ncols = len(entries[0]) if entries else 0
        if any(len(r) != ncols for r in entries):
            raise DimensionMismatch("ragged matrix")
        return cls(tuple(BitVec.from_coords(r).bits for r in entries), ncols)

    @classmethod
    def from_columns(cls, images: Sequence[BitVec]) -> "BitMatrix":
        """Matrix whose j-th column is ``images[j]``."""
        nrows = {v.dim for v in images}
        if len(nrows) != 1:
            raise DimensionMismatch("column images of unequal length")
        m = nrows.pop()
        n = len(images)
        rows = []
        for i in range(m):
            r = 0
            for j, v in enumerate(images):
                if v[i]:
                    r |= 1 << (n - 1 - j)
            rows.append(r)
        return cls(tuple(rows), n)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << (n - 1 - i) for i in range(n)), n)

    def to_lists(self) -> List[List[int]]:
        return [list(BitVec(r, self.ncols).coords()) for r in self.rows]

    def apply(self, x: int) -> int:
        m = self.nrows
        out = 0
        for i, r in enumerate(self.rows):
            if _parity(r & x):
                out |= 1 << (m - 1 - i)
        return out

    def __call__(self, v: BitVec) -> BitVec:
        if v.dim != self.ncols:
            raise DimensionMismatch(f"vector of dim {v.dim} for matrix with {self.ncols} columns")
        return BitVec(self.apply(v.bits), self.nrows)

    def column(self, j: int) -> int:
        return self.apply(1 << (self.ncols - 1 - j))

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch("inner dimensions differ")
        cols = [BitVec(self.apply(other.column(j)), self.nrows) for j in range(other.ncols)]
        return BitMatrix.from_columns(cols)

    def rank(self) -> int:
        return len(rref_rows(self.rows))

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.ncols


def image(M: BitMatrix, S: Subspace) -> Subspace:
    if M.nrows != M.ncols or M.ncols != S.ambient_dim:
        raise DimensionMismatch("matrix shape does not match subspace")
    if not M.is_invertible():
        raise SingularMatrix("matrix is singular over F_2")
    return Subspace(rref_rows(M.apply(r) for r in S.rows), S.ambient_dim)


def partition_orbits(items: Sequence[Subspace], gens: Sequence[BitMatrix]) -> List[List[Subspace]]:
    """Split ``items`` into orbits under the group generated by ``gens``.

    Orbits come back sorted by their minimal member, which is also the first
    element of each (sorted) orbit.
    """
    for k, g in enumerate(gens):
        if not g.is_invertible():
            raise SingularMatrix(f"generator {k} is singular")
    item_set = set(items)
    seen: Dict[Subspace, int] = {}
    orbits: List[List[Subspace]] = []
    for start in sorted(item_set):
        if start in seen:
            continue
        orbit = [start]
        seen[start] = len(orbits)
        frontier = [start]
        while frontier:
            nxt = []
            for s in frontier:
                for k, g in enumerate(gens):
                    t = image(g, s)
                    if t not in item_set:
                        raise ClosureViolation(s, k)
                    if t not in seen:
                        seen[t] = len(orbits)
                        orbit.append(t)
                        nxt.append(t)
            frontier = nxt
        orbits.append(sorted(orbit))
    return orbits
