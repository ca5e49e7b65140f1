"""Elements of the sign group on E1 x E2 x E3 and their fixed points.

An element is six additive bits ``(eps0, eta1, eps1, eta0, eps2, zeta0)``;
``eps3 = eps1 + eps2`` is derived.  On curve ``k`` the element acts through
three bits ``(a, b, c)``: the signs of ``x0``, ``x1`` and ``x3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Set, Tuple

from .f2linalg import BitMatrix, BitVec

COORD_NAMES = ("eps0", "eta1", "eps1", "eta0", "eps2", "zeta0")


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class CurveSigns:
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if {self.a, self.b, self.c} - {0, 1}:
            raise ValueError("curve sign bits must be 0 or 1")

    @property
    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c)

    @property
    def weight(self) -> int:
        return self.a + self.b + self.c

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True, order=True)
class ElementG0:
    eps0: int = 0
    eta1: int = 0
    eps1: int = 0
    eta0: int = 0
    eps2: int = 0
    zeta0: int = 0

    def __post_init__(self) -> None:
        if set(self.coords()) - {0, 1}:
            raise ValueError("coordinates are additive bits")

    @property
    def eps3(self) -> int:
        return self.eps1 ^ self.eps2

    def coords(self) -> Tuple[int, ...]:
        return (self.eps0, self.eta1, self.eps1, self.eta0, self.eps2, self.zeta0)

    def to_bitvec(self) -> BitVec:
        return BitVec.from_coords(self.coords())

    @classmethod
    def from_bits(cls, bits: int) -> "ElementG0":
        return cls(*BitVec(bits, 6).coords())

    @property
    def bits(self) -> int:
        return self.to_bitvec().bits

    def table_column(self) -> Tuple[int, ...]:
        """The seven entries in the order of the fixed-point table rows."""
        return self.coords() + (self.eps3,)


IDENTITY = ElementG0()

# the embedding V6 -> V9, images of the six basis vectors
_V9_IMAGES = (
    "100000000",
    "010010010",
    "001000001",
    "000100000",
    "000001001",
    "000000100",
)
V6_TO_V9 = BitMatrix.from_columns([BitVec.from_str(s) for s in _V9_IMAGES])


def to_v9(e: ElementG0) -> Tuple[CurveSigns, CurveSigns, CurveSigns]:
    c = V6_TO_V9(e.to_bitvec()).coords()
    return (CurveSigns(*c[0:3]), CurveSigns(*c[3:6]), CurveSigns(*c[6:9]))


def curve_fixes_points(s: CurveSigns) -> bool:
    # all three signs flipped, or exactly one; identity trivially
    return s.is_zero or s.weight % 2 == 1


def has_fixed_points_on_torus(e: ElementG0) -> bool:
    return all(curve_fixes_points(s) for s in to_v9(e))


def fixed_locus_dimension(e: ElementG0) -> int:
    if not has_fixed_points_on_torus(e):
        raise PreconditionError(f"{e.coords()} acts without fixed points")
    return 3 - sum(not s.is_zero for s in to_v9(e))


# Table columns 1..17, rows eps0, eta1, eps1, eta0, eps2, zeta0 (eps3 derived)
_TABLE_COLUMNS = (
    (0, 0, 0, 0, 0, 1),
    (0, 0, 0, 1, 0, 0),
    (1, 0, 0, 0, 0, 0),
    (0, 0, 0, 1, 0, 1),
    (1, 0, 0, 0, 0, 1),
    (1, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 0),
    (0, 0, 1, 0, 1, 0),
    (1, 0, 0, 1, 0, 1),
    (1, 0, 0, 0, 1, 0),
    (0, 0, 1, 1, 0, 0),
    (0, 0, 1, 0, 1, 1),
    (0, 1, 0, 0, 0, 0),
    (0, 1, 0, 1, 1, 1),
    (1, 1, 1, 0, 0, 1),
    (1, 1, 1, 1, 1, 0),
)
_TABLE_EPS3 = (0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0)

# Column 10 has isolated fixed points that meet a Burniat hypersurface only for
# special curves; it is therefore allowed in a free group.  Its exclusion from
# the forbidden set is external input, not derived here.
ELEMENT_10 = ElementG0(*_TABLE_COLUMNS[9])

# The forbidden vectors exactly as listed in the search script.
_SCRIPT_U = (
    (0, 0, 0, 0, 0, 1), (0, 0, 0, 1, 0, 0), (1, 0, 0, 0, 0, 0),
    (1, 0, 0, 0, 1, 0), (0, 1, 0, 0, 0, 0), (0, 1, 0, 1, 1, 1),
    (0, 0, 1, 1, 0, 0), (0, 0, 1, 0, 1, 1), (1, 1, 1, 0, 0, 1),
    (1, 1, 1, 1, 1, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 1, 0, 1),
    (0, 0, 1, 0, 0, 0), (1, 0, 0, 0, 0, 1), (0, 0, 1, 0, 1, 0),
    (1, 0, 0, 1, 0, 0),
)


def all_elements() -> List[ElementG0]:
    return [ElementG0.from_bits(x) for x in range(64)]


def table_fixel() -> List[ElementG0]:
    """The 17 non-identity elements with fixed points, in table column order."""
    out = []
    for col, eps3 in zip(_TABLE_COLUMNS, _TABLE_EPS3):
        e = ElementG0(*col)
        if e.eps3 != eps3:
            raise AssertionError(f"table column {col} violates eps1+eps2+eps3=0")
        if not has_fixed_points_on_torus(e):
            raise AssertionError(f"table column {col} has no fixed points")
        out.append(e)
    return out


def script_forbidden_set() -> Set[BitVec]:
    return {BitVec.from_coords(v) for v in _SCRIPT_U}


def forbidden_set() -> Set[BitVec]:
    """Elements whose presence in G rules out a free action (element 10 excepted)."""
    derived = {
        e.to_bitvec()
        for e in all_elements()
        if e != IDENTITY and has_fixed_points_on_torus(e)
    }
    derived.discard(ELEMENT_10.to_bitvec())
    return derived


def fixel_rows() -> List[dict]:
    rows = []
    for i, e in enumerate(table_fixel(), start=1):
        row = dict(zip(COORD_NAMES, e.coords()))
        row["eps3"] = e.eps3
        rows.append({"column": i, **row, "fixed_dim": fixed_locus_dimension(e)})
    return rows


def fixel_tsv() -> str:
    """Fixed-point table transposed: one line per table row, one column per element."""
    elems = table_fixel()
    names = ("eps0", "eta1", "eps1", "eta0", "eps2", "zeta0", "eps3")
    lines = ["\t".join(["row"] + [str(i) for i in range(1, len(elems) + 1)])]
    for k, name in enumerate(names):
        lines.append("\t".join([name] + [str(e.table_column()[k]) for e in elems]))
    lines.append("\t".join(["fixed_dim"] + [str(fixed_locus_dimension(e)) for e in elems]))
    return "\n".join(lines) + "\n"
