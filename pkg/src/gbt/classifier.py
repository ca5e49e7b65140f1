"""Free (Z/2)^3 subgroups of G0, their Delta-orbits and family dimensions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Sequence, Tuple

from .f2linalg import BitMatrix, BitVec, Subspace, enumerate_subspaces, partition_orbits, span
from .fixedpoints import ELEMENT_10, V6_TO_V9, forbidden_set

ETA1 = 1 << 4  # coordinate 1 of (eps0, eta1, eps1, eta0, eps2, zeta0)
EPS1 = 1 << 3


class TranscriptionError(ValueError):
    pass


def _hom(images: Sequence[str]) -> BitMatrix:
    # the script's Transpose(Matrix([f(x): x in Basis(V6)]))
    return BitMatrix.from_columns([BitVec.from_str(s) for s in images])


# Delta generators, images of the standard basis as in the search script
L1 = _hom(["000100", "010000", "000010", "100000", "001000", "000001"])
L2 = _hom(["000001", "010000", "001000", "000100", "001010", "100000"])
H1 = _hom(["100000", "111110", "001000", "000100", "000010", "000001"])
H2 = _hom(["100000", "111001", "001000", "000100", "000010", "000001"])
H3 = _hom(["100000", "010111", "001000", "000100", "000010", "000001"])
DELTA_GENERATORS: Tuple[BitMatrix, ...] = (L1, L2, H1, H2, H3)

# Table representatives: three generators each, nine bits in curve blocks
# (eps0 eta1 eps1 | eta0 eta1 eps2 | zeta0 eta1 eps3)
TABLE_GROUPS: Dict[str, Tuple[str, str, str]] = {
    "S1": ("100100100", "010110110", "000001101"),
    "S2": ("100001101", "001000101", "000101001"),
    "S3": ("100001101", "010010110", "001101100"),
    "S4": ("101001100", "010010110", "000101101"),
    "S5": ("101000101", "010010110", "000001101"),
    "S6": ("010110110", "001100101", "000001101"),
    "S7": ("100001101", "010010110", "001101000"),
    "S8": ("100001101", "010110110", "001100101"),
    "S9": ("100101101", "010010110", "001101000"),
    "S10": ("101100101", "010110110", "000001101"),
    "S11": ("100101001", "010110010", "001101100"),
    "S12": ("101000101", "010010110", "000101101"),
    "S13": ("100101101", "010110110", "001101000"),
    "S14": ("101000001", "011011010", "000101001"),
    "S15": ("101000101", "011011010", "000101101"),
    "S16": ("101000101", "011011110", "000101101"),
}
TABLE_LABELS: Tuple[str, ...] = tuple(TABLE_GROUPS)


@dataclass(frozen=True)
class FreeGroupRecord:
    subspace: Subspace
    contains_element10: bool
    orbit_id: int
    family_dim: int


@dataclass(frozen=True)
class Orbit:
    id: int
    members: Tuple[Subspace, ...]

    @property
    def representative(self) -> Subspace:
        return self.members[0]

    @property
    def size(self) -> int:
        return len(self.members)


def family_dimension(G: Subspace) -> int:
    """4 if G lies in G1 (eta1 = 0) or G1' (eps1 = 0), else 3.

    The test singles out curve 1, so it is not constant on Delta-orbits; use
    :func:`orbit_family_dimension` for the orbit-level value.
    """
    in_g1 = all(not r & ETA1 for r in G.rows)
    in_g1_prime = all(not r & EPS1 for r in G.rows)
    return 4 if in_g1 or in_g1_prime else 3


def orbit_family_dimension(orbit: Orbit) -> int:
    return max(family_dimension(s) for s in orbit.members)


def contained_in(G: Subspace) -> List[str]:
    out = []
    if all(not r & ETA1 for r in G.rows):
        out.append("G1")
    if all(not r & EPS1 for r in G.rows):
        out.append("G1'")
    return out


@lru_cache(maxsize=None)
def _forbidden_bits() -> frozenset:
    return frozenset(v.bits for v in forbidden_set())


def is_free(S: Subspace) -> bool:
    bad = _forbidden_bits()
    return not any(x in bad for x in S.elements())


@lru_cache(maxsize=None)
def free_subspaces() -> Tuple[Subspace, ...]:
    return tuple(S for S in enumerate_subspaces(6, 3) if is_free(S))


@lru_cache(maxsize=None)
def delta_orbits() -> Tuple[Orbit, ...]:
    orbits = partition_orbits(free_subspaces(), DELTA_GENERATORS)
    return tuple(Orbit(i, tuple(o)) for i, o in enumerate(orbits))


def free_subgroups() -> List[FreeGroupRecord]:
    orbit_of = {s: o.id for o in delta_orbits() for s in o.members}
    e10 = ELEMENT_10.bits
    dims = {o.id: orbit_family_dimension(o) for o in delta_orbits()}
    return [
        FreeGroupRecord(S, e10 in S, orbit_of[S], dims[orbit_of[S]])
        for S in free_subspaces()
    ]


def pullback_v9(row: str) -> BitVec:
    """Inverse of the V6 -> V9 embedding on a 9-bit table row."""
    v = BitVec.from_str(row)
    if v.dim != 9:
        raise TranscriptionError(f"row {row!r} is not 9 bits")
    c = v.coords()
    if not c[1] == c[4] == c[7]:
        raise TranscriptionError(f"row {row}: eta1 differs between curve blocks")
    if c[8] != c[2] ^ c[5]:
        raise TranscriptionError(f"row {row}: eps3 != eps1 + eps2")
    w = BitVec.from_coords((c[0], c[1], c[2], c[3], c[5], c[6]))
    assert V6_TO_V9(w) == v
    return w


def table_subspace(label: str) -> Subspace:
    return subspace_from_rows(TABLE_GROUPS[label])


def subspace_from_rows(rows: Sequence[str]) -> Subspace:
    S = span((pullback_v9(r).bits for r in rows), 6)
    if S.dim != 3:
        raise TranscriptionError(f"rows {list(rows)} span a {S.dim}-dimensional space")
    return S


def match_table_groups(
    rows: Mapping[str, Sequence[str]] | None = None,
) -> Dict[str, int]:
    """Attach table labels to orbit ids; every orbit must be hit exactly once."""
    if rows is None:
        return dict(_default_matching())
    return _match(rows)


@lru_cache(maxsize=None)
def _default_matching() -> Tuple[Tuple[str, int], ...]:
    return tuple(_match(TABLE_GROUPS).items())


def _match(rows: Mapping[str, Sequence[str]]) -> Dict[str, int]:
    orbit_of = {s: o.id for o in delta_orbits() for s in o.members}
    out: Dict[str, int] = {}
    owner: Dict[int, str] = {}
    for label, gens in rows.items():
        S = subspace_from_rows(gens)
        if S not in orbit_of:
            raise TranscriptionError(f"{label} is not one of the free subgroups")
        oid = orbit_of[S]
        if oid in owner:
            raise TranscriptionError(f"{label} and {owner[oid]} lie in the same orbit {oid}")
        owner[oid] = label
        out[label] = oid
    return out


def label_of_orbit() -> Dict[int, str]:
    return {oid: label for label, oid in match_table_groups().items()}


def orbit_of_label(label: str) -> Orbit:
    try:
        return delta_orbits()[match_table_groups()[label]]
    except KeyError:
        raise KeyError(f"unknown label {label!r}; valid labels: {', '.join(TABLE_LABELS)}") from None


def group_by_label(label: str) -> Subspace:
    """The table representative for ``label`` (not the orbit's canonical member)."""
    if label not in TABLE_GROUPS:
        raise KeyError(f"unknown label {label!r}; valid labels: {', '.join(TABLE_LABELS)}")
    return table_subspace(label)


def classification_summary(orbit_list: Sequence[Orbit] | None = None) -> dict:
    """Counts, orbit table and label matching; ``orbit_list`` may come from a cache."""
    orbit_list = delta_orbits() if orbit_list is None else orbit_list
    orbit_of = {s: o.id for o in orbit_list for s in o.members}
    labels = {orbit_of[table_subspace(l)]: l for l in TABLE_LABELS}
    e10 = ELEMENT_10.bits
    orbits = []
    for o in orbit_list:
        orbits.append({
            "id": o.id,
            "label": labels.get(o.id),
            "size": o.size,
            "representative": o.representative.to_json(),
            "table_group": table_subspace(labels[o.id]).to_json() if o.id in labels else None,
            "family_dim": orbit_family_dimension(o),
            "contains_element10": e10 in o.representative,
            "element10_members": sum(e10 in s for s in o.members),
        })
    return {
        "subspace_count": len(enumerate_subspaces(6, 3)),
        "free_count": sum(o.size for o in orbit_list),
        "orbit_count": len(orbit_list),
        "orbits": orbits,
    }
