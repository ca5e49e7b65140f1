"""Low-index normal subgroup counts and affine isomorphism witnesses.

Normal subgroups of index k are counted through quotients: each normal N with
Gamma/N isomorphic to Q accounts for exactly |Aut(Q)| epimorphisms onto Q.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .crystal import (
    AbelianInvariants,
    AffineGen,
    AffineMap,
    CrystalGroup,
    Presentation,
    abelianization,
    presentation,
)
from .fixedpoints import ElementG0


class FiniteTarget:
    """A small finite group given by its multiplication table; element 0 is the identity."""

    def __init__(self, name: str, table: Sequence[Sequence[int]]) -> None:
        self.name = name
        self.table = tuple(tuple(r) for r in table)
        self.order = len(self.table)
        self._check_axioms()
        self.inverse = tuple(
            next(b for b in range(self.order) if self.table[a][b] == 0) for a in range(self.order)
        )
        self.is_abelian = all(
            self.table[a][b] == self.table[b][a] for a in range(self.order) for b in range(self.order)
        )
        self.aut_order = _automorphism_count(self)

    @classmethod
    def from_elements(cls, name: str, elements: Sequence, mul: Callable, identity) -> "FiniteTarget":
        elems = [identity] + [e for e in elements if e != identity]
        index = {e: i for i, e in enumerate(elems)}
        table = [[index[mul(a, b)] for b in elems] for a in elems]
        return cls(name, table)

    def _check_axioms(self) -> None:
        n = self.order
        rng = range(n)
        if any(sorted(r) != list(rng) for r in self.table):
            raise ValueError(f"{self.name}: table rows are not permutations")
        if any(self.table[0][a] != a or self.table[a][0] != a for a in rng):
            raise ValueError(f"{self.name}: element 0 is not the identity")
        T = self.table
        for a in rng:
            for b in rng:
                ab = T[a][b]
                for c in rng:
                    if T[ab][c] != T[a][T[b][c]]:
                        raise ValueError(f"{self.name}: not associative")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inverse[a], -e
        out = 0
        for _ in range(e):
            out = self.table[out][a]
        return out

    def closure(self, elems: Iterable[int]) -> int:
        """Bitmask of the subgroup generated by ``elems``."""
        gens = [g for g in set(elems) if g]
        mask = 1
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if not mask >> y & 1:
                        mask |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return mask

    def subgroups(self) -> List[int]:
        """All subgroups as bitmasks (every group here is generated by 3 elements)."""
        found = set()
        for k in range(0, 4):
            for gens in itertools.combinations(range(self.order), k):
                found.add(self.closure(gens))
        return sorted(found, key=lambda m: (bin(m).count("1"), m))

    def __repr__(self) -> str:
        return f"FiniteTarget({self.name}, order={self.order})"


def _automorphism_count(Q: FiniteTarget) -> int:
    full = (1 << Q.order) - 1
    gens: List[int] = []
    while Q.closure(gens) != full:
        gens.append(next(x for x in range(Q.order) if not Q.closure(gens) >> x & 1))
    # express every element as a word in gens
    words: Dict[int, List[int]] = {0: []}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for i, g in enumerate(gens):
                y = Q.table[x][g]
                if y not in words:
                    words[y] = words[x] + [i]
                    nxt.append(y)
        frontier = nxt
    count = 0
    for imgs in itertools.product(range(Q.order), repeat=len(gens)):
        phi = [0] * Q.order
        for x, w in words.items():
            v = 0
            for i in w:
                v = Q.table[v][imgs[i]]
            phi[x] = v
        if len(set(phi)) != Q.order:
            continue
        if all(phi[Q.table[a][b]] == Q.table[phi[a]][phi[b]] for a in range(Q.order) for b in range(Q.order)):
            count += 1
    return count


def _cyclic_product(name: str, mods: Sequence[int]) -> FiniteTarget:
    elems = list(itertools.product(*[range(m) for m in mods]))
    return FiniteTarget.from_elements(
        name, elems, lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, mods)), elems[0]
    )


def _perm_group(name: str, gens: Sequence[Tuple[int, ...]]) -> FiniteTarget:
    ident = tuple(range(len(gens[0])))
    compose = lambda p, q: tuple(p[q[i]] for i in range(len(q)))  # noqa: E731
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return FiniteTarget.from_elements(name, sorted(elems), compose, ident)


def _quaternion() -> FiniteTarget:
    # units +-1, +-i, +-j, +-k as (sign, axis) with axis 0 = 1
    mult = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def mul(a, b):
        s, ax = mult[(a[1], b[1])]
        return (a[0] * b[0] * s, ax)

    elems = [(s, ax) for s in (1, -1) for ax in range(4)]
    return FiniteTarget.from_elements("Q8", elems, mul, (1, 0))


@lru_cache(maxsize=None)
def targets_of_order(n: int) -> Tuple[FiniteTarget, ...]:
    """Isomorphism classes of groups of order n, for 2 <= n <= 8."""
    if n in (2, 3, 5, 7):
        return (_cyclic_product(f"C{n}", [n]),)
    if n == 4:
        return (_cyclic_product("C4", [4]), _cyclic_product("C2xC2", [2, 2]))
    if n == 6:
        return (_cyclic_product("C6", [6]), _perm_group("S3", [(1, 0, 2), (1, 2, 0)]))
    if n == 8:
        return (
            _cyclic_product("C8", [8]),
            _cyclic_product("C2xC4", [2, 4]),
            _cyclic_product("C2xC2xC2", [2, 2, 2]),
            _perm_group("D4", [(1, 2, 3, 0), (0, 3, 2, 1)]),
            _quaternion(),
        )
    raise ValueError(f"no target table for order {n}")


def target(name: str) -> FiniteTarget:
    for n in range(2, 9):
        for Q in targets_of_order(n):
            if Q.name == name:
                return Q
    raise KeyError(name)


def hom_count_abelian(H: AbelianInvariants, Q: FiniteTarget, subgroup_mask: int | None = None) -> int:
    """|Hom(H, K)| for an abelian subgroup K of Q (all of Q by default)."""
    elems = [x for x in range(Q.order) if subgroup_mask is None or subgroup_mask >> x & 1]
    total = len(elems) ** H.free_rank
    for d in H.torsion:
        total *= sum(1 for x in elems if Q.power(x, d) == 0)
    return total


def _epi_count_abelian(H: AbelianInvariants, Q: FiniteTarget) -> int:
    # Epi(K) = Hom(K) - sum of Epi(K') over proper subgroups K' < K
    subs = Q.subgroups()
    epi: Dict[int, int] = {}
    for K in subs:
        proper = sum(epi[L] for L in subs if L != K and L & K == L)
        epi[K] = hom_count_abelian(H, Q, K) - proper
    return epi[(1 << Q.order) - 1]


def _relator_schedule(pres: Presentation, order: Sequence[int]) -> List[List[Tuple[Tuple[int, int], ...]]]:
    pos = {g: i for i, g in enumerate(order)}
    sched: List[List[Tuple[Tuple[int, int], ...]]] = [[] for _ in order]
    for w in pres.relators:
        if not w:
            continue
        sched[max(pos[g] for g, _ in w)].append(w)
    return sched


def iter_homs(pres: Presentation, Q: FiniteTarget, order: Sequence[int] | None = None):
    """Yield every homomorphism as a tuple of generator images, by backtracking."""
    if order is None:
        order = list(range(pres.ngens))
    sched = _relator_schedule(pres, order)
    images = [0] * pres.ngens
    T = Q.table

    def holds(w) -> bool:
        v = 0
        for g, e in w:
            v = T[v][Q.power(images[g], e)]
        return v == 0

    def rec(depth: int):
        if depth == len(order):
            yield tuple(images)
            return
        g = order[depth]
        for x in range(Q.order):
            images[g] = x
            if all(holds(w) for w in sched[depth]):
                yield from rec(depth + 1)
        images[g] = 0

    yield from rec(0)


def _epi_count_search(pres: Presentation, Q: FiniteTarget) -> int:
    # torsion generators first: their conjugation relators prune the lattice images
    order = list(range(pres.ngens))
    if pres.ngens == 9:
        order = [6, 7, 8, 0, 1, 2, 3, 4, 5]
    full = (1 << Q.order) - 1
    cache: Dict[frozenset, bool] = {}
    count = 0
    for imgs in iter_homs(pres, Q, order):
        key = frozenset(imgs)
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = Q.closure(key) == full
        count += hit
    return count


def count_epimorphisms(
    pres: Presentation, Q: FiniteTarget, h1: AbelianInvariants | None = None
) -> int:
    """|Epi(Gamma, Q)|; abelian targets go through H_1, the rest through the presentation."""
    if Q.is_abelian:
        if h1 is None:
            from .crystal import abelian_invariants_of_matrix

            h1 = abelian_invariants_of_matrix(pres.exponent_matrix(), pres.ngens)
        return _epi_count_abelian(h1, Q)
    return _epi_count_search(pres, Q)


@dataclass(frozen=True)
class InvariantVector:
    counts: Tuple[Tuple[int, int], ...]  # (index, number of normal subgroups)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.counts)

    def __getitem__(self, k: int) -> int:
        return self.as_dict()[k]


def normal_subgroup_counts(
    pres: Presentation, max_index: int = 6, h1: AbelianInvariants | None = None
) -> InvariantVector:
    if max_index > 8:
        raise ValueError("targets are tabulated up to order 8")
    counts = []
    for k in range(2, max_index + 1):
        total = 0
        for Q in targets_of_order(k):
            e = count_epimorphisms(pres, Q, h1)
            if e % Q.aut_order:
                raise ArithmeticError(f"|Epi| = {e} onto {Q.name} not divisible by |Aut| = {Q.aut_order}")
            total += e // Q.aut_order
        counts.append((k, total))
    return InvariantVector(tuple(counts))


def crystal_invariants(gamma: CrystalGroup, max_index: int = 6) -> Tuple[AbelianInvariants, InvariantVector]:
    h1 = abelianization(gamma)
    return h1, normal_subgroup_counts(presentation(gamma), max_index, h1)


def iter_epimorphisms(pres: Presentation, Q: FiniteTarget):
    order = list(range(pres.ngens))
    if pres.ngens == 9:
        order = [6, 7, 8, 0, 1, 2, 3, 4, 5]
    full = (1 << Q.order) - 1
    for imgs in iter_homs(pres, Q, order):
        if Q.closure(imgs) == full:
            yield imgs


def kernel_abelianization(pres: Presentation, Q: FiniteTarget, images: Sequence[int]) -> AbelianInvariants:
    """H_1 of the kernel of a surjection onto Q (abelianized Reidemeister-Schreier).

    Cosets are the elements of Q; a BFS spanning tree of the Schreier graph
    kills one generator per non-root coset.
    """
    n, m = Q.order, pres.ngens
    tree = set()
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for c in frontier:
            for x in range(m):
                d = Q.table[c][images[x]]
                if d not in seen:
                    seen.add(d)
                    tree.add((c, x))
                    nxt.append(d)
        frontier = nxt
    cols = {}
    for c in range(n):
        for x in range(m):
            if (c, x) not in tree:
                cols[(c, x)] = len(cols)
    inv = [Q.inverse[images[x]] for x in range(m)]
    rows = []
    for w in pres.relators:
        for start in range(n):
            row = [0] * len(cols)
            c = start
            for x, e in w:
                for _ in range(abs(e)):
                    if e > 0:
                        if (c, x) in cols:
                            row[cols[(c, x)]] += 1
                        c = Q.table[c][images[x]]
                    else:
                        c = Q.table[c][inv[x]]
                        if (c, x) in cols:
                            row[cols[(c, x)]] -= 1
            if c != start:
                raise ArithmeticError("relator does not map to the identity")
            if any(row):
                rows.append(row)
    from .crystal import abelian_invariants_of_matrix

    return abelian_invariants_of_matrix(rows, len(cols))


def kernel_profile(pres: Presentation, max_index: int = 4) -> Tuple[Tuple[int, Tuple[Tuple[str, int], ...]], ...]:
    """Per index, the multiset of H_1 of the normal subgroups of that index."""
    out = []
    for k in range(2, max_index + 1):
        tally: Dict[str, int] = {}
        for Q in targets_of_order(k):
            for imgs in iter_epimorphisms(pres, Q):
                key = f"{Q.name}:{kernel_abelianization(pres, Q, imgs)}"
                tally[key] = tally.get(key, 0) + 1
            for key in [t for t in tally if t.startswith(Q.name + ":")]:
                if tally[key] % Q.aut_order:
                    raise ArithmeticError(f"kernel class {key} not a union of Aut-orbits")
                tally[key] //= Q.aut_order
        out.append((k, tuple(sorted(tally.items()))))
    return tuple(out)


ESCALATION_STAGES = ("counts", "counts_order8", "kernel_h1")

# pairs of table labels whose groups are isomorphic (explicit witnesses exist)
KNOWN_ISOMORPHIC: Tuple[Tuple[str, str], ...] = (("S11", "S12"), ("S14", "S15"))


@dataclass
class Distinction:
    """Partition of the input groups, refined stage by stage.

    ``stages`` records the partition after each stage; only classes that are
    still merged are passed on to the next (more expensive) invariant.
    """

    max_index: int
    classes: List[List[str]]
    data: Dict[str, Tuple[AbelianInvariants, InvariantVector]]
    stages: List[Tuple[str, List[List[str]]]]

    def merged(self) -> List[List[str]]:
        return [c for c in self.classes if len(c) > 1]

    def merged_at(self, stage: str) -> List[List[str]]:
        return [c for c in dict(self.stages)[stage] if len(c) > 1]

    def unexpected_mergers(self) -> List[Tuple[str, str]]:
        """Merged pairs at the final stage that are not known to be isomorphic."""
        known = {frozenset(p) for p in KNOWN_ISOMORPHIC}
        return [
            (a, b)
            for c in self.merged()
            for a, b in itertools.combinations(c, 2)
            if frozenset((a, b)) not in known
        ]


def _refine(classes: List[List[str]], key: Callable[[str], object]) -> List[List[str]]:
    out: List[List[str]] = []
    for c in classes:
        if len(c) == 1:
            out.append(c)
            continue
        buckets: Dict[object, List[str]] = {}
        for label in c:
            buckets.setdefault(key(label), []).append(label)
        out.extend(buckets.values())
    return out


def distinguish(
    groups: Mapping[str, CrystalGroup],
    max_index: int = 6,
    escalate: bool = True,
    kernel_index: int = 3,
    threads: int = 1,
) -> Distinction:
    labels = list(groups)
    pres = {label: presentation(g) for label, g in groups.items()}
    items = [groups[l] for l in labels]
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(threads) as ex:
            computed = list(ex.map(crystal_invariants, items, [max_index] * len(items)))
    else:
        computed = [crystal_invariants(g, max_index) for g in items]
    data = dict(zip(labels, computed))
    classes = _refine([labels], lambda l: data[l])
    stages = [("counts", classes)]
    if escalate:
        if max_index < 8:
            classes = _refine(
                classes, lambda l: normal_subgroup_counts(pres[l], 8, data[l][0])
            )
        stages.append(("counts_order8", classes))
        classes = _refine(classes, lambda l: kernel_profile(pres[l], kernel_index))
        stages.append(("kernel_h1", classes))
    order = {l: i for i, l in enumerate(labels)}
    sort = lambda cs: sorted((sorted(c, key=order.get) for c in cs), key=lambda c: order[c[0]])  # noqa: E731
    return Distinction(max_index, sort(classes), data, [(n, sort(c)) for n, c in stages])


# -- affine isomorphism witnesses -------------------------------------------


@dataclass(frozen=True)
class AffineWitness:
    linear: Tuple[Tuple[int, ...], ...]
    translation: Tuple[Fraction, ...]
    generator_map: Tuple[Tuple[int, Tuple[int, ...]], ...] = ()  # (G2 element bits, lattice correction)

    def as_affine(self) -> AffineMap:
        return AffineMap(self.linear, self.translation)

    def to_json(self) -> dict:
        return {
            "linear": [list(r) for r in self.linear],
            "translation": [str(x) for x in self.translation],
            "generator_map": [
                {"image_element": format(g, "06b"), "lattice_correction": list(v)}
                for g, v in self.generator_map
            ],
        }


def _det(M: Sequence[Sequence[int]]) -> Fraction:
    A = [[Fraction(x) for x in r] for r in M]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


def _coset_index(gamma: CrystalGroup) -> Dict[Tuple, List[Tuple[int, Tuple[Fraction, ...]]]]:
    out: Dict[Tuple, List[Tuple[int, Tuple[Fraction, ...]]]] = {}
    for x in gamma.source_subspace.elements():
        g = AffineGen.from_element(ElementG0.from_bits(x)).as_affine()
        out.setdefault(g.linear, []).append((x, g.translation))
    return out


def _membership(index, m: AffineMap) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """If ``m`` lies in the group, the G-element it lies over and its lattice part."""
    for x, t in index.get(m.linear, ()):
        diff = [a - b for a, b in zip(m.translation, t)]
        if all(d.denominator == 1 for d in diff):
            return x, tuple(int(d) for d in diff)
    return None


def _conjugates_into(w: AffineMap, gamma1: CrystalGroup, gamma2: CrystalGroup, index=None):
    index = _coset_index(gamma2) if index is None else index
    winv = w.inverse()
    images = []
    for gen in gamma1.affine_generators():
        hit = _membership(index, w @ gen @ winv)
        if hit is None:
            return None
        images.append(hit)
    return images


def verify_isomorphism_witness(w: AffineWitness, gamma1: CrystalGroup, gamma2: CrystalGroup) -> bool:
    """Exact check that conjugation by ``w`` carries gamma1 onto gamma2."""
    if abs(_det(w.linear)) != 1:
        return False
    m = w.as_affine()
    if _conjugates_into(m, gamma1, gamma2) is None:
        return False
    return _conjugates_into(m.inverse(), gamma2, gamma1) is not None


def _gl_f2(n: int):
    """Every invertible n x n matrix over F_2 as a tuple of packed rows, lazily.

    Each row is chosen outside the span of the previous ones, so nothing is
    materialized (GL(6, F_2) has about 2e10 elements).
    """
    from .f2linalg import rref_rows

    def rec(rows: Tuple[int, ...]):
        if len(rows) == n:
            yield rows
            return
        for r in range(1, 1 << n):
            if len(rref_rows(rows + (r,))) == len(rows) + 1:
                yield from rec(rows + (r,))

    yield from rec(())


def _lazy_product(factories: Sequence[Callable[[], Iterable]]):
    """itertools.product over freshly created iterators, without materializing them."""
    if not factories:
        yield ()
        return
    for x in factories[0]():
        for rest in _lazy_product(factories[1:]):
            yield (x,) + rest


def _lift_f2(rows: Sequence[int], n: int) -> List[List[int]]:
    """An integer unimodular matrix reducing to the given F_2 matrix.

    Row-reduce over F_2 while recording the operations, then replay their
    integer inverses in reverse order.
    """
    X = [[(r >> (n - 1 - j)) & 1 for j in range(n)] for r in rows]
    ops = []
    for c in range(n):
        p = next(r for r in range(c, n) if X[r][c])
        if p != c:
            X[c], X[p] = X[p], X[c]
            ops.append(("swap", c, p))
        for r in range(n):
            if r != c and X[r][c]:
                X[r] = [(a + b) % 2 for a, b in zip(X[r], X[c])]
                ops.append(("add", r, c))
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for op, i, j in reversed(ops):
        if op == "swap":
            M[i], M[j] = M[j], M[i]
        else:
            M[i] = [a - b for a, b in zip(M[i], M[j])]
    return M


def _characters(gamma: CrystalGroup) -> List[Tuple[int, ...]]:
    """Holonomy character of each curve, as its values on the G-basis."""
    return [tuple(g.coordinate_signs()[2 * k] for g in gamma.gens) for k in range(3)]


def _isotypic_classes(gamma: CrystalGroup) -> List[Tuple[int, ...]]:
    chars = _characters(gamma)
    classes: Dict[Tuple[int, ...], List[int]] = {}
    for k, c in enumerate(chars):
        classes.setdefault(c, []).append(k)
    return [tuple(v) for v in classes.values()]


def _half_bits(t: Sequence[Fraction]) -> int:
    bits = 0
    for x in t:
        bits = (bits << 1) | int((2 * x) % 2)
    return bits


def _sign_bits(signs: Sequence[int]) -> int:
    bits = 0
    for x in signs:
        bits = (bits << 1) | (x < 0)
    return bits


def _class_matchings(src: List[Tuple[int, ...]], dst: List[Tuple[int, ...]]):
    for perm in itertools.permutations(range(len(dst))):
        if all(len(src[i]) == len(dst[perm[i]]) for i in range(len(src))):
            yield [(src[i], dst[perm[i]]) for i in range(len(src))]


def _coords(curves: Sequence[int]) -> List[int]:
    return [2 * k + i for k in curves for i in range(2)]


def _assemble(pairs, mats) -> Tuple[int, ...]:
    """Packed 6x6 F_2 matrix mapping source class coordinates to target ones."""
    full = [0] * 6
    for (s, d), rows in zip(pairs, mats):
        sc, dc = _coords(s), _coords(d)
        n = len(sc)
        for i, r in enumerate(rows):
            for j in range(n):
                if r >> (n - 1 - j) & 1:
                    full[dc[i]] |= 1 << (5 - sc[j])
    return tuple(full)


def _apply_rows(rows: Sequence[int], x: int) -> int:
    out = 0
    for r in rows:
        out = (out << 1) | (bin(r & x).count("1") & 1)
    return out


def search_affine_isomorphism(
    gamma1: CrystalGroup,
    gamma2: CrystalGroup,
    denominator_bound: int = 4,
) -> Optional[AffineWitness]:
    """An affine map x -> Ax + b conjugating gamma1 onto gamma2, or None.

    A must carry each isotypic block of the holonomy of gamma1 onto one of
    gamma2, and whether a conjugate lands in gamma2 depends only on A mod 2
    and on 4b mod 2.  The search therefore runs over F_2 (class matchings,
    then GL(2m, F_2) per class of m curves, then b in {0, 1/4}^6), which is
    exhaustive; a hit is lifted to an integer matrix and checked exactly.
    """
    if denominator_bound < 1:
        raise ValueError("denominator bound must be >= 1")
    if abelianization(gamma1) != abelianization(gamma2):
        return None
    ident = AffineMap.identity(6)
    images = _conjugates_into(ident, gamma1, gamma2)
    if images is not None and _conjugates_into(ident, gamma2, gamma1) is not None:
        return AffineWitness(ident.linear, ident.translation, tuple(images[6:]))
    src, dst = _isotypic_classes(gamma1), _isotypic_classes(gamma2)
    if sorted(map(len, src)) != sorted(map(len, dst)):
        return None
    betas = range(64) if denominator_bound >= 4 else [0]
    # target cosets: sign pattern -> half-translation bits of elements of G2
    targets: Dict[int, List[int]] = {}
    for x in gamma2.source_subspace.elements():
        g = AffineGen.from_element(ElementG0.from_bits(x))
        targets.setdefault(_sign_bits(g.coordinate_signs()), []).append(_half_bits(g.translation))
    gens1 = [(_sign_bits(g.coordinate_signs()), _half_bits(g.translation)) for g in gamma1.gens]
    # small general linear groups are reused across matchings; GL(6) stays lazy
    gl = {n: list(_gl_f2(n)) for n in {2 * len(c) for c in src} if n <= 4}
    for pairs in _class_matchings(src, dst):
        coord_map = {}
        for s, d in pairs:
            for a, b in zip(_coords(s), _coords(d)):
                coord_map[a] = b
        # conjugated sign pattern depends only on the class matching
        new_signs = []
        for sg, _ in gens1:
            t = 0
            for a, b in coord_map.items():
                if sg >> (5 - a) & 1:
                    t |= 1 << (5 - b)
            new_signs.append(t)
        if any(t not in targets for t in new_signs):
            continue
        factories = [
            (lambda n=2 * len(s): gl[n]) if 2 * len(s) in gl else (lambda n=2 * len(s): _gl_f2(n))
            for s, _ in pairs
        ]
        for mats in _lazy_product(factories):
            A = _assemble(pairs, mats)
            ok = None
            for (sg, hb), t in zip(gens1, new_signs):
                c = _apply_rows(A, hb)
                allowed = set()
                for u in targets[t]:
                    need = u ^ c
                    if need & ~t:
                        continue
                    allowed.update(beta for beta in betas if beta & t == need)
                ok = allowed if ok is None else ok & allowed
                if not ok:
                    break
            if not ok:
                continue
            lin = [[0] * 6 for _ in range(6)]
            for (s, d), rows in zip(pairs, mats):
                L = _lift_f2(rows, 2 * len(s))
                for i, r in enumerate(_coords(d)):
                    for j, c in enumerate(_coords(s)):
                        lin[r][c] = L[i][j]
            linear = tuple(tuple(r) for r in lin)
            for beta in sorted(ok):
                b = tuple(Fraction((beta >> (5 - i)) & 1, 4) for i in range(6))
                m = AffineMap(linear, b)
                images = _conjugates_into(m, gamma1, gamma2)
                if images is not None and _conjugates_into(m.inverse(), gamma2, gamma1) is not None:
                    return AffineWitness(linear, b, tuple(images[6:]))
    return None
