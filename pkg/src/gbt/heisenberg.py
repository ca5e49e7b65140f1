"""Finite Heisenberg groups and the character decomposition of V (x) V-bar.

Scalars are roots of unity exp(2 pi i e / N) stored as the exponent ``e``
mod the group exponent N; nothing here is ever evaluated numerically.  The
dual group is identified with G through the invariant factors, so an element
and a character are both integer tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

Elem = Tuple[int, ...]


@dataclass(frozen=True)
class FinAbGroup:
    factors: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError("need at least one invariant factor")
        if any(d < 2 for d in self.factors):
            raise ValueError("invariant factors must be >= 2")
        if any(b % a for a, b in zip(self.factors, self.factors[1:])):
            raise ValueError(f"{self.factors} is not a divisibility chain")

    @classmethod
    def parse(cls, text: str) -> "FinAbGroup":
        return cls(tuple(int(x) for x in text.split(",") if x.strip()))

    @property
    def order(self) -> int:
        n = 1
        for d in self.factors:
            n *= d
        return n

    @property
    def exponent(self) -> int:
        return self.factors[-1]

    def elements(self) -> List[Elem]:
        return list(itertools.product(*[range(d) for d in self.factors]))

    def generators(self) -> List[Elem]:
        r = len(self.factors)
        return [tuple(int(i == j) for j in range(r)) for i in range(r)]

    def add(self, a: Elem, b: Elem) -> Elem:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.factors))

    def neg(self, a: Elem) -> Elem:
        return tuple(-x % d for x, d in zip(a, self.factors))

    def sub(self, a: Elem, b: Elem) -> Elem:
        return self.add(a, self.neg(b))

    def index(self, a: Elem) -> int:
        i = 0
        for x, d in zip(a, self.factors):
            i = i * d + x
        return i

    def __str__(self) -> str:
        return " x ".join(f"Z/{d}" for d in self.factors)


@dataclass(frozen=True)
class RootOfUnity:
    exponent: int
    order: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponent", self.exponent % self.order)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if other.order != self.order:
            raise ValueError("roots of unity of different orders")
        return RootOfUnity(self.exponent + other.exponent, self.order)

    def __str__(self) -> str:
        return f"z^{self.exponent}" if self.exponent else "1"


def pairing(G: FinAbGroup, chi: Elem, g: Elem) -> RootOfUnity:
    N = G.exponent
    e = sum((N // d) * c * x for c, x, d in zip(chi, g, G.factors))
    return RootOfUnity(e, N)


@dataclass(frozen=True)
class GPMatrixC:
    """Generalized permutation matrix: column j has entry z^scalars[j] in row targets[j]."""

    targets: Tuple[int, ...]
    scalars: Tuple[int, ...]
    order: int

    def __post_init__(self) -> None:
        if sorted(self.targets) != list(range(len(self.targets))):
            raise ValueError("targets must be a permutation")
        object.__setattr__(self, "scalars", tuple(s % self.order for s in self.scalars))

    @classmethod
    def identity(cls, n: int, order: int) -> "GPMatrixC":
        return cls(tuple(range(n)), (0,) * n, order)

    def __matmul__(self, other: "GPMatrixC") -> "GPMatrixC":
        # (self @ other) e_j = self(z^s e_t) = z^(s + s') e_t'
        targets = tuple(self.targets[t] for t in other.targets)
        scalars = tuple(other.scalars[j] + self.scalars[other.targets[j]] for j in range(len(targets)))
        return GPMatrixC(targets, scalars, self.order)

    def scaled(self, e: int) -> "GPMatrixC":
        return GPMatrixC(self.targets, tuple(s + e for s in self.scalars), self.order)

    def apply(self, v: Sequence[Optional[int]]) -> List[Optional[int]]:
        """Apply to a vector of exponents (None for a zero coordinate)."""
        out: List[Optional[int]] = [None] * len(v)
        for j, x in enumerate(v):
            if x is not None:
                out[self.targets[j]] = (x + self.scalars[j]) % self.order
        return out


def sv_translate(G: FinAbGroup, h: Elem) -> GPMatrixC:
    els = G.elements()
    return GPMatrixC(tuple(G.index(G.add(g, h)) for g in els), (0,) * len(els), G.exponent)


def sv_twist(G: FinAbGroup, eta: Elem) -> GPMatrixC:
    els = G.elements()
    return GPMatrixC(tuple(range(len(els))), tuple(pairing(G, eta, g).exponent for g in els), G.exponent)


# -- V (x) V-bar, basis g (x) chi-bar indexed by index(g) * |G| + index(chi) ---------


def tensor_translate(G: FinAbGroup, h: Elem) -> GPMatrixC:
    """h sends g (x) chi-bar to (chi, h) (g + h) (x) chi-bar."""
    els = G.elements()
    n = len(els)
    targets, scalars = [], []
    for g in els:
        for chi in els:
            targets.append(G.index(G.add(g, h)) * n + G.index(chi))
            scalars.append(pairing(G, chi, h).exponent)
    return GPMatrixC(tuple(targets), tuple(scalars), G.exponent)


def tensor_twist(G: FinAbGroup, eta: Elem) -> GPMatrixC:
    """eta sends g (x) chi-bar to (eta, g) g (x) (chi + eta)-bar."""
    els = G.elements()
    n = len(els)
    targets, scalars = [], []
    for g in els:
        for chi in els:
            targets.append(G.index(g) * n + G.index(G.add(chi, eta)))
            scalars.append(pairing(G, eta, g).exponent)
    return GPMatrixC(tuple(targets), tuple(scalars), G.exponent)


def eigenvector_F(G: FinAbGroup, k: Elem, xi: Elem) -> List[int]:
    """Exponents of F_{k,xi} = sum over (g, chi) of (chi - xi, g - k) g (x) chi-bar."""
    els = G.elements()
    return [pairing(G, G.sub(chi, xi), G.sub(g, k)).exponent for g in els for chi in els]


def _is_multiple(v: Sequence[Optional[int]], w: Sequence[Optional[int]], e: int, N: int) -> bool:
    return all(
        (a is None and b is None) or (a is not None and b is not None and (a - b - e) % N == 0)
        for a, b in zip(v, w)
    )


@dataclass
class VerificationReport:
    group: str
    ok: bool
    eigenvectors: int
    failures: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"group": self.group, "ok": self.ok, "eigenvectors": self.eigenvectors, "failures": self.failures}


def heisenberg_commutation_holds(G: FinAbGroup) -> bool:
    """twist(eta) translate(h) = (eta, h) translate(h) twist(eta) for all h, eta."""
    els = G.elements()
    for h in els:
        for eta in els:
            lhs = sv_twist(G, eta) @ sv_translate(G, h)
            rhs = (sv_translate(G, h) @ sv_twist(G, eta)).scaled(pairing(G, eta, h).exponent)
            if lhs != rhs:
                return False
    return True


def verify_decomposition(G: FinAbGroup, max_order: int = 36) -> VerificationReport:
    """Check that every F_{k,xi} is a common eigenvector with character
    h -> (xi, h), eta -> (eta, k), and that these |G|^2 characters are distinct."""
    if G.order > max_order:
        raise ValueError(f"|G| = {G.order} exceeds the bound {max_order}")
    N = G.exponent
    els = G.elements()
    gens = G.generators()
    trans = [tensor_translate(G, h) for h in gens]
    twists = [tensor_twist(G, e) for e in gens]
    failures = []
    seen: Dict[Tuple[int, ...], Tuple[Elem, Elem]] = {}
    for k in els:
        for xi in els:
            F = eigenvector_F(G, k, xi)
            for h, M in zip(gens, trans):
                e = pairing(G, xi, h).exponent
                if not _is_multiple(M.apply(F), F, e, N):
                    failures.append(f"translate by {h} on F_{k},{xi}")
            for eta, M in zip(gens, twists):
                e = pairing(G, eta, k).exponent
                if not _is_multiple(M.apply(F), F, e, N):
                    failures.append(f"twist by {eta} on F_{k},{xi}")
            char = tuple(pairing(G, xi, h).exponent for h in gens) + tuple(
                pairing(G, eta, k).exponent for eta in gens
            )
            if char in seen:
                failures.append(f"F_{k},{xi} and F_{seen[char][0]},{seen[char][1]} share a character")
            seen[char] = (k, xi)
    if not heisenberg_commutation_holds(G):
        failures.append("Heisenberg commutation relation fails")
    return VerificationReport(str(G), not failures, len(seen), failures)


# -- x/y notation for exponent-2 groups --------------------------------------


def xy_expansion(G: FinAbGroup, F: Sequence[int]) -> Dict[Tuple[int, int], int]:
    """Integer coefficients of F in the basis x_g y_j, writing chi-bar = sum_j (chi, j) y_j.

    Only defined when every pairing value is +-1, i.e. G has exponent 2.
    """
    if G.exponent != 2:
        raise ValueError("x/y expansion needs a group of exponent 2")
    els = G.elements()
    n = len(els)
    out: Dict[Tuple[int, int], int] = {}
    for gi, g in enumerate(els):
        for ji, j in enumerate(els):
            c = 0
            for ci, chi in enumerate(els):
                e = F[gi * n + ci] + pairing(G, chi, j).exponent
                c += -1 if e % 2 else 1
            if c:
                out[(gi, ji)] = c
    return out


def render_xy(coeffs: Dict[Tuple[int, int], int]) -> str:
    parts = []
    for (g, j), c in sorted(coeffs.items()):
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sign} {mag}x{g}y{j}")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else s


def render_exponents(G: FinAbGroup, F: Sequence[int]) -> str:
    els = G.elements()
    n = len(els)
    name = lambda e: "".join(map(str, e))  # noqa: E731
    terms = []
    for gi, g in enumerate(els):
        for ci, chi in enumerate(els):
            terms.append(f"{RootOfUnity(F[gi * n + ci], G.exponent)}*x{name(g)}(x)y{name(chi)}bar")
    return " + ".join(terms)


def divisor_basis_z2() -> Dict[str, Dict[Tuple[int, int], int]]:
    """The four invariant divisors of the 2 x 2 case, in x/y coordinates."""
    return {
        "x0y0 + x1y1": {(0, 0): 1, (1, 1): 1},
        "x0y0 - x1y1": {(0, 0): 1, (1, 1): -1},
        "x0y1 + x1y0": {(0, 1): 1, (1, 0): 1},
        "x0y1 - x1y0": {(0, 1): 1, (1, 0): -1},
    }


def _proportional(a: Dict[Tuple[int, int], int], b: Dict[Tuple[int, int], int]) -> bool:
    if set(a) != set(b):
        return False
    keys = sorted(a)
    k0 = keys[0]
    return all(a[k] * b[k0] == b[k] * a[k0] for k in keys)


def match_z2_divisors() -> Dict[str, str]:
    """Map each F_{k,xi} for G = Z/2 to the divisor it is proportional to."""
    G = FinAbGroup((2,))
    out = {}
    for k in G.elements():
        for xi in G.elements():
            F = xy_expansion(G, eigenvector_F(G, k, xi))
            hit = next((name for name, d in divisor_basis_z2().items() if _proportional(F, d)), None)
            out[f"F_{k[0]}{xi[0]}"] = hit
    return out


def z2_geometric_eigenvectors(translate_first: bool = True) -> Dict[str, Tuple[int, int]]:
    """Eigenvalues (as exponents mod 2) of each divisor under the diagonal actions
    translate (x) translate and twist (x) twist on span{x_i y_j}.

    ``translate_first`` chooses which geometric involution plays translation;
    the pair of operators, hence the result, is the same either way.
    """
    G = FinAbGroup((2,))
    T, S = sv_translate(G, (1,)), sv_twist(G, (1,))
    first, second = (T, S) if translate_first else (S, T)
    ops = []
    for M in (first, second):
        # M (x) M on x_i y_j, index 2 i + j
        targets = tuple(2 * M.targets[i] + M.targets[j] for i in range(2) for j in range(2))
        scalars = tuple(M.scalars[i] + M.scalars[j] for i in range(2) for j in range(2))
        ops.append(GPMatrixC(targets, scalars, 2))
    out = {}
    for name, d in divisor_basis_z2().items():
        v: List[Optional[int]] = [None] * 4
        for (i, j), c in d.items():
            v[2 * i + j] = 0 if c > 0 else 1
        eig = []
        for M in ops:
            w = M.apply(v)
            e = next((e for e in (0, 1) if _is_multiple(w, v, e, 2)), None)
            if e is None:
                raise ArithmeticError(f"{name} is not an eigenvector")
            eig.append(e)
        out[name] = tuple(eig)  # type: ignore[assignment]
    return out
