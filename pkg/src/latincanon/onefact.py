"""1-factorisations of complete graphs and their canonical forms.

A 1-factorisation F_1, ..., F_{2n-1} of K_{2n} is stored as the unipotent
symmetric square with ``x∘x = 1`` and ``x∘y = k+1`` whenever {x, y} is an
edge of F_k.  Relabelling vertices and renaming factors is exactly an
isotopism (α, α, γ) with γ(1) = 1, so class identity is decided by
:func:`canonical_1f`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _search as K
from .canonical import OrderMismatch, canonical_labelling, run_search
from .latin_core import LatinSquare, PartialLabelling, ParseError, validate


class OneFactError(ValueError):
    pass


class NotUnipotent(OneFactError):
    pass


class NotSymmetric(OneFactError):
    pass


class NotOneFactorisation(OneFactError):
    pass


Edge = tuple[int, int]


def _edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class FactorSet:
    """Ordered list of perfect matchings of K_v; order only matters as a labelling."""

    v: int
    factors: tuple[frozenset[Edge], ...]

    def key(self) -> frozenset[frozenset[Edge]]:
        """Order-free identity of the factorisation."""
        return frozenset(self.factors)

    def relabel(self, phi) -> "FactorSet":
        """Image under the vertex map ``x -> phi[x-1]``."""
        return FactorSet(self.v, tuple(
            frozenset(_edge(phi[a - 1], phi[b - 1]) for a, b in f) for f in self.factors
        ))


def validate_factorisation(factors, v: int) -> FactorSet:
    if v < 2 or v % 2:
        raise NotOneFactorisation(f"K_{v} has no 1-factorisation (need even v >= 2)")
    norm = []
    used: set[Edge] = set()
    for k, f in enumerate(factors, start=1):
        edges = [_edge(int(a), int(b)) for a, b in f]
        verts = [x for e in edges for x in e]
        if any(a == b for a, b in edges) or any(not 1 <= x <= v for x in verts):
            raise NotOneFactorisation(f"factor {k} has an edge outside K_{v}")
        if sorted(verts) != list(range(1, v + 1)):
            raise NotOneFactorisation(f"factor {k} is not a perfect matching")
        for e in edges:
            if e in used:
                raise NotOneFactorisation(f"edge {e[0]}-{e[1]} lies in two factors")
            used.add(e)
        norm.append(frozenset(edges))
    if len(norm) != v - 1:
        raise NotOneFactorisation(f"need {v - 1} factors, got {len(norm)}")
    return FactorSet(v, tuple(norm))


def unipotent_square(U: LatinSquare) -> LatinSquare:
    """Return ``U`` after checking ``x∘x = 1`` and symmetry."""
    g = U.grid
    if not (np.diag(g) == 1).all():
        raise NotUnipotent("x∘x != 1 for some x")
    if not np.array_equal(g, g.T):
        raise NotSymmetric("square is not symmetric")
    return U


def of_to_unipotent(F: FactorSet) -> LatinSquare:
    v = F.v
    g = np.ones((v, v), dtype=np.int64)
    for k, f in enumerate(F.factors, start=1):
        for a, b in f:
            g[a - 1, b - 1] = k + 1
            g[b - 1, a - 1] = k + 1
    return validate(g)


def unipotent_to_of(U: LatinSquare) -> FactorSet:
    unipotent_square(U)
    v = U.n
    if v % 2:
        raise NotOneFactorisation("unipotent symmetric squares have even order")
    factors = []
    for k in range(2, v + 1):
        factors.append([(a, b) for a in range(1, v + 1) for b in range(a + 1, v + 1) if U[a, b] == k])
    return validate_factorisation(factors, v)


def k4() -> FactorSet:
    return validate_factorisation([[(1, 2), (3, 4)], [(1, 3), (2, 4)], [(1, 4), (2, 3)]], 4)


def gk2n(v: int) -> FactorSet:
    """The patterned factorisation GK_v: vertex v fixed, the rest on Z_{v-1}."""
    m = v - 1
    factors = []
    for k in range(m):
        f = [(k + 1, v)]
        for d in range(1, m // 2 + 1):
            f.append(((k + d) % m + 1, (k - d) % m + 1))
        factors.append(f)
    return validate_factorisation(factors, v)


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------


@dataclass
class OFCanonical:
    labelling: PartialLabelling
    form: LatinSquare
    leaves: int
    stats: dict


def canonical_1f(U: LatinSquare) -> OFCanonical:
    """Canonical rrs-isotopism (α, α, γ) of a unipotent symmetric square."""
    unipotent_square(U)
    if U.n < 3:
        return OFCanonical(PartialLabelling.identity(U.n), U, 1, {})
    res = run_search(U, K.MODE_1F)
    return OFCanonical(res.labelling, res.form, res.leaves, res.stats)


def same_class_1f(F1: FactorSet, F2: FactorSet) -> bool:
    if F1.v != F2.v:
        raise OrderMismatch(f"vertex counts differ: {F1.v} and {F2.v}")
    return canonical_1f(of_to_unipotent(F1)).form == canonical_1f(of_to_unipotent(F2)).form


def is_factor_standard_form(U: LatinSquare) -> bool:
    """Rows 1-2 open with the 2-cycle (1 2), then standard-form cycles of non-increasing length."""
    n = U.n
    r1 = U.grid[0].tolist()
    r2 = U.grid[1].tolist()
    if r1 != list(range(1, n + 1)) or r2[:2] != [2, 1]:
        return False
    t = 3
    last = n
    while t <= n:
        k = 1
        while t + k - 1 <= n and r2[t + k - 2] != t:
            k += 1
        if t + k - 1 > n or k > last:
            return False
        if any(r2[t + u - 1] != t + u + 1 for u in range(k - 1)):
            return False
        last = k
        t += k
    return True


def rooted_square(F: FactorSet, root: int) -> LatinSquare:
    """Idempotent symmetric square of order v-1 for ``F`` rooted at ``root``.

    Points are the other vertices in increasing order; ``x∘y`` is the point
    joined to the root in the factor containing {x, y}, and ``x∘x = x``.
    """
    pts = [x for x in range(1, F.v + 1) if x != root]
    idx = {x: k for k, x in enumerate(pts, start=1)}
    m = len(pts)
    g = np.zeros((m, m), dtype=np.int64)
    for f in F.factors:
        mate = next(b if a == root else a for a, b in f if root in (a, b))
        for a, b in f:
            if root in (a, b):
                continue
            g[idx[a] - 1, idx[b] - 1] = idx[mate]
            g[idx[b] - 1, idx[a] - 1] = idx[mate]
    g[np.arange(m), np.arange(m)] = np.arange(1, m + 1)
    return validate(g)


def rooted_1f_canonical(F: FactorSet, root: int) -> LatinSquare:
    """Canonical representative of a rooted factorisation.

    The symbol part γ of the general canonical isotopism of the rooted
    square is applied to rows, columns and symbols alike.  Only meaningful
    when the root is part of the data.
    """
    from .steiner import relabel_square

    I = rooted_square(F, root)
    gamma = canonical_labelling(I).labelling.gamma
    return relabel_square(I, gamma.image)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def all_one_factorisations(v: int, prefix=()) -> list[FactorSet]:
    """Every 1-factorisation of K_v containing the factors in ``prefix``.

    Factor k of each result holds the edge {1, k+1}, so the list has no
    duplicates as unordered sets of factors.
    """
    if v < 2 or v % 2:
        raise NotOneFactorisation(f"K_{v} has no 1-factorisation")
    pre = {}
    used: set[Edge] = set()
    for f in prefix:
        f = frozenset(_edge(a, b) for a, b in f)
        mate = next(b for a, b in f if a == 1)
        pre[mate] = f
        used |= f
    out = []
    factors: list[frozenset[Edge]] = []

    def matchings(free: list[int]):
        if not free:
            yield []
            return
        a = free[0]
        for b in free[1:]:
            if _edge(a, b) in used:
                continue
            rest = [x for x in free if x != a and x != b]
            for m in matchings(rest):
                yield [(a, b)] + m

    def rec(mate: int):
        if mate > v:
            out.append(FactorSet(v, tuple(factors)))
            return
        if mate in pre:
            factors.append(pre[mate])
            rec(mate + 1)
            factors.pop()
            return
        if (1, mate) in used:
            return
        free = [x for x in range(2, v + 1) if x != mate]
        for m in matchings(free):
            f = frozenset([(1, mate)] + [_edge(a, b) for a, b in m])
            used.update(f)
            factors.append(f)
            rec(mate + 1)
            factors.pop()
            used.difference_update(f)

    rec(2)
    return out


# ---------------------------------------------------------------------------
# Factor file format
# ---------------------------------------------------------------------------


def parse_factors(text: str) -> FactorSet:
    lines = [(k, ln) for k, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise ParseError(1, "empty input")
    try:
        v = int(lines[0][1].strip())
    except ValueError:
        raise ParseError(lines[0][0], "first line must be the vertex count") from None
    factors = []
    for k, ln in lines[1:]:
        f = []
        for tok in ln.split():
            a, sep, b = tok.partition("-")
            if not sep:
                raise ParseError(k, f"edge {tok!r} is not of the form a-b")
            try:
                f.append((int(a), int(b)))
            except ValueError:
                raise ParseError(k, f"edge {tok!r} is not of the form a-b") from None
        factors.append(f)
    return validate_factorisation(factors, v)


def serialize_factors(F: FactorSet) -> str:
    lines = [str(F.v)]
    for f in F.factors:
        lines.append(" ".join(f"{a}-{b}" for a, b in sorted(f)))
    return "\n".join(lines) + "\n"


def random_relabelling(F: FactorSet, rng: np.random.Generator) -> FactorSet:
    """Random vertex relabelling with the factor order shuffled too."""
    phi = (rng.permutation(F.v) + 1).tolist()
    G = F.relabel(phi)
    order = rng.permutation(len(G.factors))
    return FactorSet(G.v, tuple(G.factors[k] for k in order))


__all__ = [
    "FactorSet", "NotUnipotent", "NotSymmetric", "NotOneFactorisation", "OFCanonical",
    "validate_factorisation", "unipotent_square", "of_to_unipotent", "unipotent_to_of",
    "canonical_1f", "same_class_1f", "is_factor_standard_form", "rooted_square",
    "rooted_1f_canonical", "all_one_factorisations", "parse_factors", "serialize_factors",
    "random_relabelling", "k4", "gk2n",
]
