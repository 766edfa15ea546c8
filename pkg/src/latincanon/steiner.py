"""Steiner triple systems and their canonical forms.

A Steiner triple system on points 1..n corresponds to the idempotent totally
symmetric quasigroup with ``x∘x = x`` and ``x∘y = z`` for each block
{x, y, z}.  Two canonical representatives are provided: the search that
labels inverse pairs of row cycles with a single permutation
(:func:`canonical_sts`), and the symbol labelling of the general isotopism
canonical form (:func:`canonical_sts_lifted`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _search as K
from .canonical import AlreadyLabelled, SearchState, canonical_labelling, run_search
from .cycles import cycle_length_table, cycles_of, sigma
from .latin_core import LatinSquare, PartialPermutation, _trusted, validate


class STSError(ValueError):
    pass


class BadOrder(STSError):
    def __init__(self, n: int):
        super().__init__(f"no Steiner triple system has {n} points (need n ≡ 1 or 3 mod 6)")
        self.n = n


class PairUncovered(STSError):
    def __init__(self, x: int, y: int):
        super().__init__(f"pair {{{x}, {y}}} lies in no block")
        self.pair = (x, y)


class PairDoubled(STSError):
    def __init__(self, x: int, y: int):
        super().__init__(f"pair {{{x}, {y}}} lies in two blocks")
        self.pair = (x, y)


class InvalidBlock(STSError):
    pass


class NotIdempotent(STSError):
    pass


class NotTotallySymmetric(STSError):
    pass


class NotSteiner(STSError):
    pass


class SingularSymbol(ValueError):
    pass


class InvalidCell(ValueError):
    pass


FANO = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))


@dataclass(frozen=True)
class BlockSet:
    n: int
    blocks: frozenset[tuple[int, int, int]]

    def sorted_blocks(self) -> list[tuple[int, int, int]]:
        return sorted(self.blocks)

    def relabel(self, phi) -> "BlockSet":
        """Image under the point map ``x -> phi[x-1]``."""
        return BlockSet(self.n, frozenset(tuple(sorted(phi[x - 1] for x in b)) for b in self.blocks))


def sts_validate(blocks, n: int) -> BlockSet:
    if n < 0 or n % 6 not in (1, 3):
        raise BadOrder(n)
    seen: dict[tuple[int, int], tuple[int, ...]] = {}
    norm = []
    for b in blocks:
        t = tuple(sorted(int(x) for x in b))
        if len(t) != 3 or len(set(t)) != 3 or t[0] < 1 or t[2] > n:
            raise InvalidBlock(f"{tuple(b)} is not a 3-subset of 1..{n}")
        for x, y in itertools.combinations(t, 2):
            if (x, y) in seen:
                raise PairDoubled(x, y)
            seen[(x, y)] = t
        norm.append(t)
    for x, y in itertools.combinations(range(1, n + 1), 2):
        if (x, y) not in seen:
            raise PairUncovered(x, y)
    return BlockSet(n, frozenset(norm))


def steiner_square(L: LatinSquare) -> LatinSquare:
    """Return ``L`` after checking it is an idempotent totally symmetric square."""
    g = L.grid
    n = L.n
    if not np.array_equal(np.diag(g), np.arange(1, n + 1)):
        raise NotIdempotent("x∘x != x for some x")
    if not np.array_equal(g, g.T):
        raise NotTotallySymmetric("square is not commutative")
    r = np.arange(n)[:, None]
    # x∘(x∘y) = y
    if not np.array_equal(L.g0[r, L.g0], np.broadcast_to(np.arange(n), (n, n))):
        raise NotTotallySymmetric("square is not semisymmetric")
    return L


def sts_to_quasigroup(B: BlockSet) -> LatinSquare:
    n = B.n
    g = np.zeros((n, n), dtype=np.int64)
    g[np.arange(n), np.arange(n)] = np.arange(1, n + 1)
    for x, y, z in B.blocks:
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            g[a - 1, b - 1] = c
            g[b - 1, a - 1] = c
    return _trusted(g) if n else validate(g)


def quasigroup_to_sts(S: LatinSquare) -> BlockSet:
    steiner_square(S)
    n = S.n
    blocks = set()
    for x in range(1, n + 1):
        for y in range(x + 1, n + 1):
            blocks.add(tuple(sorted((x, y, S[x, y]))))
    return BlockSet(n, frozenset(blocks))


def affine_plane_sts9() -> BlockSet:
    """The lines of AG(2, 3): the unique STS(9)."""
    pts = {(a, b): 3 * a + b + 1 for a in range(3) for b in range(3)}
    blocks = set()
    for (p, q) in itertools.combinations(pts, 2):
        r = ((-p[0] - q[0]) % 3, (-p[1] - q[1]) % 3)
        blocks.add(tuple(sorted((pts[p], pts[q], pts[r]))))
    return sts_validate(blocks, 9)


def fano() -> BlockSet:
    return sts_validate(FANO, 7)


# ---------------------------------------------------------------------------
# Row cycles of Steiner squares
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RowCycle:
    columns: frozenset[int]
    symbols: frozenset[int]
    length: int


@dataclass(frozen=True)
class InversePair:
    left: RowCycle
    right: RowCycle

    @property
    def length(self) -> int:
        return self.left.length


def row_cycles(S: LatinSquare, i: int, j: int) -> list[RowCycle]:
    out = []
    for cyc in cycles_of(sigma(S, i, j)):
        cols = frozenset(S.row_pos(i, s) for s in cyc)
        out.append(RowCycle(cols, frozenset(cyc), len(cyc)))
    return out


def singular_cycle(S: LatinSquare, i: int, j: int) -> RowCycle:
    k = S[i, j]
    for R in row_cycles(S, i, j):
        if i in R.symbols:
            if R.symbols != {i, j, k}:
                raise NotSteiner("singular cycle is not {i, j, i∘j}")
            return R
    raise AssertionError("unreachable")


def inverse_pairs(S: LatinSquare, i: int, j: int) -> list[InversePair]:
    """Pair every non-singular row cycle of rows i, j with its column/symbol swap."""
    k = S[i, j]
    sing = {i, j, k}
    cycles = [R for R in row_cycles(S, i, j) if not (R.symbols & sing)]
    by_cols = {R.columns: R for R in cycles}
    pairs = []
    done = set()
    for R in cycles:
        if R.columns in done:
            continue
        partner = by_cols.get(R.symbols)
        if partner is None or partner is R:
            raise NotSteiner(f"row cycle on columns {sorted(R.columns)} has no inverse partner")
        pairs.append(InversePair(R, partner))
        done.add(R.columns)
        done.add(partner.columns)
    return pairs


# ---------------------------------------------------------------------------
# Search pieces
# ---------------------------------------------------------------------------


def succ_prime(x: int, y: int) -> tuple[int, int]:
    """Successor over the upper triangle x <= y, column by column."""
    if x < 1 or x > y:
        raise InvalidCell(f"({x}, {y}) is not in the upper triangle")
    return K.succ_prime_k(x, y)


def start_state(S: LatinSquare, i: int, j: int) -> SearchState:
    """Search state for rows (i, j) with the singular cycle labelled 1, 2, 3."""
    return SearchState.start(S, i, j, mode="sts")


def label_inverse_pair(state: SearchState, s: int) -> SearchState:
    """Label the inverse pair whose left cycle contains symbol ``s``."""
    if state.mode != K.MODE_STS:
        raise ValueError("state was not started in Steiner mode")
    i, j = state.pair
    if s in (i, j, state.L[i, j]):
        raise SingularSymbol(f"symbol {s} lies on the singular cycle")
    if state.is_labelled(s):
        raise AlreadyLabelled(f"symbol {s} is already labelled")
    g0, rp, _, i0, j0, ell = state._args()
    K.label_inverse_pair_k(g0, rp, i0, j0, ell, state.lab, state.T, state.p, state.pinit,
                           state.meta, s - 1, state.counters)
    return state


@dataclass
class STSCanonical:
    alpha: PartialPermutation
    form: LatinSquare
    leaves: int
    stats: dict


def canonical_sts(S: LatinSquare) -> STSCanonical:
    """Canonical isomorphism of a Steiner square; the form is in paired standard form."""
    try:
        steiner_square(S)
    except STSError as e:
        raise NotSteiner(str(e)) from e
    if S.n < 3:
        return STSCanonical(PartialPermutation.identity(S.n), S, 1, {})
    res = run_search(S, K.MODE_STS)
    return STSCanonical(res.labelling.alpha, res.form, res.leaves, res.stats)


def canonical_sts_lifted(S: LatinSquare) -> LatinSquare:
    """Apply the symbol part of the general canonical isotopism to all three coordinates."""
    try:
        steiner_square(S)
    except STSError as e:
        raise NotSteiner(str(e)) from e
    gamma = canonical_labelling(S).labelling.gamma
    return relabel_square(S, gamma.image)


def relabel_square(S: LatinSquare, phi) -> LatinSquare:
    """Isomorphic image of ``S`` under the point map ``x -> phi[x-1]``."""
    ph = np.asarray(phi, dtype=np.int64) - 1
    out = np.empty_like(S.grid)
    out[np.ix_(ph, ph)] = ph[S.g0] + 1
    return _trusted(out)


def sts_isomorphic(B1: BlockSet, B2: BlockSet) -> bool:
    if B1.n != B2.n:
        return False
    return canonical_sts(sts_to_quasigroup(B1)).form == canonical_sts(sts_to_quasigroup(B2)).form


def is_paired_standard_form(S: LatinSquare) -> bool:
    """Rows 1 and 2 follow the paired standard form layout.

    Columns 1-3 carry the singular cycle (1 3 2); after that each inverse
    pair of length ρ starting at column t fills columns t..t+2ρ-1 with the
    left cycle increasing, and ρ never grows from one pair to the next.
    """
    n = S.n
    if n < 3:
        return True
    r1 = S.grid[0].tolist()
    r2 = S.grid[1].tolist()
    if r1[:3] != [1, 3, 2] or r2[:3] != [3, 2, 1]:
        return False
    ell = cycle_length_table(S).ell0[0, 1]
    t = 4
    last = n
    while t <= n:
        rho = int(ell[S[2, t] - 1])
        if rho > last or t + 2 * rho - 1 > n:
            return False
        for u in range(rho):
            if r1[t + u - 1] != t + rho + u or r1[t + rho + u - 1] != t + u:
                return False
            want2 = t + rho + u + 1 if u < rho - 1 else t + rho
            if r2[t + u - 1] != want2:
                return False
            want2r = t + u - 1 if u > 0 else t + rho - 1
            if r2[t + rho + u - 1] != want2r:
                return False
        last = rho
        t += 2 * rho
    return True


# ---------------------------------------------------------------------------
# Block file format
# ---------------------------------------------------------------------------


def parse_blocks(text: str) -> BlockSet:
    from .latin_core import ParseError

    lines = [(k, ln) for k, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise ParseError(1, "empty input")
    try:
        n = int(lines[0][1].strip())
    except ValueError:
        raise ParseError(lines[0][0], "first line must be the number of points") from None
    blocks = []
    for k, ln in lines[1:]:
        try:
            b = tuple(int(x) for x in ln.split())
        except ValueError:
            raise ParseError(k, "non-integer point") from None
        if len(b) != 3:
            raise ParseError(k, "a block has three points")
        blocks.append(b)
    return sts_validate(blocks, n)


def serialize_blocks(B: BlockSet) -> str:
    return f"{B.n}\n" + "".join(f"{a} {b} {c}\n" for a, b, c in B.sorted_blocks())
