"""Row permutations, row cycles and their length tables.

For rows i and j, ``sigma(L, i, j)`` sends the symbol in row i of each column
to the symbol below it in row j.  Its cycles are the row cycles of the pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numba import njit

from .latin_core import LatinSquare


class EqualRows(ValueError):
    pass


class OrderTooSmall(ValueError):
    pass


@njit(cache=True)
def _pair_cycles(g0, rowpos0, i, j, ell_out):
    """Fill ``ell_out[s]`` with the length of the (i, j) row cycle through s."""
    n = g0.shape[0]
    for s in range(n):
        ell_out[s] = 0
    for s in range(n):
        if ell_out[s]:
            continue
        k = 0
        x = s
        while True:
            k += 1
            x = g0[j, rowpos0[i, x]]
            if x == s:
                break
        x = s
        for _ in range(k):
            ell_out[x] = k
            x = g0[j, rowpos0[i, x]]


@njit(cache=True)
def _cycle_table(g0, rowpos0):
    """ell[i, j, s] for every ordered pair and each pair's sorted lengths.

    ``gam[p]`` holds the decreasing cycle lengths of the p-th pair i < j in
    row-major order, zero-padded to n.
    """
    n = g0.shape[0]
    ell = np.zeros((n, n, n), dtype=np.int32)
    npairs = n * (n - 1) // 2
    gam = np.zeros((npairs, n), dtype=np.int32)
    buf = np.zeros(n, dtype=np.int64)
    cnt = np.zeros(n + 1, dtype=np.int64)
    p = 0
    for i in range(n):
        for j in range(i + 1, n):
            _pair_cycles(g0, rowpos0, i, j, buf)
            for s in range(n):
                ell[i, j, s] = buf[s]
                ell[j, i, s] = buf[s]
            for k in range(n + 1):
                cnt[k] = 0
            for s in range(n):
                cnt[buf[s]] += 1
            pos = 0
            for k in range(n, 0, -1):
                for _ in range(cnt[k] // k):
                    gam[p, pos] = k
                    pos += 1
            p += 1
    return ell, gam


@njit(cache=True)
def _max_rows(gam):
    """Indices of the lexicographically largest rows of ``gam``."""
    m = gam.shape[0]
    w = gam.shape[1]
    best = 0
    for p in range(1, m):
        for t in range(w):
            if gam[p, t] != gam[best, t]:
                if gam[p, t] > gam[best, t]:
                    best = p
                break
    out = np.zeros(m, dtype=np.int64)
    k = 0
    for p in range(m):
        same = True
        for t in range(w):
            if gam[p, t] != gam[best, t]:
                same = False
                break
        if same:
            out[k] = p
            k += 1
    return out[:k]


@njit(cache=True)
def _hamiltonian_count(g0, rowpos0):
    n = g0.shape[0]
    h = 0
    for i in range(n):
        for j in range(i + 1, n):
            x = g0[j, rowpos0[i, 0]]
            k = 1
            while x != 0:
                x = g0[j, rowpos0[i, x]]
                k += 1
            if k == n:
                h += 1
    return h


def _check_pair(L: LatinSquare, i: int, j: int) -> None:
    if i == j:
        raise EqualRows(f"rows must differ (got {i} twice)")
    for r in (i, j):
        if not 1 <= r <= L.n:
            raise IndexError(f"row {r} outside 1..{L.n}")


def sigma(L: LatinSquare, i: int, j: int) -> tuple[int, ...]:
    """The permutation with ``sigma(L[i][c]) = L[j][c]``; entry s-1 is the image of s."""
    _check_pair(L, i, j)
    img = L.g0[j - 1, L.rowpos0[i - 1]] + 1
    return tuple(int(v) for v in img)


def cycles_of(perm: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Disjoint cycles of a 1-based permutation, each starting at its least point."""
    seen = set()
    out = []
    for s in range(1, len(perm) + 1):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        x = perm[s - 1]
        while x != s:
            cyc.append(x)
            seen.add(x)
            x = perm[x - 1]
        out.append(tuple(cyc))
    return out


def cycle_structure(L: LatinSquare, i: int, j: int) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles_of(sigma(L, i, j))), reverse=True))


@dataclass
class CycleTable:
    """Row-cycle lengths for all ordered row pairs of a square.

    ``ell0[i, j, s]`` is the length of the cycle through symbol s in rows
    i, j (all zero-based); :meth:`ell` is the 1-based accessor.
    """

    n: int
    ell0: np.ndarray
    gam: np.ndarray = field(repr=False)
    r_max: tuple[tuple[int, int], ...]

    def ell(self, i: int, j: int, s: int) -> int:
        return int(self.ell0[i - 1, j - 1, s - 1])

    def gamma(self, i: int, j: int) -> tuple[int, ...]:
        if i == j:
            raise EqualRows(f"rows must differ (got {i} twice)")
        a, b = sorted((i - 1, j - 1))
        p = a * self.n - a * (a + 1) // 2 + (b - a - 1)
        return tuple(int(x) for x in self.gam[p] if x)

    @cached_property
    def gammas(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {
            (i, j): self.gamma(i, j)
            for i in range(1, self.n + 1)
            for j in range(i + 1, self.n + 1)
        }

    @property
    def max_gamma(self) -> tuple[int, ...]:
        if not self.r_max:
            return ()
        return self.gamma(*self.r_max[0])

    def r_max0(self) -> np.ndarray:
        """R_max as a zero-based ``(m, 2)`` array."""
        return np.array(self.r_max, dtype=np.int64).reshape(-1, 2) - 1


def cycle_length_table(L: LatinSquare) -> CycleTable:
    n = L.n
    ell, gam = _cycle_table(L.g0, L.rowpos0)
    pairs = []
    if n >= 2:
        iu, ju = np.triu_indices(n, 1)
        for p in _max_rows(gam):
            i, j = int(iu[p]) + 1, int(ju[p]) + 1
            pairs.append((i, j))
            pairs.append((j, i))
    return CycleTable(n, ell, gam, tuple(sorted(pairs)))


def longest_cycle(L: LatinSquare) -> int:
    """Length of the longest row cycle over all pairs of rows."""
    if L.n < 2:
        raise OrderTooSmall("need n >= 2")
    _, gam = _cycle_table(L.g0, L.rowpos0)
    return int(gam[:, 0].max())


def hamiltonian_count(L: LatinSquare) -> int:
    """Number of unordered row pairs forming a single row cycle of length n."""
    if L.n < 2:
        raise OrderTooSmall("need n >= 2")
    return int(_hamiltonian_count(L.g0, L.rowpos0))


class PList:
    """Next free column label per cycle length; ``p[k]`` for k in 1..n."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = np.asarray(values, dtype=np.int64)

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k: int) -> int:
        if not 1 <= k <= self.n:
            raise IndexError(k)
        return int(self.values[k])

    def tolist(self) -> list[int]:
        return self.values[1:].tolist()

    def __repr__(self) -> str:
        return f"PList({self.tolist()})"


def init_P(gamma, offset: int = 0, n: int | None = None) -> PList:
    """``p[k] = 1 + offset + sum of the cycle lengths exceeding k``.

    ``gamma`` lists the cycles that are still to be placed; ``offset`` counts
    labels already taken by a seeded cycle.
    """
    lengths = [int(x) for x in gamma]
    if n is None:
        n = sum(lengths) + offset
    vals = np.zeros(n + 1, dtype=np.int64)
    for k in range(1, n + 1):
        vals[k] = 1 + offset + sum(x for x in lengths if x > k)
    return PList(vals)
