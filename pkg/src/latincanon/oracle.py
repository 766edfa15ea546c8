"""Brute-force ground truth for small cases.

Nothing here shares code with the canonical search: isotopism testing runs
over explicit permutations, subsquares come from closing 2×2 seeds (plus a
full subset scan at small orders), and Steiner and 1-factorisation
isomorphism use direct point permutation search.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np
from numba import njit

from .canonical import OrderMismatch
from .cycles import longest_cycle
from .latin_core import LatinSquare
from .onefact import FactorSet
from .steiner import BlockSet, sts_to_quasigroup


class OrderTooLarge(ValueError):
    pass


# ---------------------------------------------------------------------------
# Isotopism
# ---------------------------------------------------------------------------


def brute_isotopic(L1: LatinSquare, L2: LatinSquare) -> bool:
    """Exhaustive isotopism test over all row and column permutations.

    For each α the candidate γ is read off row 1 for every β at once,
    then checked on the whole square.
    """
    n = L1.n
    if L2.n != n:
        raise OrderMismatch(f"orders differ: {n} and {L2.n}")
    if n > 6:
        raise OrderTooLarge(f"brute force is limited to n <= 6, got {n}")
    if n == 0:
        return True
    A = L1.g0
    P = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    m = len(P)
    rows = np.arange(m)[:, None]
    for alpha in P:
        Ba = L2.g0[alpha]
        # γ(A[0, c]) = Ba[0, β(c)]
        G = np.empty((m, n), dtype=np.int64)
        G[rows, A[0][None, :]] = Ba[0][P]
        lhs = G[:, A]                      # (m, n, n): γ(A[r, c])
        rhs = Ba[:, P].transpose(1, 0, 2)  # (m, n, n): Ba[r, β(c)]
        if (lhs == rhs).all(axis=(1, 2)).any():
            return True
    return False


def brute_isotopy_classes(squares) -> list[list[int]]:
    """Partition ``squares`` (indices) into isotopy classes with :func:`brute_isotopic`."""
    reps: list[LatinSquare] = []
    classes: list[list[int]] = []
    for k, L in enumerate(squares):
        for c, R in enumerate(reps):
            if brute_isotopic(R, L):
                classes[c].append(k)
                break
        else:
            reps.append(L)
            classes.append([k])
    return classes


# ---------------------------------------------------------------------------
# Subsquares
# ---------------------------------------------------------------------------


@njit(cache=True)
def _close(g0, rowpos0, colpos0, seed, inset, lists, cap):
    """Close rows/cols ``seed`` under the subsquare property.

    ``inset[t, x]`` marks membership (t = 0 rows, 1 cols, 2 symbols) and
    ``lists[t]`` records members in insertion order.  Returns the order of
    the closure, or 0 as soon as any part exceeds ``cap``.
    """
    n = g0.shape[0]
    for t in range(3):
        for x in range(n):
            inset[t, x] = False
    cnt = np.zeros(3, dtype=np.int64)
    queue_t = np.empty(3 * n, dtype=np.int64)
    queue_x = np.empty(3 * n, dtype=np.int64)
    qn = 0
    for k in range(4):
        t = 0 if k < 2 else 1
        x = seed[k]
        if not inset[t, x]:
            inset[t, x] = True
            lists[t, cnt[t]] = x
            cnt[t] += 1
            queue_t[qn] = t
            queue_x[qn] = x
            qn += 1
    q = 0
    while q < qn:
        t = queue_t[q]
        x = queue_x[q]
        q += 1
        # the element pairs with every current member of the other two kinds
        for u in range(3):
            if u == t:
                continue
            for k in range(cnt[u]):
                y = lists[u, k]
                if t == 0:
                    r = x
                elif u == 0:
                    r = y
                else:
                    r = -1
                if t == 1:
                    c = x
                elif u == 1:
                    c = y
                else:
                    c = -1
                if t == 2:
                    s = x
                elif u == 2:
                    s = y
                else:
                    s = -1
                if s < 0:
                    w, z = 2, g0[r, c]
                elif c < 0:
                    w, z = 1, rowpos0[r, s]
                else:
                    w, z = 0, colpos0[c, s]
                if not inset[w, z]:
                    if cnt[w] >= cap:
                        return 0
                    inset[w, z] = True
                    lists[w, cnt[w]] = z
                    cnt[w] += 1
                    queue_t[qn] = w
                    queue_x[qn] = z
                    qn += 1
    if cnt[0] != cnt[1] or cnt[1] != cnt[2]:
        return 0
    return cnt[0]


@njit(cache=True)
def _seed_orders(g0, rowpos0, colpos0, cap):
    """Order of the closure of every 2×2 seed (0 when it is not proper)."""
    n = g0.shape[0]
    m = n * (n - 1) // 2
    out = np.zeros((m, m), dtype=np.int64)
    inset = np.zeros((3, n), dtype=np.bool_)
    lists = np.zeros((3, n), dtype=np.int64)
    seed = np.zeros(4, dtype=np.int64)
    a = 0
    for r1 in range(n):
        for r2 in range(r1 + 1, n):
            b = 0
            for c1 in range(n):
                for c2 in range(c1 + 1, n):
                    seed[0] = r1
                    seed[1] = r2
                    seed[2] = c1
                    seed[3] = c2
                    out[a, b] = _close(g0, rowpos0, colpos0, seed, inset, lists, cap)
                    b += 1
            a += 1
    return out


@dataclass(frozen=True)
class Subsquare:
    rows: frozenset[int]
    cols: frozenset[int]
    symbols: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.rows)


@dataclass
class SubsquareReport:
    subsquares: list[Subsquare]
    largest_proper: int

    def count(self, order: int) -> int:
        return sum(1 for S in self.subsquares if S.order == order)


def _is_subsquare(L: LatinSquare, rows, cols) -> bool:
    block = L.g0[np.ix_(rows, cols)]
    return len(np.unique(block)) == len(rows)


def exhaustive_subsquares(L: LatinSquare) -> SubsquareReport:
    """Every proper subsquare of order >= 2 by scanning row and column subsets (n <= 8)."""
    n = L.n
    if n > 8:
        raise OrderTooLarge("exhaustive subsquare scan is limited to n <= 8")
    found = []
    for m in range(2, n // 2 + 1):
        for R in itertools.combinations(range(n), m):
            for C in itertools.combinations(range(n), m):
                if _is_subsquare(L, list(R), list(C)):
                    syms = frozenset(int(x) + 1 for x in np.unique(L.g0[np.ix_(R, C)]))
                    found.append(Subsquare(frozenset(x + 1 for x in R), frozenset(x + 1 for x in C), syms))
    largest = max((S.order for S in found), default=1)
    return SubsquareReport(found, largest)


def closure_subsquares(L: LatinSquare) -> SubsquareReport:
    """Proper subsquares generated by some 2×2 seed, deduplicated."""
    n = L.n
    if n < 2:
        raise ValueError("need n >= 2")
    cap = n // 2
    orders = _seed_orders(L.g0, L.rowpos0, L.colpos0, cap)
    pairs = list(itertools.combinations(range(n), 2))
    found = {}
    inset = np.zeros((3, n), dtype=np.bool_)
    lists = np.zeros((3, n), dtype=np.int64)
    for a, b in zip(*np.nonzero(orders)):
        seed = np.array(pairs[a] + pairs[b], dtype=np.int64)
        k = _close(L.g0, L.rowpos0, L.colpos0, seed, inset, lists, cap)
        parts = [frozenset(int(x) + 1 for x in lists[t, :k]) for t in range(3)]
        S = Subsquare(*parts)
        found[(S.rows, S.cols)] = S
    subs = sorted(found.values(), key=lambda S: (-S.order, sorted(S.rows), sorted(S.cols)))
    largest = max((S.order for S in subs), default=1)
    return SubsquareReport(subs, largest)


def enumerate_subsquares(L: LatinSquare) -> SubsquareReport:
    """Seed-closure enumeration, checked against the exhaustive scan when n <= 8.

    Beyond order 8 the result is only known to be a lower bound.
    """
    rep = closure_subsquares(L)
    if L.n <= 8:
        ex = exhaustive_subsquares(L)
        if ex.largest_proper != rep.largest_proper:
            raise AssertionError(
                f"closure ({rep.largest_proper}) and exhaustive ({ex.largest_proper}) disagree"
            )
    return rep


# ---------------------------------------------------------------------------
# Steiner triple systems
# ---------------------------------------------------------------------------


def brute_isomorphic_sts(B1: BlockSet, B2: BlockSet) -> bool:
    """Point-permutation backtracking; each new image is checked against every product."""
    n = B1.n
    if B2.n != n:
        return False
    if n > 9:
        raise OrderTooLarge(f"brute force is limited to n <= 9, got {n}")
    if len(B1.blocks) != len(B2.blocks):
        return False
    if n == 0:
        return True
    S1 = sts_to_quasigroup(B1).g0
    S2 = sts_to_quasigroup(B2).g0
    phi = [-1] * n
    used = [False] * n

    def ok(x: int) -> bool:
        for y in range(x):
            z = S1[x, y]
            if phi[z] >= 0 and S2[phi[x], phi[y]] != phi[z]:
                return False
        return True

    def rec(x: int) -> bool:
        if x == n:
            return True
        for t in range(n):
            if used[t]:
                continue
            phi[x] = t
            used[t] = True
            if ok(x) and rec(x + 1):
                return True
            used[t] = False
        phi[x] = -1
        return False

    return rec(0)


# ---------------------------------------------------------------------------
# 1-factorisations
# ---------------------------------------------------------------------------


def brute_isomorphic_1f(F1: FactorSet, F2: FactorSet) -> bool:
    """Try every vertex permutation (v <= 8)."""
    if F1.v != F2.v:
        raise OrderMismatch(f"vertex counts differ: {F1.v} and {F2.v}")
    if F1.v > 8:
        raise OrderTooLarge("brute force is limited to v <= 8")
    target = F2.key()
    return any(F1.relabel(p).key() == target
               for p in itertools.permutations(range(1, F1.v + 1)))


def brute_classes_1f(factorisations) -> list[list[int]]:
    """Vertex-permutation classes of a list of factorisations of one K_v.

    Each new representative's orbit is generated in full, so the cost is
    v! relabellings per class rather than per pair.
    """
    items = list(factorisations)
    if not items:
        return []
    v = items[0].v
    if v > 8:
        raise OrderTooLarge("brute force is limited to v <= 8")
    where: dict = {}
    for k, F in enumerate(items):
        where.setdefault(F.key(), []).append(k)
    seen = [False] * len(items)
    classes = []
    perms = list(itertools.permutations(range(1, v + 1)))
    for k, F in enumerate(items):
        if seen[k]:
            continue
        members = []
        orbit = {F.relabel(p).key() for p in perms}
        for key in orbit:
            for idx in where.get(key, ()):
                if not seen[idx]:
                    seen[idx] = True
                    members.append(idx)
        classes.append(sorted(members))
    return classes


# ---------------------------------------------------------------------------
# Probe: longest row cycle against largest proper subsquare
# ---------------------------------------------------------------------------


@dataclass
class ProbeReport:
    order: int
    rows: list[tuple[int, int]]  # (longest cycle, largest proper subsquare)

    @property
    def fraction(self) -> float:
        return sum(1 for ell, m in self.rows if ell > m) / len(self.rows)

    def distribution(self) -> dict[tuple[int, int], int]:
        return dict(sorted(Counter(self.rows).items()))

    def text(self) -> str:
        lines = [f"order={self.order}", f"samples={len(self.rows)}",
                 f"fraction_longest_cycle_exceeds_subsquare={self.fraction:.4f}",
                 "longest_cycle largest_proper count"]
        lines += [f"{a} {b} {c}" for (a, b), c in self.distribution().items()]
        return "\n".join(lines)


def probe_square(L: LatinSquare) -> tuple[int, int]:
    return longest_cycle(L), closure_subsquares(L).largest_proper


def _probe_chain(n: int, samples: int, seed: int) -> list[tuple[int, int]]:
    from .sampler import JMChain

    chain = JMChain(n, seed)
    return [probe_square(chain.sample()) for _ in range(samples)]


def longest_cycle_vs_subsquare(n: int, samples: int, seed: int, *, chains: int = 1,
                               jobs: int = 1) -> ProbeReport:
    """Sample squares and pair each one's longest row cycle with its largest proper subsquare.

    As with the H statistics, ``jobs`` never changes the result.
    """
    if n > 60:
        raise OrderTooLarge("probe is limited to n <= 60")
    if samples < 1:
        raise ValueError("need at least one sample")
    if chains == 1:
        return ProbeReport(n, _probe_chain(n, samples, seed))
    chains = min(chains, samples)
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(chains)]
    sizes = [samples // chains + (1 if k < samples % chains else 0) for k in range(chains)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_probe_chain, [n] * chains, sizes, seeds))
    else:
        parts = [_probe_chain(n, sz, sd) for sz, sd in zip(sizes, seeds)]
    return ProbeReport(n, [row for part in parts for row in part])
