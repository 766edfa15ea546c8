"""Canonical labelling of Latin squares up to isotopism.

The search fixes a pair of rows with lexicographically maximum cycle
structure, puts one longest row cycle of that pair into standard form, and
grows the labelling one row cycle at a time until the labelled part closes
up into a subsquare.  If the subsquare is proper it branches again on the
longest cycles left in the two rows.  The canonical form is the
lexicographically least completed square over every leaf of every pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _search as K
from .cycles import CycleTable, PList, cycle_length_table
from .latin_core import (
    CONJUGATES,
    LatinSquare,
    Order,
    PartialLabelling,
    PartialPermutation,
    _trusted,
    conjugate,
    lex_compare,
)


class SearchError(RuntimeError):
    """Raised when the search reaches a state its invariants rule out."""


class NoUnlabelledCycle(SearchError):
    pass


class AlreadyLabelled(ValueError):
    pass


class OrderMismatch(ValueError):
    pass


def succ(x: int, y: int) -> tuple[int, int]:
    """Next cell in the order that finishes each k×k corner before leaving it."""
    if x < 1 or y < 1:
        raise ValueError("cells are 1-based")
    return K.succ_k(x, y)


_MODES = {"latin": K.MODE_LATIN, "sts": K.MODE_STS, "1f": K.MODE_1F}


@dataclass
class SearchState:
    """Live state of one search rooted at an ordered row pair.

    Kernels mutate the arrays in place.  ``checkpoint``/``restore`` roll the
    labelling, P, curt, the T-lists and c1 back together.
    """

    L: LatinSquare
    pair: tuple[int, int]
    mode: int
    ell: np.ndarray
    lab: np.ndarray
    T: np.ndarray
    p: np.ndarray
    pinit: np.ndarray
    meta: np.ndarray
    counters: np.ndarray = field(default_factory=lambda: np.zeros(K.N_COUNTERS, dtype=np.int64))
    depth_hist: np.ndarray | None = None

    @classmethod
    def start(cls, L: LatinSquare, i: int, j: int, mode: str = "latin",
              table: CycleTable | None = None) -> "SearchState":
        if i == j:
            raise ValueError("rows must differ")
        table = table or cycle_length_table(L)
        n = L.n
        st = cls(
            L=L,
            pair=(i, j),
            mode=_MODES[mode],
            ell=np.ascontiguousarray(table.ell0[i - 1, j - 1]),
            lab=np.empty((3, n), dtype=np.int64),
            T=np.empty((3, n), dtype=np.int64),
            p=np.zeros(n + 2, dtype=np.int64),
            pinit=np.zeros(n + 2, dtype=np.int64),
            meta=np.zeros(4, dtype=np.int64),
            depth_hist=np.zeros(n + 2, dtype=np.int64),
        )
        K.seed_k(L.g0, i - 1, j - 1, st.ell, st.lab, st.T, st.p, st.pinit, st.meta, st.mode)
        return st

    @property
    def n(self) -> int:
        return self.L.n

    @property
    def curt(self) -> int:
        return int(self.meta[0])

    @property
    def c1(self) -> int | None:
        c = int(self.meta[1])
        return None if c < 0 else c + 1

    @property
    def P(self) -> PList:
        # stored zero-based; P holds 1-based labels
        vals = self.p[: self.n + 1] + 1
        vals[0] = 0
        return PList(vals)

    def _tlist(self, q: int) -> list[int]:
        return [int(x) + 1 for x in self.T[q, : self.curt]]

    @property
    def T_alpha(self) -> list[int]:
        return self._tlist(0)

    @property
    def T_beta(self) -> list[int]:
        return self._tlist(0 if self.mode == K.MODE_STS else 1)

    @property
    def T_gamma(self) -> list[int]:
        return self._tlist(0 if self.mode == K.MODE_STS else 2)

    @property
    def labelling(self) -> PartialLabelling:
        a = PartialPermutation.from_zero_based(self.lab[0])
        if self.mode == K.MODE_STS:
            return PartialLabelling(a, a, a)
        return PartialLabelling(
            a,
            PartialPermutation.from_zero_based(self.lab[1]),
            PartialPermutation.from_zero_based(self.lab[2]),
        )

    def is_labelled(self, s: int) -> bool:
        q = 0 if self.mode == K.MODE_STS else 2
        return int(self.lab[q, s - 1]) != self.n

    def checkpoint(self) -> int:
        return self.curt

    def restore(self, cp: int) -> None:
        K.undo_k(self.ell, self.lab, self.T, self.p, self.meta, cp, self.mode)

    def _args(self):
        i, j = self.pair
        return self.L.g0, self.L.rowpos0, self.L.colpos0, i - 1, j - 1, self.ell


@dataclass
class BranchResult:
    labelling: PartialLabelling | None
    form: LatinSquare | None
    leaves: int


@dataclass
class CanonicalResult:
    labelling: PartialLabelling
    form: LatinSquare
    leaves: int
    stats: dict = field(default_factory=dict)


def label_row_cycle(state: SearchState, s: int) -> SearchState:
    """Label the (i, j) row cycle through symbol ``s`` in standard form."""
    if state.mode == K.MODE_STS:
        raise ValueError("use steiner.label_inverse_pair for Steiner states")
    if state.is_labelled(s):
        raise AlreadyLabelled(f"symbol {s} is already labelled")
    g0, rp, cp, i, j, ell = state._args()
    K.label_row_cycle_k(g0, rp, cp, i, j, ell, state.lab, state.T, state.p, state.pinit,
                        state.meta, s - 1, state.counters, state.mode)
    return state


def extend(state: SearchState) -> SearchState:
    """Label row cycles until the labelled rows and columns form a subsquare."""
    g0, rp, cp, i, j, ell = state._args()
    K.extend_k(g0, rp, cp, i, j, ell, state.lab, state.T, state.p, state.pinit,
               state.meta, state.counters, state.mode)
    return state


def _to_labelling(best_lab: np.ndarray, mode: int) -> PartialLabelling:
    a = PartialPermutation.from_zero_based(best_lab[0])
    if mode == K.MODE_STS:
        return PartialLabelling(a, a, a)
    return PartialLabelling(a, PartialPermutation.from_zero_based(best_lab[1]),
                            PartialPermutation.from_zero_based(best_lab[2]))


def branch(state: SearchState) -> BranchResult:
    """Best completion of ``state`` over all branch choices; ``state`` is left unchanged."""
    n = state.n
    if state.curt >= n:
        raise ValueError("state is already a complete labelling")
    best = np.full((n, n), n, dtype=np.int64)
    best_lab = np.full((3, n), n, dtype=np.int64)
    have = np.zeros(1, dtype=np.int64)
    before = int(state.counters[K.C_LEAVES])
    g0, rp, cp, i, j, ell = state._args()
    rc = K.branch_k(g0, rp, cp, i, j, ell, state.lab, state.T, state.p, state.pinit, state.meta,
                    best, best_lab, have, state.counters, state.depth_hist, 0, state.mode)
    if rc != 0:
        raise NoUnlabelledCycle("branch point with no unlabelled row cycle")
    leaves = int(state.counters[K.C_LEAVES]) - before
    if not have[0]:
        return BranchResult(None, None, leaves)
    return BranchResult(_to_labelling(best_lab, state.mode), _trusted(best + 1), leaves)


def _stats(counters: np.ndarray, depth_hist: np.ndarray, pairs: int) -> dict:
    hist = {d: int(c) for d, c in enumerate(depth_hist) if c}
    return {
        "pairs": pairs,
        "leaves": int(counters[K.C_LEAVES]),
        "nodes": int(counters[K.C_NODES]),
        "label_calls": int(counters[K.C_LABEL_CALLS]),
        "scans": int(counters[K.C_SCANS]),
        "max_depth": int(counters[K.C_MAX_DEPTH]),
        "depth_hist": hist,
        "doubling_violations": int(counters[K.C_DOUBLING_VIOLATIONS]),
        "p_violations": int(counters[K.C_P_VIOLATIONS]),
        "alpha_beta_violations": int(counters[K.C_ALPHA_BETA_VIOLATIONS]),
    }


def run_search(L: LatinSquare, mode: int, table: CycleTable | None = None,
               pairs: np.ndarray | None = None) -> CanonicalResult:
    """Drive the compiled search over ``pairs`` (default: all of R_max)."""
    n = L.n
    table = table or cycle_length_table(L)
    if pairs is None:
        pairs = table.r_max0()
    best = np.full((n, n), n, dtype=np.int64)
    best_lab = np.full((3, n), n, dtype=np.int64)
    counters = np.zeros(K.N_COUNTERS, dtype=np.int64)
    depth_hist = np.zeros(n + 2, dtype=np.int64)
    rc = K.canonical_k(L.g0, L.rowpos0, L.colpos0, table.ell0, pairs, best, best_lab,
                       counters, depth_hist, mode)
    if rc != 0:
        raise NoUnlabelledCycle("branch point with no unlabelled row cycle")
    return CanonicalResult(
        labelling=_to_labelling(best_lab, mode),
        form=_trusted(best + 1),
        leaves=int(counters[K.C_LEAVES]),
        stats=_stats(counters, depth_hist, len(pairs)),
    )


def canonical_labelling(L: LatinSquare) -> CanonicalResult:
    """Canonical isotopism of ``L`` and the resulting representative."""
    if L.n == 1:
        e = PartialLabelling.identity(1)
        return CanonicalResult(e, L, 1, {"pairs": 0, "leaves": 1})
    return run_search(L, K.MODE_LATIN)


def canonical_form(L: LatinSquare) -> LatinSquare:
    return canonical_labelling(L).form


def same_isotopism_class(L1: LatinSquare, L2: LatinSquare) -> bool:
    if L1.n != L2.n:
        raise OrderMismatch(f"orders differ: {L1.n} and {L2.n}")
    return canonical_form(L1) == canonical_form(L2)


def species_canonical(L: LatinSquare) -> LatinSquare:
    """Least canonical form over the six conjugates: a species invariant."""
    best = None
    for sigma in CONJUGATES:
        form = canonical_form(conjugate(L, sigma))
        if best is None or lex_compare(form, best) is Order.LT:
            best = form
    return best
