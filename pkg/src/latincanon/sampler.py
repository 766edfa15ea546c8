"""Random Latin squares from the Jacobson-Matthews ±1 incidence-cube chain.

Randomness comes from ``numpy.random.Generator(PCG64(seed))``.  Each chain
move consumes exactly three uniforms from that stream, so a given seed gives
the same squares on every platform.

Defaults: burn-in of n³ moves from the cyclic square, then n² moves between
successive samples (extended until the cube is proper again).
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .cycles import _hamiltonian_count
from .latin_core import LatinSquare, _trusted


class OrderTooSmall(ValueError):
    pass


@njit(cache=True)
def _apply(cube, ssum, rsum, csum, r, c, s, d):
    cube[r, c, s] += d
    ssum[r, c] += d * s
    rsum[c, s] += d * r
    csum[r, s] += d * c


@njit(cache=True)
def _move(cube, ssum, rsum, csum, imp, u0, u1, u2):
    """One chain move; ``imp`` is [flag, r, c, s] for the -1 cell."""
    n = cube.shape[0]
    if imp[0] == 0:
        r = int(u0 * n)
        c = int(u1 * n)
        cur = ssum[r, c]
        s = int(u2 * (n - 1))
        if s >= cur:
            s += 1
        # proper cube: every line has a single 1, read off the running sums
        s1 = cur
        r1 = rsum[c, s]
        c1 = csum[r, s]
    else:
        r = imp[1]
        c = imp[2]
        s = imp[3]
        # improper cell: each line through it holds two 1s, pick one
        want = 1 if u0 < 0.5 else 2
        seen = 0
        r1 = -1
        for x in range(n):
            if cube[x, c, s] == 1:
                seen += 1
                if seen == want:
                    r1 = x
                    break
        want = 1 if u1 < 0.5 else 2
        seen = 0
        c1 = -1
        for x in range(n):
            if cube[r, x, s] == 1:
                seen += 1
                if seen == want:
                    c1 = x
                    break
        want = 1 if u2 < 0.5 else 2
        seen = 0
        s1 = -1
        for x in range(n):
            if cube[r, c, x] == 1:
                seen += 1
                if seen == want:
                    s1 = x
                    break
    _apply(cube, ssum, rsum, csum, r, c, s, 1)
    _apply(cube, ssum, rsum, csum, r, c1, s1, 1)
    _apply(cube, ssum, rsum, csum, r1, c, s1, 1)
    _apply(cube, ssum, rsum, csum, r1, c1, s, 1)
    _apply(cube, ssum, rsum, csum, r, c, s1, -1)
    _apply(cube, ssum, rsum, csum, r, c1, s, -1)
    _apply(cube, ssum, rsum, csum, r1, c, s, -1)
    _apply(cube, ssum, rsum, csum, r1, c1, s1, -1)
    if cube[r1, c1, s1] < 0:
        imp[0] = 1
        imp[1] = r1
        imp[2] = c1
        imp[3] = s1
    else:
        imp[0] = 0


@njit(cache=True)
def _run(cube, ssum, rsum, csum, imp, u, min_moves):
    """Apply moves from ``u`` until ``min_moves`` are done and the cube is proper.

    Returns the number of rows of ``u`` consumed.
    """
    m = u.shape[0]
    t = 0
    while t < m:
        if t >= min_moves and imp[0] == 0:
            return t
        _move(cube, ssum, rsum, csum, imp, u[t, 0], u[t, 1], u[t, 2])
        t += 1
    return t


@dataclass
class IncidenceCube:
    """n×n×n array over {-1, 0, 1} with every line summing to 1.

    ``improper_cell`` is the unique -1 entry (zero-based), if any.
    """

    n: int
    cube: np.ndarray
    ssum: np.ndarray
    rsum: np.ndarray
    csum: np.ndarray
    imp: np.ndarray

    @classmethod
    def from_square(cls, L: LatinSquare) -> "IncidenceCube":
        n = L.n
        cube = np.zeros((n, n, n), dtype=np.int8)
        r, c = np.indices((n, n))
        cube[r, c, L.g0] = 1
        return cls(
            n=n,
            cube=cube,
            ssum=L.g0.copy(),
            rsum=np.ascontiguousarray(L.colpos0.copy()),
            csum=np.ascontiguousarray(L.rowpos0.copy()),
            imp=np.zeros(4, dtype=np.int64),
        )

    @property
    def improper_cell(self) -> tuple[int, int, int] | None:
        if self.imp[0] == 0:
            return None
        return int(self.imp[1]), int(self.imp[2]), int(self.imp[3])

    @property
    def is_proper(self) -> bool:
        return self.imp[0] == 0

    def line_sums_ok(self) -> bool:
        c = self.cube.astype(np.int64)
        return bool((c.sum(0) == 1).all() and (c.sum(1) == 1).all() and (c.sum(2) == 1).all())

    def minus_count(self) -> int:
        return int((self.cube < 0).sum())

    def to_square(self) -> LatinSquare:
        if not self.is_proper:
            raise ValueError("cube is improper")
        return _trusted(self.ssum + 1)


def jm_step(cube: IncidenceCube, rng: np.random.Generator) -> IncidenceCube:
    """Apply one ±1 move in place and return the cube."""
    u = rng.random(3)
    _move(cube.cube, cube.ssum, cube.rsum, cube.csum, cube.imp, u[0], u[1], u[2])
    return cube


def _advance(cube: IncidenceCube, rng: np.random.Generator, moves: int, chunk: int = 1 << 18) -> None:
    remaining = moves
    while True:
        want = max(min(remaining, chunk), cube.n)
        u = rng.random((want, 3))
        used = _run(cube.cube, cube.ssum, cube.rsum, cube.csum, cube.imp, u, remaining)
        remaining = max(remaining - used, 0)
        if remaining == 0 and cube.is_proper:
            return


class JMChain:
    """A single Jacobson-Matthews chain yielding successive proper squares."""

    def __init__(self, n: int, seed: int, burn_in: int | None = None, spacing: int | None = None):
        if n < 2:
            raise OrderTooSmall("need n >= 2")
        from .latin_core import cyclic_square

        self.n = n
        self.rng = np.random.Generator(np.random.PCG64(seed))
        self.cube = IncidenceCube.from_square(cyclic_square(n))
        self.spacing = n * n if spacing is None else spacing
        _advance(self.cube, self.rng, n ** 3 if burn_in is None else burn_in)
        self._fresh = True

    def sample(self) -> LatinSquare:
        if not self._fresh:
            _advance(self.cube, self.rng, self.spacing)
        self._fresh = False
        return self.cube.to_square()

    def __iter__(self):
        while True:
            yield self.sample()


def jm_sample(n: int, seed: int, burn_in: int | None = None) -> LatinSquare:
    """One square from a fresh chain after burn-in."""
    return JMChain(n, seed, burn_in=burn_in).sample()


@dataclass(frozen=True)
class HStats:
    order: int
    samples: int
    min: int
    max: int
    mode: int
    mean: float
    stddev: float

    COLUMNS = ("Order", "Min", "Max", "Mode", "Mean", "StdDev")

    def row(self) -> str:
        return (f"{self.order:>5} {self.min:>5} {self.max:>5} {self.mode:>5} "
                f"{self.mean:>7.2f} {self.stddev:>7.3f}")

    @classmethod
    def header(cls) -> str:
        return f"{'Order':>5} {'Min':>5} {'Max':>5} {'Mode':>5} {'Mean':>7} {'StdDev':>7}"

    def keyvalues(self) -> str:
        return "\n".join([
            f"order={self.order}", f"samples={self.samples}", f"min={self.min}",
            f"max={self.max}", f"mode={self.mode}", f"mean={self.mean:.6f}",
            f"stddev={self.stddev:.6f}",
        ])


def _h_tally(n: int, samples: int, seed: int, burn_in: int | None, spacing: int | None) -> Counter:
    chain = JMChain(n, seed, burn_in=burn_in, spacing=spacing)
    tally: Counter = Counter()
    for _ in range(samples):
        L = chain.sample()
        tally[int(_hamiltonian_count(L.g0, L.rowpos0))] += 1
    return tally


def stats_from_tally(n: int, tally: Counter) -> HStats:
    total = sum(tally.values())
    if total < 1:
        raise ValueError("need at least one sample")
    mean = sum(h * c for h, c in tally.items()) / total
    var = sum(c * (h - mean) ** 2 for h, c in tally.items()) / (total - 1) if total > 1 else 0.0
    top = max(tally.values())
    mode = min(h for h, c in tally.items() if c == top)
    return HStats(n, total, min(tally), max(tally), mode, mean, math.sqrt(var))


def h_statistics(n: int, samples: int, seed: int, *, chains: int = 1, jobs: int = 1,
                 burn_in: int | None = None, spacing: int | None = None) -> HStats:
    """Distribution of the Hamiltonian row-cycle count H over sampled squares.

    Samples are split across ``chains`` independent chains seeded from
    ``seed``; ``jobs`` only sets how many run at once, so it never changes
    the result.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    chains = max(1, min(chains, samples))
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(chains)]
    sizes = [samples // chains + (1 if k < samples % chains else 0) for k in range(chains)]
    args = [(n, sz, sd, burn_in, spacing) for sz, sd in zip(sizes, seeds)]
    if jobs > 1 and chains > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            tallies = list(ex.map(_h_tally, *zip(*args)))
    else:
        tallies = [_h_tally(*a) for a in args]
    total: Counter = Counter()
    for t in tallies:
        total.update(t)
    return stats_from_tally(n, total)
