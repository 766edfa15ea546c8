"""Latin squares, partial labellings and the lexicographic order on arrays.

Rows, columns and symbols are 1-based in every public interface.  The
unlabelled marker (written ``★`` in the docs) is encoded as ``n + 1`` so
that the extended order ``x < ★`` is plain integer order.

Internally the numeric kernels work on zero-based copies of the grid; those
live on :class:`LatinSquare` as ``g0``, ``rowpos0`` and ``colpos0``.
"""

from __future__ import annotations

import enum
import itertools
import re
import string
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class LatinError(ValueError):
    """Base class for invalid Latin square input."""


class DuplicateInRow(LatinError):
    def __init__(self, row: int):
        super().__init__(f"duplicate symbol in row {row}")
        self.row = row


class DuplicateInColumn(LatinError):
    def __init__(self, col: int):
        super().__init__(f"duplicate symbol in column {col}")
        self.col = col


class OutOfRange(LatinError):
    def __init__(self, row: int, col: int):
        super().__init__(f"entry at ({row}, {col}) is not in 1..n")
        self.row = row
        self.col = col


class NotSquare(LatinError):
    pass


class ParseError(LatinError):
    def __init__(self, line: int, reason: str = "malformed row"):
        super().__init__(f"line {line}: {reason}")
        self.line = line


class SizeMismatch(LatinError):
    pass


class DimensionMismatch(LatinError):
    pass


class Order(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


class LatinSquare:
    """An immutable, validated Latin square of order ``n``.

    ``grid[r-1, c-1]`` is the symbol in row ``r``, column ``c``.  The inverse
    tables answer "which column of row r holds s" and "which row of column c
    holds s" in O(1); they are built once, here.
    """

    __slots__ = ("n", "grid", "g0", "rowpos0", "colpos0", "_hash")

    def __init__(self, grid, *, _checked: bool = False):
        arr = np.array(grid, dtype=np.int64)
        if not _checked:
            _check_grid(arr)
        n = arr.shape[0]
        self.n = n
        self.grid = arr
        self.grid.setflags(write=False)
        g0 = arr - 1
        rows = np.arange(n)
        rowpos0 = np.empty((n, n), dtype=np.int64)
        colpos0 = np.empty((n, n), dtype=np.int64)
        rowpos0[rows[:, None], g0] = rows[None, :]
        colpos0[rows[None, :], g0] = rows[:, None]
        for a in (g0, rowpos0, colpos0):
            a.setflags(write=False)
        self.g0 = g0
        self.rowpos0 = rowpos0
        self.colpos0 = colpos0
        self._hash = None

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        return int(self.grid[r - 1, c - 1])

    def row_pos(self, r: int, s: int) -> int:
        """Column of row ``r`` that holds symbol ``s``."""
        return int(self.rowpos0[r - 1, s - 1]) + 1

    def col_pos(self, c: int, s: int) -> int:
        """Row of column ``c`` that holds symbol ``s``."""
        return int(self.colpos0[c - 1, s - 1]) + 1

    def rows(self) -> list[list[int]]:
        return self.grid.tolist()

    def triples(self) -> Iterable[tuple[int, int, int]]:
        for r in range(self.n):
            for c in range(self.n):
                yield r + 1, c + 1, int(self.grid[r, c])

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatinSquare):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.grid, other.grid))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.grid.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"LatinSquare(n={self.n}, {compact(self)!r})" if self.n <= 35 else f"LatinSquare(n={self.n})"

    def __str__(self) -> str:
        return serialize(self).rstrip("\n")


def _check_grid(arr: np.ndarray) -> None:
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotSquare(f"expected a non-empty square matrix, got shape {arr.shape}")
    n = arr.shape[0]
    seen_row = np.zeros((n, n + 1), dtype=bool)
    seen_col = np.zeros((n, n + 1), dtype=bool)
    # row-major scan so the first violation is the one reported
    for r in range(n):
        for c in range(n):
            v = int(arr[r, c])
            if v < 1 or v > n:
                raise OutOfRange(r + 1, c + 1)
            if seen_row[r, v]:
                raise DuplicateInRow(r + 1)
            if seen_col[c, v]:
                raise DuplicateInColumn(c + 1)
            seen_row[r, v] = True
            seen_col[c, v] = True


def validate(grid) -> LatinSquare:
    """Check that ``grid`` is a Latin square over 1..n and wrap it."""
    return LatinSquare(grid)


def _trusted(grid: np.ndarray) -> LatinSquare:
    return LatinSquare(grid, _checked=True)


# ---------------------------------------------------------------------------
# Partial permutations and labellings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartialPermutation:
    """Map [n] -> [n] ∪ {★}, injective on the labelled points.

    ``image[x-1]`` is the label of ``x``, or ``n + 1`` when ``x`` is unlabelled.
    """

    image: tuple[int, ...]

    def __post_init__(self):
        n = len(self.image)
        labelled = [v for v in self.image if v != n + 1]
        if any(v < 1 or v > n + 1 for v in self.image):
            raise ValueError("labels must lie in 1..n or be the unlabelled marker n+1")
        if len(set(labelled)) != len(labelled):
            raise ValueError("labels of a partial permutation must be distinct")

    @property
    def n(self) -> int:
        return len(self.image)

    @property
    def star(self) -> int:
        return self.n + 1

    @property
    def size(self) -> int:
        return sum(1 for v in self.image if v != self.star)

    def __len__(self) -> int:
        return self.size

    def __call__(self, x: int) -> int:
        return self.image[x - 1]

    def is_total(self) -> bool:
        return self.size == self.n

    def inverse(self) -> "PartialPermutation":
        out = [self.star] * self.n
        for x, v in enumerate(self.image, start=1):
            if v != self.star:
                out[v - 1] = x
        return PartialPermutation(tuple(out))

    def compose(self, other: "PartialPermutation") -> "PartialPermutation":
        """``self ∘ other`` with ★ absorbing."""
        out = []
        for v in other.image:
            out.append(self.star if v == other.star else self(v))
        return PartialPermutation(tuple(out))

    @classmethod
    def identity(cls, n: int) -> "PartialPermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def empty(cls, n: int) -> "PartialPermutation":
        return cls((n + 1,) * n)

    @classmethod
    def from_zero_based(cls, arr: Sequence[int]) -> "PartialPermutation":
        # zero-based kernels use n as the unlabelled marker
        return cls(tuple(int(v) + 1 for v in arr))

    def zero_based(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.int64) - 1

    def __str__(self) -> str:
        return " ".join("*" if v == self.star else str(v) for v in self.image)


@dataclass(frozen=True)
class PartialLabelling:
    alpha: PartialPermutation
    beta: PartialPermutation
    gamma: PartialPermutation

    @property
    def size(self) -> int:
        a, b, c = self.alpha.size, self.beta.size, self.gamma.size
        if not a == b == c:
            raise SizeMismatch(f"labelling sizes differ: |alpha|={a}, |beta|={b}, |gamma|={c}")
        return a

    def is_isotopism(self) -> bool:
        return self.alpha.is_total() and self.beta.is_total() and self.gamma.is_total()

    @classmethod
    def identity(cls, n: int) -> "PartialLabelling":
        e = PartialPermutation.identity(n)
        return cls(e, e, e)

    @classmethod
    def empty(cls, n: int) -> "PartialLabelling":
        e = PartialPermutation.empty(n)
        return cls(e, e, e)

    @classmethod
    def from_perms(cls, alpha, beta, gamma) -> "PartialLabelling":
        return cls(
            PartialPermutation(tuple(int(x) for x in alpha)),
            PartialPermutation(tuple(int(x) for x in beta)),
            PartialPermutation(tuple(int(x) for x in gamma)),
        )


@dataclass(frozen=True)
class PartialArray:
    """The array on the labelled rows and columns, in label order.

    ``cells`` is ``k × k``; an entry equals ``n + 1`` exactly when the symbol
    underneath is unlabelled.
    """

    n: int
    row_labels: tuple[int, ...]
    col_labels: tuple[int, ...]
    cells: np.ndarray

    @property
    def k(self) -> int:
        return len(self.row_labels)

    @property
    def star(self) -> int:
        return self.n + 1

    def has_star(self) -> bool:
        return bool((self.cells == self.star).any())

    def tolist(self) -> list[list[int]]:
        return self.cells.tolist()

    def to_latin(self) -> LatinSquare:
        if self.has_star() or self.k != self.n:
            raise ValueError("array is not a complete labelling")
        return validate(self.cells)


def apply_labelling(L: LatinSquare, phi: PartialLabelling) -> PartialArray:
    """Image of ``L`` under a partial labelling, restricted to labelled lines."""
    k = phi.size
    n = L.n
    alpha, beta, gamma = phi.alpha, phi.beta, phi.gamma
    rows = sorted((alpha(r), r) for r in range(1, n + 1) if alpha(r) != alpha.star)
    cols = sorted((beta(c), c) for c in range(1, n + 1) if beta(c) != beta.star)
    g = np.asarray(gamma.image + (n + 1,), dtype=np.int64)
    cells = np.empty((k, k), dtype=np.int64)
    if k:
        ridx = np.array([r for _, r in rows]) - 1
        cidx = np.array([c for _, c in cols]) - 1
        cells[:, :] = g[L.g0[np.ix_(ridx, cidx)]]
    cells.setflags(write=False)
    return PartialArray(n, tuple(a for a, _ in rows), tuple(b for b, _ in cols), cells)


def apply_isotopism(L: LatinSquare, alpha, beta, gamma) -> LatinSquare:
    """Image of ``L`` under a full isotopism given as 1-based sequences."""
    a = np.asarray(alpha, dtype=np.int64) - 1
    b = np.asarray(beta, dtype=np.int64) - 1
    c = np.asarray(gamma, dtype=np.int64)
    out = np.empty_like(L.grid)
    out[np.ix_(a, b)] = c[L.g0]
    return validate(out)


def _cells(x) -> np.ndarray:
    if isinstance(x, LatinSquare):
        return x.grid
    if isinstance(x, PartialArray):
        return x.cells
    return np.asarray(x, dtype=np.int64)


def lex_compare(A, B) -> Order:
    """Row-major comparison of two equal-shaped arrays; ★ is the largest value."""
    a, b = _cells(A), _cells(B)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot compare shapes {a.shape} and {b.shape}")
    fa, fb = a.ravel(), b.ravel()
    diff = np.flatnonzero(fa != fb)
    if diff.size == 0:
        return Order.EQ
    i = diff[0]
    return Order.LT if fa[i] < fb[i] else Order.GT


# ---------------------------------------------------------------------------
# Conjugates
# ---------------------------------------------------------------------------

CONJUGATES = ("rcs", "rsc", "crs", "csr", "src", "scr")


def conjugate(L: LatinSquare, sigma: str | Sequence[int] = "rcs") -> LatinSquare:
    """Permute the roles of rows, columns and symbols.

    ``sigma`` names, for the new (row, column, symbol), which old coordinate
    it is taken from: ``"scr"`` makes old symbols the new rows and old rows
    the new symbols.  A tuple of indices into (r, c, s) is accepted too.
    """
    if isinstance(sigma, str):
        try:
            idx = tuple("rcs".index(ch) for ch in sigma)
        except ValueError:
            raise ValueError(f"bad conjugate {sigma!r}") from None
    else:
        idx = tuple(int(x) for x in sigma)
    if sorted(idx) != [0, 1, 2]:
        raise ValueError(f"bad conjugate {sigma!r}")
    n = L.n
    r, c = np.indices((n, n))
    coords = (r.ravel(), c.ravel(), L.g0.ravel())
    out = np.empty((n, n), dtype=np.int64)
    out[coords[idx[0]], coords[idx[1]]] = coords[idx[2]] + 1
    return _trusted(out)


def inverse_conjugate(sigma: str) -> str:
    idx = ["rcs".index(ch) for ch in sigma]
    inv = [0, 0, 0]
    for pos, src in enumerate(idx):
        inv[src] = pos
    return "".join("rcs"[i] for i in inv)


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

_DIGITS = string.digits + string.ascii_lowercase
_COMPACT = re.compile(r"^\s*(\d+):([0-9a-zA-Z]+)\s*$")


def parse(text: str) -> LatinSquare:
    """Read one row per line of space-separated symbols, or the compact form."""
    m = _COMPACT.match(text)
    if m:
        return parse_compact(text)
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(lineno, "non-integer entry") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(lineno, f"expected {width} entries, got {len(row)}")
        rows.append(row)
    if not rows:
        raise ParseError(1, "empty input")
    if len(rows) != width:
        raise ParseError(len(rows), f"{len(rows)} rows but {width} columns")
    return validate(rows)


def serialize(L: LatinSquare) -> str:
    return "".join(" ".join(str(v) for v in row) + "\n" for row in L.grid.tolist())


def compact(L: LatinSquare) -> str:
    """``n:`` followed by one base-(n+1) digit per cell, row-major."""
    if L.n > 35:
        raise ValueError("compact format needs n <= 35")
    return f"{L.n}:" + "".join(_DIGITS[v] for v in L.grid.ravel().tolist())


def parse_compact(text: str) -> LatinSquare:
    m = _COMPACT.match(text)
    if not m:
        raise ParseError(1, "not in n:digits form")
    n = int(m.group(1))
    body = m.group(2).lower()
    if n < 1 or n > 35 or len(body) != n * n:
        raise ParseError(1, f"expected {n * n} digits for order {n}")
    try:
        vals = [_DIGITS.index(ch) for ch in body]
    except ValueError:
        raise ParseError(1, "bad digit") from None
    if any(v > n for v in vals):
        raise ParseError(1, f"digit exceeds base {n + 1}")
    return validate(np.array(vals).reshape(n, n))


# ---------------------------------------------------------------------------
# Standard squares
# ---------------------------------------------------------------------------


def cyclic_square(n: int) -> LatinSquare:
    """Cayley table of Z_n on symbols 1..n."""
    r, c = np.indices((n, n))
    return _trusted((r + c) % n + 1)


def elementary_abelian_square(n: int) -> LatinSquare:
    """Cayley table of (Z_2)^m for n = 2^m, with XOR as the operation."""
    if n < 1 or n & (n - 1):
        raise ValueError("order must be a power of two")
    r, c = np.indices((n, n))
    return _trusted((r ^ c) + 1)


def random_isotopism(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Three uniform 1-based permutations."""
    return tuple(rng.permutation(n) + 1 for _ in range(3))


def all_latin_squares(n: int) -> Iterable[LatinSquare]:
    """Every Latin square of order ``n`` by row-by-row backtracking (small n only)."""
    perms = list(itertools.permutations(range(1, n + 1)))
    rows: list[tuple[int, ...]] = []
    used = [set() for _ in range(n)]

    def rec():
        if len(rows) == n:
            yield _trusted(np.array(rows))
            return
        for p in perms:
            if all(p[c] not in used[c] for c in range(n)):
                rows.append(p)
                for c in range(n):
                    used[c].add(p[c])
                yield from rec()
                for c in range(n):
                    used[c].discard(p[c])
                rows.pop()

    yield from rec()
