"""Plain-Python recomputations used to check the package from the outside.

Nothing here imports the cycle or search code: cycle structures are walked
directly on nested lists.
"""

from __future__ import annotations


def pair_lengths(rows: list[list[int]], i: int, j: int) -> tuple[int, ...]:
    """Decreasing row-cycle lengths of 0-based rows i, j."""
    n = len(rows)
    nxt = {rows[i][c]: rows[j][c] for c in range(n)}
    seen = set()
    out = []
    for s in range(1, n + 1):
        if s in seen:
            continue
        k = 0
        x = s
        while x not in seen:
            seen.add(x)
            x = nxt[x]
            k += 1
        out.append(k)
    return tuple(sorted(out, reverse=True))


def max_gamma(rows: list[list[int]]) -> tuple[int, ...]:
    n = len(rows)
    return max(pair_lengths(rows, i, j) for i in range(n) for j in range(i + 1, n))


def standard_blocks(row1: list[int], row2: list[int], start: int) -> list[int] | None:
    """Cycle lengths of rows 1-2 from column ``start`` on, if they are in standard form.

    A cycle of length k on columns t..t+k-1 reads t..t+k-1 in row 1 and
    t+1, ..., t+k-1, t in row 2.
    """
    n = len(row1)
    t = start
    out = []
    while t <= n:
        k = 1
        while t + k - 1 <= n and row2[t + k - 2] != t:
            k += 1
        if t + k - 1 > n:
            return None
        for u in range(k):
            if row1[t + u - 1] != t + u:
                return None
        for u in range(k - 1):
            if row2[t + u - 1] != t + u + 1:
                return None
        out.append(k)
        t += k
    return out


def in_R(form: list[list[int]], source: list[list[int]]) -> tuple[bool, str]:
    """Reduced, rows 1-2 in standard form with decreasing cycles, Γ_{1,2} maximal."""
    n = len(form)
    ident = list(range(1, n + 1))
    if form[0] != ident:
        return False, "first row is not 1..n"
    if [form[r][0] for r in range(n)] != ident:
        return False, "first column is not 1..n"
    if n < 2:
        return True, ""
    blocks = standard_blocks(form[0], form[1], 1)
    if blocks is None:
        return False, "rows 1-2 not in standard form"
    if blocks != sorted(blocks, reverse=True):
        return False, "cycle lengths in rows 1-2 not weakly decreasing"
    if tuple(blocks) != max_gamma(source):
        return False, f"Γ_12 = {blocks} but max Γ of input is {max_gamma(source)}"
    return True, ""


def is_latin(rows: list[list[int]]) -> bool:
    n = len(rows)
    full = set(range(1, n + 1))
    return all(set(r) == full for r in rows) and all({rows[r][c] for r in range(n)} == full for c in range(n))
