"""Pure-Python kernels; reference behaviour for ``_ckernels``.

Functions are integer-coded: a row holds the numerators of one function over
a shared denominator, so every distance is an exact integer.
"""

from __future__ import annotations

from collections.abc import Sequence

BACKEND = "python"


def distance_matrix(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(rows)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        ri = rows[i]
        for j in range(i + 1, n):
            rj = rows[j]
            d = 0
            for a, b in zip(ri, rj):
                x = a - b if a >= b else b - a
                if x > d:
                    d = x
            out[i][j] = d
            out[j][i] = d
    return out


def first_distortion(da: Sequence[Sequence[int]], db: Sequence[Sequence[int]]) -> tuple[int, int] | None:
    """First ``(i, j)``, ``i < j`` in row-major order, where the matrices differ."""
    n = len(da)
    for i in range(n):
        ra, rb = da[i], db[i]
        for j in range(i + 1, n):
            if ra[j] != rb[j]:
                return (i, j)
    return None


def isometry_search(dist: Sequence[Sequence[int]], first: int = -1) -> list[tuple[int, ...]]:
    """All permutations ``p`` with ``dist[p[i]][p[j]] == dist[i][j]``.

    Backtracks over ``p[0], p[1], ...``. A candidate image must share the
    sorted distance profile of its preimage and agree with every distance to
    points assigned so far. ``first >= 0`` pins ``p[0]``. Results come out in
    lexicographic order.
    """
    n = len(dist)
    if n == 0:
        return [()]
    profile = [tuple(sorted(row)) for row in dist]
    perm = [-1] * n
    used = [False] * n
    found: list[tuple[int, ...]] = []

    def extend(i: int) -> None:
        if i == n:
            found.append(tuple(perm))
            return
        row_i = dist[i]
        for c in range(n):
            if used[c] or profile[c] != profile[i]:
                continue
            if i == 0 and first >= 0 and c != first:
                continue
            row_c = dist[c]
            ok = True
            for k in range(i):
                if row_c[perm[k]] != row_i[k]:
                    ok = False
                    break
            if not ok:
                continue
            perm[i] = c
            used[c] = True
            extend(i + 1)
            used[c] = False
        perm[i] = -1

    extend(0)
    return found
