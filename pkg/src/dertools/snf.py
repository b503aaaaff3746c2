"""Smith normal form over the integers, on lists of Python ints (no overflow)."""

from __future__ import annotations


def invariant_factors(matrix) -> list[int]:
    """Nonzero diagonal entries d1 | d2 | ... of the Smith normal form.

    Fraction-free: only integer row/column operations with quotients from
    Euclidean division are used, so the entries never leave Z.
    """
    a = [list(map(int, row)) for row in matrix]
    if not a or not a[0]:
        return []
    rows, cols = len(a), len(a[0])
    diag = []
    t = 0
    while t < rows and t < cols:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
                    if v == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, cols):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
            if done:
                # pivot must divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                i, _ = bad
                rt, ri = a[t], a[i]
                for j in range(t, cols):
                    rt[j] += ri[j]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            best, pos = abs(a[t][t]), (t, t)
            for i in range(t + 1, rows):
                if a[i][t] and abs(a[i][t]) < best:
                    best, pos = abs(a[i][t]), (i, t)
            for j in range(t + 1, cols):
                if a[t][j] and abs(a[t][j]) < best:
                    best, pos = abs(a[t][j]), (t, j)
            i, j = pos
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def integer_rank(matrix) -> int:
    return len(invariant_factors(matrix))
