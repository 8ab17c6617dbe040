"""Pure-Python row reduction kernels.

These are the hot loops of the whole engine: every subspace, kernel and
homology computation funnels into one of the two functions below.  A
compiled twin lives in ``_ckernels.pyx``; ``koszul.linalg`` picks whichever
is importable at runtime.  Both implementations must produce bit-identical
output (canonical reduced row echelon data), which the test suite checks.
"""

from __future__ import annotations

from math import gcd

BACKEND = "python"


def rref_fp(rows, ncols, p):
    """Reduced row echelon form over F_p.

    `rows` is a list of lists of ints in [0, p); it is not modified.
    Returns (reduced nonzero rows with leading 1s, pivot column tuple).
    """
    mat = [list(r) for r in rows]
    nrows = len(mat)
    pivots = []
    r = 0
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if mat[i][c] % p:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            mat[r], mat[pr] = mat[pr], mat[r]
        row = mat[r]
        inv = pow(row[c], p - 2, p)
        if inv != 1:
            for j in range(c, ncols):
                row[j] = row[j] * inv % p
        for i in range(nrows):
            if i == r:
                continue
            f = mat[i][c]
            if f:
                other = mat[i]
                for j in range(c, ncols):
                    other[j] = (other[j] - f * row[j]) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat[:r], tuple(pivots)


def _normalize_int_row(row, lead):
    g = 0
    for v in row:
        if v:
            g = gcd(g, v if v > 0 else -v)
    if g == 0:
        return row
    if row[lead] < 0:
        g = -g
    if g != 1:
        return [v // g for v in row]
    return row


def rref_int(rows, ncols):
    """Integer row echelon data for a rational RREF.

    `rows` holds integer entries (callers clear denominators first).
    Fraction-free cross-multiplication elimination with per-row content
    reduction; returns rows that are the canonical rational RREF scaled by
    the smallest positive integer clearing denominators (leading entries
    positive, content 1), plus the pivot columns.
    """
    mat = [list(r) for r in rows]
    nrows = len(mat)
    pivots = []
    r = 0
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if mat[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            mat[r], mat[pr] = mat[pr], mat[r]
        mat[r] = row = _normalize_int_row(mat[r], c)
        a = row[c]
        for i in range(nrows):
            if i == r:
                continue
            other = mat[i]
            b = other[c]
            if b:
                for j in range(ncols):
                    other[j] = a * other[j] - b * row[j]
                mat[i] = _normalize_int_row(other, _first_nonzero(other))
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat[:r], tuple(pivots)


def _first_nonzero(row):
    for j, v in enumerate(row):
        if v:
            return j
    return 0
