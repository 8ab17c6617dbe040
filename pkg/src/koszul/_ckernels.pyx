# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row-reduction kernels.

Bit-identical twin of `_kernels.py`: same algorithms, same canonical output.
The F_p path runs on C int64 arithmetic (p must fit in 31 bits, which the
field constructor guarantees for any reasonable check prime); the integer
path keeps Python big ints but compiles the loop and index bookkeeping.
"""

from libc.stdint cimport int64_t
from math import gcd

BACKEND = "c"


def rref_fp(rows, Py_ssize_t ncols, p_in):
    cdef int64_t p = p_in
    if p <= 1 or p >= (<int64_t>1) << 31:
        from . import _kernels
        return _kernels.rref_fp(rows, ncols, p_in)
    cdef Py_ssize_t nrows = len(rows)
    cdef list mat = [list(src_row) for src_row in rows]
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, j, pr
    cdef int64_t inv, f, v
    cdef list row, other
    for c in range(ncols):
        pr = -1
        for i in range(r, nrows):
            if <int64_t>(mat[i][c]) % p:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            mat[r], mat[pr] = mat[pr], mat[r]
        row = <list>mat[r]
        inv = _inv_mod(<int64_t>(row[c]) % p, p)
        if inv != 1:
            for j in range(c, ncols):
                v = <int64_t>(row[j])
                row[j] = v * inv % p
        for i in range(nrows):
            if i == r:
                continue
            other = <list>mat[i]
            f = <int64_t>(other[c])
            if f:
                for j in range(c, ncols):
                    v = (<int64_t>(other[j]) - f * <int64_t>(row[j])) % p
                    other[j] = v if v >= 0 else v + p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat[:r], tuple(pivots)


cdef int64_t _inv_mod(int64_t a, int64_t p):
    cdef int64_t result = 1, base = a % p, e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def rref_int(rows, Py_ssize_t ncols):
    cdef Py_ssize_t nrows = len(rows)
    cdef list mat = [list(src_row) for src_row in rows]
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, j, pr
    cdef list row, other
    cdef object a, b
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
        mat[r] = row = _normalize(<list>mat[r], c)
        a = row[c]
        for i in range(nrows):
            if i == r:
                continue
            other = <list>mat[i]
            b = other[c]
            if b:
                for j in range(ncols):
                    other[j] = a * other[j] - b * row[j]
                mat[i] = _normalize(other, _first_nonzero(other, ncols))
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat[:r], tuple(pivots)


cdef list _normalize(list row, Py_ssize_t lead):
    cdef object g = 0
    cdef object v
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


cdef Py_ssize_t _first_nonzero(list row, Py_ssize_t ncols):
    cdef Py_ssize_t j
    for j in range(ncols):
        if row[j]:
            return j
    return 0
