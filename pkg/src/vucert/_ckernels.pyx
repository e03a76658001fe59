# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernels.  Same contracts as ``_pykernels``."""

from libc.stdlib cimport malloc, free

cdef extern from *:
    bint __builtin_mul_overflow(long long a, long long b, long long *res) nogil
    bint __builtin_sub_overflow(long long a, long long b, long long *res) nogil

# inputs larger than this go straight to the arbitrary-precision path
cdef long long _ENTRY_LIMIT = 1LL << 62


cdef object _rref_fast(list a, Py_ssize_t m, Py_ssize_t ncols):
    """Machine-integer elimination; returns None as soon as anything overflows."""
    cdef long long *buf = <long long *> malloc(m * ncols * sizeof(long long))
    cdef Py_ssize_t i, j, c, p, r = 0
    cdef long long piv, f, prev = 1, tmp, u, v
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            row = a[i]
            for j in range(ncols):
                try:
                    v = row[j]
                except OverflowError:
                    return None
                if v >= _ENTRY_LIMIT or v <= -_ENTRY_LIMIT:
                    return None
                buf[i * ncols + j] = v
        pivots = []
        for c in range(ncols):
            if r == m:
                break
            p = r
            while p < m and buf[p * ncols + c] == 0:
                p += 1
            if p == m:
                continue
            if p != r:
                for j in range(ncols):
                    tmp = buf[p * ncols + j]
                    buf[p * ncols + j] = buf[r * ncols + j]
                    buf[r * ncols + j] = tmp
            piv = buf[r * ncols + c]
            for i in range(m):
                if i == r:
                    continue
                f = buf[i * ncols + c]
                for j in range(ncols):
                    if __builtin_mul_overflow(piv, buf[i * ncols + j], &u):
                        return None
                    if __builtin_mul_overflow(f, buf[r * ncols + j], &v):
                        return None
                    if __builtin_sub_overflow(u, v, &tmp):
                        return None
                    # exact division (Sylvester identity); C truncation is fine
                    buf[i * ncols + j] = tmp // prev if prev != 1 else tmp
            prev = piv
            pivots.append(c)
            r += 1
        out = [[buf[i * ncols + j] for j in range(ncols)] for i in range(r)]
        return out, pivots, prev
    finally:
        free(buf)


cdef tuple _rref_obj(list a, Py_ssize_t m, Py_ssize_t ncols):
    cdef Py_ssize_t i, j, c, p, r = 0
    cdef list row, prow
    cdef object prev = 1, piv, f
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        p = r
        while p < m and a[p][c] == 0:
            p += 1
        if p == m:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        prow = a[r]
        piv = prow[c]
        for i in range(m):
            if i == r:
                continue
            row = a[i]
            f = row[c]
            if f == 0:
                if piv != prev:
                    for j in range(ncols):
                        if row[j]:
                            row[j] = piv * row[j] // prev
                continue
            for j in range(ncols):
                row[j] = (piv * row[j] - f * prow[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots, prev


def rref_int(rows, Py_ssize_t ncols):
    cdef list a = rows if type(rows) is list else list(rows)
    cdef Py_ssize_t m = len(a)
    if m == 0 or ncols == 0:
        return [], [], 1
    res = _rref_fast(a, m, ncols)
    if res is not None:
        return res
    return _rref_obj([list(r) for r in a], m, ncols)


def poly_mul(list a, list b):
    cdef Py_ssize_t i, j, na = len(a), nb = len(b)
    if na == 0 or nb == 0:
        return []
    cdef list out = [0] * (na + nb - 1)
    cdef object x
    for i in range(na):
        x = a[i]
        if x:
            for j in range(nb):
                out[i + j] += x * b[j]
    return out


def poly_divmod_monic(list a, list b):
    cdef Py_ssize_t db = len(b) - 1, k, j, off
    cdef list rem = list(a)
    cdef object coef
    if len(rem) - 1 < db:
        return [], rem
    cdef list q = [0] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        coef = rem[k]
        if coef:
            off = k - db
            q[off] = coef
            for j in range(db + 1):
                rem[off + j] -= coef * b[j]
    rem = rem[:db]
    while rem and rem[len(rem) - 1] == 0:
        rem.pop()
    return q, rem


def cyclo_mulmod(list a, list b, list table):
    cdef Py_ssize_t phi = len(a), i, j, k
    cdef list prod = [0] * (2 * phi - 1)
    cdef object x, y, c
    cdef list red
    for i in range(phi):
        x = a[i]
        if x:
            for j in range(phi):
                y = b[j]
                if y:
                    prod[i + j] += x * y
    cdef list out = prod[:phi]
    for k in range(phi, 2 * phi - 1):
        c = prod[k]
        if c:
            red = table[k - phi]
            for j in range(phi):
                out[j] += c * red[j]
    return out
