"""Pure-Python versions of the integer kernels.

These mirror ``_ckernels.pyx`` function for function and are used whenever the
compiled extension is not importable.  All inputs and outputs are plain lists
of Python ints, lowest degree first for polynomials.
"""

from __future__ import annotations


def rref_int(rows, ncols):
    """Fraction-free Gauss-Jordan elimination over the integers.

    Returns ``(reduced, pivots, scale)`` where ``reduced`` holds the nonzero
    rows of ``scale * RREF(rows)``.  Every pivot entry equals ``scale`` and
    every other entry of a pivot column is zero.
    """
    a = [list(r) for r in rows]
    m = len(a)
    prev = 1
    pivots = []
    r = 0
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


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_divmod_monic(a, b):
    """Divide integer polynomial ``a`` by monic ``b``; returns ``(q, r)``."""
    db = len(b) - 1
    rem = list(a)
    if len(rem) - 1 < db:
        return [], rem
    q = [0] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        coef = rem[k]
        if coef:
            q[k - db] = coef
            off = k - db
            for j in range(db + 1):
                rem[off + j] -= coef * b[j]
    rem = rem[:db]
    while rem and rem[-1] == 0:
        rem.pop()
    return q, rem


def cyclo_mulmod(a, b, table):
    """Product of two length-``phi`` vectors reduced with ``table``.

    ``table[k]`` is the coefficient vector of ``x**(phi + k)`` modulo the
    cyclotomic polynomial.
    """
    phi = len(a)
    prod = [0] * (2 * phi - 1)
    for i in range(phi):
        x = a[i]
        if x:
            for j in range(phi):
                y = b[j]
                if y:
                    prod[i + j] += x * y
    out = prod[:phi]
    for k in range(phi, 2 * phi - 1):
        c = prod[k]
        if c:
            red = table[k - phi]
            for j in range(phi):
                out[j] += c * red[j]
    return out
