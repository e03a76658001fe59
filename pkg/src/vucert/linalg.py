"""Exact linear algebra over Q(zeta_m) and over the integers.

Field matrices hold :class:`~vucert.arith.CycloNumber` entries; integer
matrices hold Python ints.  Everything here is exact, nothing is numeric.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

from vucert import kernels
from vucert.arith import CycloField, CycloNumber, Poly, cyclo_field, galois_norm
from vucert.errors import (
    IncompleteEigenvaluesError,
    InputError,
    NonCommutingError,
    SingularMatrixError,
)


class FieldMatrix:
    """Immutable dense matrix over a cyclotomic field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: CycloField, entries):
        grid = [list(r) for r in entries]
        if not grid or not grid[0]:
            raise InputError("matrix must have at least one row and one column")
        ncols = len(grid[0])
        if any(len(r) != ncols for r in grid):
            raise InputError("ragged matrix rows")
        self.field = field
        self.rows = len(grid)
        self.cols = ncols
        self.entries = tuple(tuple(field.coerce(x) for x in r) for r in grid)

    @classmethod
    def _raw(cls, field, grid) -> FieldMatrix:
        obj = cls.__new__(cls)
        obj.field = field
        obj.rows = len(grid)
        obj.cols = len(grid[0])
        obj.entries = tuple(tuple(r) for r in grid)
        return obj

    @classmethod
    def identity(cls, field: CycloField, n: int) -> FieldMatrix:
        one, zero = field.one(), field.zero()
        return cls._raw(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: CycloField, rows: int, cols: int) -> FieldMatrix:
        zero = field.zero()
        return cls._raw(field, [[zero] * cols for _ in range(rows)])

    @classmethod
    def diag(cls, field: CycloField, values) -> FieldMatrix:
        values = [field.coerce(v) for v in values]
        n = len(values)
        zero = field.zero()
        return cls._raw(field, [[values[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, field: CycloField, columns) -> FieldMatrix:
        columns = [list(c) for c in columns]
        return cls._raw(field, [list(r) for r in zip(*columns)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.field == other.field and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"FieldMatrix(m={self.field.conductor}, [{body}])"

    def _check(self, other):
        if other.field != self.field:
            raise InputError("matrices over different fields")

    def __add__(self, other):
        self._check(other)
        if other.shape != self.shape:
            raise InputError("shape mismatch in matrix addition")
        return FieldMatrix._raw(self.field, [[a + b for a, b in zip(r, s)]
                                             for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check(other)
        if other.shape != self.shape:
            raise InputError("shape mismatch in matrix subtraction")
        return FieldMatrix._raw(self.field, [[a - b for a, b in zip(r, s)]
                                             for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return FieldMatrix._raw(self.field, [[-a for a in r] for r in self.entries])

    def __mul__(self, other):
        if isinstance(other, FieldMatrix):
            self._check(other)
            if self.cols != other.rows:
                raise InputError(f"cannot multiply {self.shape} by {other.shape}")
            return FieldMatrix._raw(self.field, _matmul(self.entries, other.entries, self.field))
        return FieldMatrix._raw(self.field, [[a * other for a in r] for r in self.entries])

    def __rmul__(self, other):
        return self * other

    def __pow__(self, e: int):
        if not self.is_square():
            raise InputError("power of a non-square matrix")
        if e < 0:
            return self.inverse() ** (-e)
        result = FieldMatrix.identity(self.field, self.rows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def apply(self, vec) -> tuple:
        zero = self.field.zero()
        out = []
        for r in self.entries:
            acc = zero
            for a, v in zip(r, vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return tuple(out)

    def transpose(self) -> FieldMatrix:
        return FieldMatrix._raw(self.field, [list(c) for c in zip(*self.entries)])

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> FieldMatrix:
        return FieldMatrix._raw(self.field, [list(r[c0:c1]) for r in self.entries[r0:r1]])

    def commutes_with(self, other: FieldMatrix) -> bool:
        return self * other == other * self

    def is_upper_triangular(self) -> bool:
        return all(not self.entries[i][j] for i in range(self.rows) for j in range(min(i, self.cols)))

    def rank(self) -> int:
        return len(_rref(self.entries, self.field)[1])

    def det(self):
        if not self.is_square():
            raise InputError("determinant of a non-square matrix")
        return _det(self.entries, self.field)

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def inverse(self) -> FieldMatrix:
        if not self.is_square():
            raise InputError("inverse of a non-square matrix")
        n = self.rows
        one, zero = self.field.one(), self.field.zero()
        aug = [list(r) + [one if i == j else zero for j in range(n)]
               for i, r in enumerate(self.entries)]
        red, pivots = _rref(aug, self.field)
        if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] != n - 1:
            raise SingularMatrixError("matrix is singular")
        return FieldMatrix._raw(self.field, [r[n:] for r in red])

    def conjugate_by(self, c: FieldMatrix, c_inv: FieldMatrix | None = None) -> FieldMatrix:
        """Return ``C M C^-1``."""
        if c_inv is None:
            c_inv = c.inverse()
        return c * self * c_inv

    def nullspace(self) -> list[tuple]:
        return _nullspace(self.entries, self.field, self.cols)

    def to_strings(self) -> list:
        return [[x.to_strings() for x in r] for r in self.entries]


def direct_sum(*mats: FieldMatrix) -> FieldMatrix:
    field = mats[0].field
    n = sum(m.rows for m in mats)
    k = sum(m.cols for m in mats)
    zero = field.zero()
    grid = [[zero] * k for _ in range(n)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                grid[r0 + i][c0 + j] = m.entries[i][j]
        r0 += m.rows
        c0 += m.cols
    return FieldMatrix._raw(field, grid)


def _matmul(a, b, field):
    zero = field.zero()
    bt = list(zip(*b))
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        new = []
        for col in bt:
            acc = zero
            for k, x in nz:
                y = col[k]
                if y:
                    acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def _rref(grid, field):
    """Gauss-Jordan over the field; returns (nonzero reduced rows, pivot columns)."""
    a = [list(r) for r in grid]
    m = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv if x else x for x in a[r]]
        prow = a[r]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _nullspace(grid, field, ncols):
    red, pivots = _rref(grid, field)
    pivset = set(pivots)
    one, zero = field.one(), field.zero()
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = [zero] * ncols
        vec[f] = one
        for row, p in zip(red, pivots):
            if row[f]:
                vec[p] = -row[f]
        basis.append(tuple(vec))
    return basis


def _det(grid, field):
    a = [list(r) for r in grid]
    n = len(a)
    det = field.one()
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return field.zero()
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det = det * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def char_poly(m: FieldMatrix) -> Poly:
    """Monic ``det(xI - M)`` by Berkowitz's division-free recurrence."""
    if not m.is_square():
        raise InputError("char_poly needs a square matrix")
    field = m.field
    a = m.entries
    n = m.rows
    one, zero = field.one(), field.zero()
    # coefficients highest degree first
    vect = [one, -a[0][0]]
    for r in range(1, n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        q = [one, -a[r][r]]
        cur = col
        for _ in range(r):
            s = zero
            for x, y in zip(row, cur):
                if x and y:
                    s = s + x * y
            q.append(-s)
            cur = [sum((a[i][j] * cur[j] for j in range(r) if a[i][j] and cur[j]), zero)
                   for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                if q[i - j] and vect[j]:
                    acc = acc + q[i - j] * vect[j]
            new.append(acc)
        vect = new
    return Poly(reversed(vect))


def poly_at_matrix(p: Poly, m: FieldMatrix) -> FieldMatrix:
    """Evaluate a polynomial with field coefficients at a square matrix (Horner)."""
    n = m.rows
    acc = FieldMatrix.zeros(m.field, n, n)
    ident = FieldMatrix.identity(m.field, n)
    for c in reversed(p.coeffs):
        acc = acc * m + ident * m.field.coerce(c)
    return acc


def generalized_eigenspace(m: FieldMatrix, lam) -> list[tuple]:
    """Basis of ``ker((M - lam I)^n)``; empty when ``lam`` is not an eigenvalue."""
    if not m.is_square():
        raise InputError("generalized_eigenspace needs a square matrix")
    n = m.rows
    shifted = m - FieldMatrix.identity(m.field, n) * m.field.coerce(lam)
    return (shifted ** n).nullspace()


def eigenvalue_candidates(m: FieldMatrix) -> list[CycloNumber]:
    """Field elements worth testing as eigenvalues of ``m``.

    Roots of unity of the field, rational roots of the Galois norm of the
    characteristic polynomial, and the diagonal entries of ``m``.  This is a
    convenience search, not a root finder.
    """
    field = m.field
    cands = list(m.entries[i][i] for i in range(m.rows))
    cands += field.roots_of_unity()
    norm = galois_norm(char_poly(m), field)
    cands += [field.coerce(q) for q in rational_roots(norm)]
    out, seen = [], set()
    for c in cands:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def find_eigenvalues(m: FieldMatrix, extra=()) -> list[CycloNumber]:
    """Distinct eigenvalues of ``m`` found among the candidates, in discovery order.

    Raises :class:`IncompleteEigenvaluesError` when the generalized
    eigenspaces of the found values do not fill the space.
    """
    cp = char_poly(m)
    found = []
    seen = set()
    for c in list(extra) + eigenvalue_candidates(m):
        c = m.field.coerce(c)
        if c in seen:
            continue
        seen.add(c)
        if not cp(c):
            found.append(c)
    total = sum(len(generalized_eigenspace(m, c)) for c in found)
    if total != m.rows:
        raise IncompleteEigenvaluesError(
            f"found eigenvalues account for {total} of {m.rows} dimensions; "
            f"enlarge the conductor (currently {m.field.conductor})")
    return found


def rational_roots(p: Poly) -> list[Fraction]:
    """Rational roots of a polynomial with rational coefficients (rational root test)."""
    if p.is_zero():
        raise InputError("zero polynomial has every root")
    coeffs = [Fraction(c) for c in p.coeffs]
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        while ints and ints[0] == 0:
            ints.pop(0)
    if len(ints) <= 1:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])
    q = Poly(ints)
    for num in _divisors(a0):
        for den_ in _divisors(an):
            for sign in (1, -1):
                cand = Fraction(sign * num, den_)
                if cand not in roots and q(cand) == 0:
                    roots.append(cand)
    return roots


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@dataclass(frozen=True)
class BlockLayout:
    """Result of the simultaneous block triangularization.

    ``conjugator`` is ``C``; the conjugated matrices are ``C X C^-1``.  Cells
    of ``dims`` are listed row-major over (row eigenvalue, column eigenvalue).
    """

    row_eigenvalues: tuple
    col_eigenvalues: tuple
    dims: tuple
    conjugator: FieldMatrix
    conjugated: tuple

    @property
    def n(self) -> int:
        return self.conjugator.rows

    def offsets(self) -> dict:
        """Map ``(r, s)`` to the first basis index of that cell."""
        out = {}
        pos = 0
        for r, row in enumerate(self.dims):
            for s, d in enumerate(row):
                out[(r, s)] = pos
                pos += d
        return out

    def block(self, which: int, r: int, s: int) -> FieldMatrix | None:
        d = self.dims[r][s]
        if d == 0:
            return None
        o = self.offsets()[(r, s)]
        return self.conjugated[which].submatrix(o, o + d, o, o + d)


def _basis_extension(vectors, n, field):
    # standard vectors completing `vectors` to a basis, chosen greedily by index
    current = [list(v) for v in vectors]
    rank = len(_rref(current, field)[1]) if current else 0
    extra = []
    one, zero = field.one(), field.zero()
    for i in range(n):
        if rank == n:
            break
        e = [zero] * n
        e[i] = one
        trial = current + [e]
        r = len(_rref(trial, field)[1])
        if r > rank:
            current = trial
            extra.append(tuple(e))
            rank = r
    return extra


def _leading_index(vec) -> int:
    return next(i for i, x in enumerate(vec) if x)


def _common_eigenvector(mats, eig_lists, field):
    """A common eigenvector of commuting ``mats`` with the smallest leading index."""
    n = mats[0].rows
    ident = FieldMatrix.identity(field, n)
    best = None
    # every matrix in the family must have an eigenvalue among its list
    spaces = [[(c, (mat - ident * c).entries) for c in eigs] for mat, eigs in zip(mats, eig_lists)]

    def search(idx, stacked):
        nonlocal best
        if idx == len(mats):
            for v in _nullspace(stacked, field, n):
                key = _leading_index(v)
                if best is None or key < best[0]:
                    best = (key, v)
            return
        for _, rows in spaces[idx]:
            combined = stacked + [list(r) for r in rows]
            if _nullspace(combined, field, n):
                search(idx + 1, combined)

    search(0, [])
    if best is None:
        raise IncompleteEigenvaluesError("no common eigenvector with eigenvalues in the field")
    return best[1]


def triangularize_commuting(mats, eig_lists=None) -> FieldMatrix:
    """Basis matrix ``S`` with ``S^-1 X S`` upper triangular for each commuting ``X``.

    The flag is built by repeated common-eigenvector extraction on successive
    quotients; among candidates the vector with the smallest leading index wins.
    """
    field = mats[0].field
    n = mats[0].rows
    if eig_lists is None:
        eig_lists = [None] * len(mats)
    flag = []
    for step in range(n):
        comp = _basis_extension(flag, n, field)
        basis = FieldMatrix.from_columns(field, flag + comp)
        binv = basis.inverse()
        quots = [(binv * x * basis).submatrix(step, n, step, n) for x in mats]
        lists = []
        for q, given in zip(quots, eig_lists):
            lists.append(find_eigenvalues(q, extra=given or ()))
        u = _common_eigenvector(quots, lists, field)
        zero = field.zero()
        v = [zero] * n
        for j, uj in enumerate(u):
            if uj:
                col = comp[j]
                v = [a + uj * b for a, b in zip(v, col)]
        flag.append(tuple(v))
    return FieldMatrix.from_columns(field, flag)


def _restrict(mat: FieldMatrix, basis_cols, field) -> FieldMatrix:
    # matrix of `mat` on the invariant subspace spanned by basis_cols
    s = FieldMatrix.from_columns(field, basis_cols)
    images = [mat.apply(v) for v in basis_cols]
    k = len(basis_cols)
    # solve s * X = images column by column via the reduced system
    aug = [list(s.entries[i]) + [img[i] for img in images] for i in range(s.rows)]
    red, pivots = _rref(aug, field)
    if pivots[:k] != list(range(k)) or any(p >= k for p in pivots):
        raise NonCommutingError("subspace is not invariant")
    return FieldMatrix._raw(field, [r[k:] for r in red[:k]])


def _check_eigs(mat, eigs, name):
    field = mat.field
    eigs = [field.coerce(e) for e in eigs]
    if len(set(eigs)) != len(eigs):
        raise InputError(f"eigenvalue list for {name} has repeats")
    spaces = [generalized_eigenspace(mat, e) for e in eigs]
    if any(not sp for sp in spaces):
        bad = [str(e) for e, sp in zip(eigs, spaces) if not sp]
        raise InputError(f"{', '.join(bad)} is not an eigenvalue of {name}")
    total = sum(len(sp) for sp in spaces)
    if total != mat.rows:
        raise IncompleteEigenvaluesError(
            f"eigenvalues of {name} cover {total} of {mat.rows} dimensions; enlarge the field")
    return eigs, spaces


def simultaneous_block_triangularize(p: FieldMatrix, pp: FieldMatrix, q: FieldMatrix,
                                     eigs_p, eigs_pp, eigs_q=None) -> BlockLayout:
    """Conjugate a commuting triple into joint block upper-triangular form.

    Stage one splits by the generalized eigenspaces of ``p``; stage two refines
    each by those of ``pp``; each cell is then triangularized.  ``eigs_q``
    optionally seeds the eigenvalue search for ``q``.
    """
    field = p.field
    n = p.rows
    for x in (pp, q):
        if x.field != field or x.shape != p.shape:
            raise InputError("triple must share field and shape")
    if not p.is_square():
        raise InputError("matrices must be square")
    if not (p.commutes_with(pp) and p.commutes_with(q) and pp.commutes_with(q)):
        raise NonCommutingError("P, P', Q do not pairwise commute")
    eigs_p, spaces_p = _check_eigs(p, eigs_p, "P")
    eigs_pp, _ = _check_eigs(pp, eigs_pp, "P'")

    # stage 1: W_r
    stage1 = [v for sp in spaces_p for v in sp]
    s1 = FieldMatrix.from_columns(field, stage1)
    columns = []
    dims = []
    off = 0
    for r, sp in enumerate(spaces_p):
        nr = len(sp)
        pp_r = _restrict(pp, sp, field)
        row_dims = []
        for lam2 in eigs_pp:
            sub = generalized_eigenspace(pp_r, lam2)
            row_dims.append(len(sub))
            if not sub:
                continue
            # stage 2 basis in ambient coordinates
            cell = [tuple(_combine(sp, v, field)) for v in sub]
            p_c = _restrict(p, cell, field)
            pp_c = _restrict(pp, cell, field)
            q_c = _restrict(q, cell, field)
            tri = triangularize_commuting([p_c, pp_c, q_c],
                                          [[eigs_p[r]], [lam2], list(eigs_q or ())])
            for j in range(tri.cols):
                columns.append(tuple(_combine(cell, tri.column(j), field)))
        if sum(row_dims) != nr:
            raise IncompleteEigenvaluesError("P' eigenvalues incomplete on a P-eigenspace")
        dims.append(tuple(row_dims))
        off += nr
    del s1
    c_inv = FieldMatrix.from_columns(field, columns)
    c = c_inv.inverse()
    conj = tuple(c * x * c_inv for x in (p, pp, q))
    layout = BlockLayout(tuple(eigs_p), tuple(eigs_pp), tuple(dims), c, conj)
    _verify_layout(layout)
    return layout


def _combine(basis, coords, field):
    n = len(basis[0])
    out = [field.zero()] * n
    for b, x in zip(basis, coords):
        if x:
            out = [o + x * y for o, y in zip(out, b)]
    return out


def _verify_layout(layout: BlockLayout):
    offs = layout.offsets()
    n = layout.n
    cell_of = [None] * n
    for (r, s), o in offs.items():
        for i in range(layout.dims[r][s]):
            cell_of[o + i] = (r, s)
    for which, mat in enumerate(layout.conjugated):
        for i in range(n):
            for j in range(n):
                x = mat.entries[i][j]
                if x and (cell_of[i] != cell_of[j] or j < i):
                    raise AssertionError("conjugated matrix is not block upper triangular")
        for i in range(n):
            r, s = cell_of[i]
            if which == 0 and mat.entries[i][i] != layout.row_eigenvalues[r]:
                raise AssertionError("diagonal of CPC^-1 disagrees with layout")
            if which == 1 and mat.entries[i][i] != layout.col_eigenvalues[s]:
                raise AssertionError("diagonal of CP'C^-1 disagrees with layout")


# ---------------------------------------------------------------- integers


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple

    @classmethod
    def from_rows(cls, rows, cols: int | None = None) -> IntMatrix:
        rows = [tuple(map(int, r)) for r in rows]
        if cols is None:
            if not rows:
                raise InputError("empty IntMatrix needs an explicit column count")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise InputError("ragged integer matrix")
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __mul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise InputError("shape mismatch in integer matrix product")
        bt = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(r, c)) for c in bt] for r in self.entries], other.cols)

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([list(c) for c in zip(*self.entries)] if self.rows else [],
                                   self.rows)

    def det(self) -> int:
        if self.rows != self.cols:
            raise InputError("determinant of a non-square matrix")
        if self.rows == 0:
            return 1
        red, pivots, scale = kernels.rref_int(self.entries, self.cols)
        if len(pivots) < self.rows:
            return 0
        # sign of the row permutation is recovered from a Bareiss pass
        return _bareiss_det([list(r) for r in self.entries])

    def rank(self) -> int:
        return len(kernels.rref_int(self.entries, self.cols)[1])


def _bareiss_det(a) -> int:
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_row_echelon(m: IntMatrix):
    """``(rows, pivots, scale)``: nonzero rows of ``scale * RREF(m)`` over Q."""
    return kernels.rref_int(m.entries, m.cols)


def rational_kernel(m: IntMatrix) -> list[tuple[int, ...]]:
    """Integer basis (primitive vectors) of the rational kernel of ``m``."""
    red, pivots, scale = rational_row_echelon(m)
    pivset = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivset:
            continue
        vec = [0] * m.cols
        vec[f] = scale
        for row, p in zip(red, pivots):
            vec[p] = -row[f]
        g = reduce(gcd, vec, 0)
        basis.append(tuple(x // g for x in vec))
    return basis


def forces_zero(m: IntMatrix, indices) -> bool:
    """Whether ``M a = 0`` forces ``a_i = 0`` for every ``i`` in ``indices`` (0-based).

    Decided by row-space membership of the standard basis vectors over Q,
    which by the torsion-free transfer lemma covers every torsion-free abelian
    group of values.
    """
    return all(forced_indices(m, indices))


def forced_indices(m: IntMatrix, indices) -> list[bool]:
    """Per-index version of :func:`forces_zero`, sharing one elimination."""
    indices = list(indices)
    if not indices:
        return []
    for i in indices:
        if type(i) is not int or not 0 <= i < m.cols:
            raise InputError(f"column index {i!r} out of range for {m.cols} columns")
    red, pivots, _ = rational_row_echelon(m)
    where = {p: k for k, p in enumerate(pivots)}
    out = []
    for i in indices:
        k = where.get(i)
        # the pivot row must be scale * e_i: exactly one nonzero entry
        out.append(k is not None and red[k].count(0) == m.cols - 1)
    return out


def in_row_space(m: IntMatrix, vec) -> bool:
    """Whether the rational vector ``vec`` lies in the rational row space of ``m``."""
    if len(vec) != m.cols:
        raise InputError("vector length does not match column count")
    base = m.rank()
    den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(x).denominator for x in vec), 1)
    row = [int(Fraction(x) * den) for x in vec]
    return IntMatrix.from_rows(list(m.entries) + [row], m.cols).rank() == base


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``S = U M V`` diagonal, ``d_1 | d_2 | ...``, ``d_i >= 0``."""
    rows, cols = m.rows, m.cols
    s = [list(r) for r in m.entries]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row dst += k * row src
        s[dst] = [a + k * b for a, b in zip(s[dst], s[src])]
        u[dst] = [a + k * b for a, b in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for r in s:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = s[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // s[t][t]))
                    if s[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // s[t][t]))
                    if s[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility: fold in any entry not divisible by the pivot
                piv = s[t][t]
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if s[i][j] % piv), None)
                if bad is not None:
                    add_row(t, bad[0], 1)
                    done = False
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (IntMatrix.from_rows(u, rows), IntMatrix.from_rows(s, cols),
            IntMatrix.from_rows(v, cols))


def snf_diagonal(s: IntMatrix) -> list[int]:
    return [s.entries[i][i] for i in range(min(s.rows, s.cols))]


def field_matrix(conductor: int, rows) -> FieldMatrix:
    """Shorthand: build a matrix over Q(zeta_m) from ints/Fractions/CycloNumbers."""
    return FieldMatrix(cyclo_field(conductor), rows)
