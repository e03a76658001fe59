"""Independent reference computations used only by the tests.

Nothing here calls into the package's own linear algebra or cyclotomic code:
sympy supplies cyclotomic polynomials, characteristic polynomials, Smith
forms and nullspaces, and plain ``Fraction`` arithmetic handles the rest.
"""

from fractions import Fraction
from itertools import product

import sympy

X = sympy.Symbol("x")


def cyclotomic_coeffs(m):
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    return [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(m, X), X).all_coeffs())]


def all_roots_on_unit_circle(coeffs):
    """Roots-of-unity test via sympy factorization into irreducibles over Q."""
    poly = sympy.Poly(list(reversed(coeffs)), X)
    for factor, _ in poly.factor_list()[1]:
        deg = factor.degree()
        if deg == 0:
            continue
        target = [sympy.Rational(c) for c in factor.monic().all_coeffs()]
        if not any(target == list(reversed(cyclotomic_coeffs(d)))
                   for d in range(1, 2 * deg * deg + 1)):
            return False
    return True


def fraction_rref(rows, ncols):
    """Plain Gauss-Jordan over Fraction: ``(rows of RREF, pivot columns)``."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def sympy_smith_diagonal(rows):
    from sympy.matrices.normalforms import smith_normal_form

    m = sympy.Matrix(rows)
    s = smith_normal_form(m, domain=sympy.ZZ)
    return [abs(int(s[i, i])) for i in range(min(s.shape))]


def sympy_nullity(rows, ncols):
    if not rows:
        return ncols
    return ncols - sympy.Matrix(rows).rank()


def brute_force_kernel_witness(rows, ncols, index, bound=6):
    """An integer kernel vector in ``[-bound, bound]^ncols`` nonzero at ``index``, or None."""
    for vec in product(range(-bound, bound + 1), repeat=ncols):
        if vec[index] == 0:
            continue
        if all(sum(a * v for a, v in zip(r, vec)) == 0 for r in rows):
            return vec
    return None


def sympy_kernel_forces(rows, ncols, indices):
    """Independent forcing test: every nullspace basis vector vanishes at ``indices``."""
    if not rows:
        return not indices
    basis = sympy.Matrix(rows).nullspace()
    return all(v[i] == 0 for v in basis for i in indices)


def charpoly_rational(rows):
    """Characteristic polynomial of a rational matrix, lowest degree first."""
    m = sympy.Matrix(rows)
    return [sympy.Rational(c) for c in reversed(m.charpoly(X).all_coeffs())]


def int_det(rows):
    return int(sympy.Matrix(rows).det())
