from fractions import Fraction
from itertools import product
from math import prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_roots_on_unit_circle, cyclotomic_coeffs
from vucert.arith import (
    Poly,
    cyclo_field,
    cyclotomic_candidates,
    cyclotomic_poly,
    format_rational,
    galois_apply,
    galois_norm,
    invert,
    is_cyclotomic_product,
    kronecker_oracle,
    parse_rational,
    totient,
)
from vucert.errors import FieldMismatchError, InputError, NotMonicError

X = Poly([0, 1])


def test_cyclotomic_examples():
    assert str(cyclotomic_poly(1)) == "x - 1"
    assert str(cyclotomic_poly(2)) == "x + 1"
    assert cyclotomic_poly(12) == Poly([1, 0, -1, 0, 1])


@pytest.mark.parametrize("m", range(1, 61))
def test_cyclotomic_against_sympy(m):
    p = cyclotomic_poly(m)
    assert list(p.coeffs) == cyclotomic_coeffs(m)
    assert p.degree == totient(m)


@pytest.mark.parametrize("m", range(1, 31))
def test_divisor_product_is_x_m_minus_1(m):
    total = prod((cyclotomic_poly(d) for d in range(1, m + 1) if m % d == 0), start=Poly([1]))
    assert total == Poly([-1] + [0] * (m - 1) + [1])


def test_totient_values():
    assert [totient(m) for m in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


def test_candidate_bound():
    for n in range(1, 7):
        cands = cyclotomic_candidates(n)
        assert all(totient(d) <= n for d in cands)
        # nothing beyond 2n^2 has small totient
        assert all(totient(d) > n for d in range(2 * n * n + 1, 2 * n * n + 200))


def test_peeling_examples():
    assert is_cyclotomic_product((X - 1) ** 3) == (1, 1, 1)
    assert is_cyclotomic_product(Poly([-1, -1, 1])) is None
    assert is_cyclotomic_product(Poly([1, 1, 1, 1, 1])) == (5,)


def test_kronecker_examples():
    assert kronecker_oracle(X - 1)
    assert not kronecker_oracle(X - 2)
    assert not kronecker_oracle(Poly([-1, -1, 1]))


@pytest.mark.parametrize("bad", [Poly([1, 0, 2]), Poly([0, 1]), Poly([Fraction(1, 2), 1])])
def test_rejects_non_monic_or_zero_constant(bad):
    with pytest.raises(InputError):
        is_cyclotomic_product(bad)
    with pytest.raises(InputError):
        kronecker_oracle(bad)


def test_not_monic_error_type():
    with pytest.raises(NotMonicError):
        is_cyclotomic_product(Poly([1, 2]))


def test_peeling_matches_sympy_factorization_degree_le_3():
    for coeffs in product(range(-3, 4), repeat=3):
        if coeffs[0] == 0:
            continue
        p = Poly(list(coeffs) + [1])
        assert (is_cyclotomic_product(p) is not None) == all_roots_on_unit_circle(list(p.coeffs))


@given(st.lists(st.integers(1, 40), min_size=1, max_size=4))
def test_products_of_cyclotomics_recovered(ds):
    p = prod((cyclotomic_poly(d) for d in ds), start=Poly([1]))
    assert is_cyclotomic_product(p) == tuple(sorted(ds))
    assert kronecker_oracle(p)


@given(st.lists(st.integers(1, 12), min_size=0, max_size=3), st.integers(2, 5))
def test_non_unit_root_rejected(ds, k):
    p = prod((cyclotomic_poly(d) for d in ds), start=X - k)
    assert is_cyclotomic_product(p) is None
    assert not kronecker_oracle(p)


def test_rational_text_roundtrip():
    for text in ["0", "-3", "7/2", "-1/3"]:
        assert format_rational(parse_rational(text)) == text
    assert parse_rational("4/2") == 2
    for bad in ["1/0", "x", "1.5", " 1", "--1"]:
        with pytest.raises(InputError):
            parse_rational(bad)


def test_field_basics():
    f4 = cyclo_field(4)
    z = f4.zeta()
    assert z * z == f4.coerce(-1)
    assert galois_apply(3, z) == -z
    f3 = cyclo_field(3)
    assert invert(f3.one() + f3.zeta()) == -f3.zeta()
    with pytest.raises(ZeroDivisionError):
        invert(f3.zero())
    with pytest.raises(InputError):
        galois_apply(2, z)
    with pytest.raises(FieldMismatchError):
        _ = f3.zeta() + z
    with pytest.raises(InputError):
        f4.from_strings(["1", "0", "0"])


def test_galois_norm_examples():
    f4, f3 = cyclo_field(4), cyclo_field(3)
    assert galois_norm(Poly([-f4.zeta(), f4.one()])) == Poly([1, 0, 1])
    assert galois_norm(Poly([f3.coerce(-1), f3.one()])) == Poly([1, -2, 1])
    assert galois_norm(Poly([f3.coerce(-2), f3.one()])) == Poly([4, -4, 1])


def cyclo_numbers(m):
    f = cyclo_field(m)
    frac = st.builds(Fraction, st.integers(-10, 10), st.integers(1, 10))
    return st.lists(frac, min_size=f.degree, max_size=f.degree).map(lambda c: f.from_strings(
        [format_rational(x) for x in c]))


@pytest.mark.parametrize("m", range(1, 13))
@given(data=st.data())
def test_inverse_property(m, data):
    a = data.draw(cyclo_numbers(m))
    if not a:
        return
    assert a * invert(a) == a.field.one()


@pytest.mark.parametrize("m", [5, 7, 8, 9, 12])
@given(data=st.data())
def test_galois_action_is_automorphism(m, data):
    a, b = data.draw(cyclo_numbers(m)), data.draw(cyclo_numbers(m))
    f = cyclo_field(m)
    for j in f.galois_units:
        assert galois_apply(j, a + b) == galois_apply(j, a) + galois_apply(j, b)
        assert galois_apply(j, a * b) == galois_apply(j, a) * galois_apply(j, b)


@given(st.integers(-50, 50), st.integers(1, 50))
def test_rational_arithmetic_exact(p, q):
    f = cyclo_field(1)
    a, b = f.coerce(Fraction(p, q)), f.coerce(Fraction(q, 7))
    assert (a + b) - b == a
    assert a.to_fraction() == Fraction(p, q)


def test_strings_roundtrip():
    f = cyclo_field(12)
    a = f.from_strings(["1/2", "-3", "0", "5/7"])
    assert f.from_strings(a.to_strings()) == a
    assert a.to_strings() == ["1/2", "-3", "0", "5/7"]
