"""Exact arithmetic: rationals, polynomials, cyclotomic fields.

Rationals are :class:`fractions.Fraction` values (always reduced with a
positive denominator).  Polynomials are dense coefficient tuples, lowest
degree first, over ``int``, ``Fraction`` or :class:`CycloNumber`.

>>> cyclotomic_poly(12)
Poly('x^4 - x^2 + 1')
>>> is_cyclotomic_product(Poly.from_ints([1, 1, 1, 1, 1]))
(5,)
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache, reduce
from math import comb, gcd, lcm

from vucert import kernels
from vucert.errors import FieldMismatchError, InputError, NotMonicError

_RATIONAL_RE = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"``.  Anything else (spaces, decimals) is rejected."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise InputError(f"malformed rational {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise InputError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _is_zero(c) -> bool:
    return c == 0


def _coef_str(c) -> str:
    if isinstance(c, (int, Fraction)):
        return format_rational(c)
    return f"({c})"


class Poly:
    """Dense univariate polynomial; coefficients lowest degree first.

    Trailing zero coefficients are stripped, so the zero polynomial has an
    empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, coeffs) -> Poly:
        return cls(int(c) for c in coeffs)

    @classmethod
    def x_power(cls, n: int, one=1) -> Poly:
        return cls([0] * n + [one])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_integral(self) -> bool:
        return all(isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1)
                   for c in self.coeffs)

    def to_int(self) -> Poly:
        if not self.is_integral():
            raise ValueError(f"{self} has non-integer coefficients")
        return Poly(int(c) for c in self.coeffs)

    def _int_list(self):
        if all(type(c) is int for c in self.coeffs):
            return list(self.coeffs)
        return None

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return self.coeffs == (other,)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly('{self}')"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if _is_zero(c):
                continue
            if isinstance(c, CycloNumber) and c.is_rational():
                c = c.to_fraction()
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            plain = isinstance(c, (int, Fraction))
            if plain:
                neg = c < 0
                mag = -c if neg else c
                body = format_rational(mag) if (mag != 1 or not mono) else ""
            else:
                neg = False
                body = _coef_str(c) if (c != 1 or not mono) else ""
            if body and mono:
                body = f"{body}*{mono}" if not plain else f"{body}{mono}"
            elif mono:
                body = mono
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        ia, ib = self._int_list(), other._int_list()
        if ia is not None and ib is not None:
            return Poly(kernels.poly_mul(ia, ib))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if _is_zero(x):
                continue
            for j, y in enumerate(b):
                t = x * y
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = a[0] * 0
        return Poly(zero if c is None else c for c in out)

    def __rmul__(self, other):
        return Poly(other * c for c in self.coeffs)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        one = self.coeffs[-1] ** 0 if self.coeffs else 1
        result = Poly([one])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ia, ib = self._int_list(), other._int_list()
        if ia is not None and ib is not None and ib[-1] == 1:
            q, r = kernels.poly_divmod_monic(ia, ib)
            return Poly(q), Poly(r)
        rem = list(self.coeffs)
        db = other.degree
        lead = other.lead
        if len(rem) - 1 < db:
            return Poly(), Poly(rem)
        if lead == 1:
            inv = None
        else:
            inv = Fraction(1, lead) if isinstance(lead, int) else 1 / lead
        q = [lead * 0] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if _is_zero(c):
                continue
            c = c * inv if inv is not None else c
            q[k - db] = c
            for j, bj in enumerate(other.coeffs):
                rem[k - db + j] = rem[k - db + j] - c * bj
        return Poly(q), Poly(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Poly:
        q, r = divmod(self, other)
        if not r.is_zero():
            raise InputError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> Poly:
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> Poly:
        lead = self.lead
        if lead == 1:
            return self
        inv = 1 / Fraction(lead) if isinstance(lead, int) else 1 / lead
        return Poly(c * inv for c in self.coeffs)

    def map(self, fn) -> Poly:
        return Poly(fn(c) for c in self.coeffs)


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly([x])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the coefficient field (Euclid)."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


@lru_cache(maxsize=None)
def totient(m: int) -> int:
    if m < 1:
        raise ValueError("totient needs m >= 1")
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _divisors(m: int):
    return [d for d in range(1, m + 1) if m % d == 0]


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(m: int) -> tuple:
    num = [-1] + [0] * (m - 1) + [1]
    for d in _divisors(m)[:-1]:
        q, r = kernels.poly_divmod_monic(num, list(_cyclotomic_coeffs(d)))
        assert not r
        num = q
    return tuple(num)


def cyclotomic_poly(m: int) -> Poly:
    """The m-th cyclotomic polynomial, by exact division of x^m - 1."""
    if not isinstance(m, int) or m < 1:
        raise InputError(f"cyclotomic_poly needs a positive integer, got {m!r}")
    return Poly(_cyclotomic_coeffs(m))


def _check_monic_integral(p: Poly) -> list:
    if p.is_zero():
        raise NotMonicError("zero polynomial")
    if not p.is_integral():
        raise InputError(f"{p} does not have integer coefficients")
    if not p.is_monic():
        raise NotMonicError(f"{p} is not monic")
    if p.coeffs[0] == 0:
        raise NotMonicError(f"{p} has zero constant term")
    return [int(c) for c in p.coeffs]


def cyclotomic_candidates(n: int) -> list[int]:
    """All d with totient(d) <= n; uses totient(d) >= sqrt(d/2), so d <= 2 n^2."""
    return [d for d in range(1, 2 * n * n + 1) if totient(d) <= n]


def is_cyclotomic_product(p: Poly) -> tuple[int, ...] | None:
    """Indices ``(d_1 <= d_2 <= ...)`` with ``p = prod Phi_{d_i}``, or None."""
    rem = _check_monic_integral(p)
    n = len(rem) - 1
    found = []
    for d in cyclotomic_candidates(n):
        phi_d = list(_cyclotomic_coeffs(d))
        while len(rem) - 1 >= len(phi_d) - 1:
            q, r = kernels.poly_divmod_monic(rem, phi_d)
            if r:
                break
            rem = q
            found.append(d)
        if len(rem) == 1:
            break
    if rem != [1]:
        return None
    return tuple(found)


def _graeffe(c: list) -> list:
    # roots squared; c monic integer, lowest degree first
    n = len(c) - 1
    neg = [x if i % 2 == 0 else -x for i, x in enumerate(c)]
    prod = kernels.poly_mul(c, neg)
    out = prod[0::2]
    if n % 2:
        out = [-x for x in out]
    return out


def _roots_on_unit_circle(c: list) -> bool:
    # Kronecker: iterate root-squaring; bounded coefficients forever <=> all |root| <= 1
    n = len(c) - 1
    bounds = [comb(n, k) for k in range(n + 1)]
    seen = set()
    cur = c
    while True:
        key = tuple(cur)
        if key in seen:
            return abs(cur[0]) == 1
        seen.add(key)
        if any(abs(x) > bounds[k] for k, x in enumerate(cur)):
            return False
        cur = _graeffe(cur)


def _x_power_mod(e: int, mod: list) -> list:
    result = [1]
    base = [0, 1]
    _, base = kernels.poly_divmod_monic(base, mod)
    while e:
        if e & 1:
            _, result = kernels.poly_divmod_monic(kernels.poly_mul(result, base), mod)
        e >>= 1
        if e:
            _, base = kernels.poly_divmod_monic(kernels.poly_mul(base, base), mod)
    return result


def kronecker_oracle(p: Poly) -> bool:
    """True iff every root of ``p`` is a root of unity.

    Independent of cyclotomic peeling: the squarefree part must divide
    ``x^L - 1`` with ``L = lcm{d : totient(d) <= deg p}``.  A root-squaring
    bound check runs first so that non-examples fail before ``x^L`` is formed.
    """
    coeffs = _check_monic_integral(p)
    n = len(coeffs) - 1
    if n == 0:
        return True
    g = poly_gcd(p, p.derivative())
    s = p.exact_div(g).monic().to_int()
    sc = list(s.coeffs)
    if len(sc) == 1:
        return True
    if not _roots_on_unit_circle(sc):
        return False
    big_l = reduce(lcm, cyclotomic_candidates(n), 1)
    return _x_power_mod(big_l, sc) == [1]


class CycloField:
    """The cyclotomic field Q(zeta_m) in the power basis 1, zeta, ..., zeta^(phi-1).

    Use :func:`cyclo_field` to obtain instances; they are cached per conductor.
    """

    __slots__ = ("conductor", "modulus", "degree", "_table", "_powers", "_units")

    def __init__(self, conductor: int):
        if not isinstance(conductor, int) or conductor < 1:
            raise InputError(f"conductor must be a positive integer, got {conductor!r}")
        self.conductor = conductor
        self.modulus = cyclotomic_poly(conductor)
        self.degree = totient(conductor)
        phi = self.degree
        mod = list(self.modulus.coeffs)
        self._table = []
        for k in range(phi, 2 * phi - 1):
            _, r = kernels.poly_divmod_monic([0] * k + [1], mod)
            self._table.append(r + [0] * (phi - len(r)))
        self._powers = []
        for e in range(conductor):
            _, r = kernels.poly_divmod_monic([0] * e + [1], mod)
            self._powers.append(tuple(r + [0] * (phi - len(r))))
        self._units = tuple(j for j in range(1, conductor + 1) if gcd(j, conductor) == 1)

    def __eq__(self, other):
        return isinstance(other, CycloField) and other.conductor == self.conductor

    def __hash__(self):
        return hash(("CycloField", self.conductor))

    def __repr__(self):
        return f"cyclo_field({self.conductor})"

    @property
    def galois_units(self) -> tuple[int, ...]:
        return self._units

    def __call__(self, value) -> CycloNumber:
        return self.coerce(value)

    def coerce(self, value) -> CycloNumber:
        if isinstance(value, CycloNumber):
            if value.field != self:
                raise FieldMismatchError(f"conductor {value.field.conductor} != {self.conductor}")
            return value
        q = Fraction(value)
        nums = [0] * self.degree
        nums[0] = q.numerator
        return CycloNumber._make(self, nums, q.denominator)

    def zero(self) -> CycloNumber:
        return CycloNumber._make(self, [0] * self.degree, 1)

    def one(self) -> CycloNumber:
        return self.coerce(1)

    def zeta(self, e: int = 1) -> CycloNumber:
        return CycloNumber._make(self, list(self._powers[e % self.conductor]), 1)

    def roots_of_unity(self) -> list[CycloNumber]:
        """Every root of unity in the field, without repeats (``+-zeta^e``)."""
        out = []
        seen = set()
        for e in range(self.conductor):
            for sign in (1, -1):
                z = self.zeta(e) * sign
                if z not in seen:
                    seen.add(z)
                    out.append(z)
        return out

    def from_strings(self, entries) -> CycloNumber:
        if not isinstance(entries, (list, tuple)):
            raise InputError(f"cyclotomic entry must be an array, got {entries!r}")
        if len(entries) != self.degree:
            raise InputError(
                f"coefficient vector has length {len(entries)}, expected {self.degree} "
                f"for conductor {self.conductor}")
        return CycloNumber(self, [parse_rational(e) for e in entries])


@lru_cache(maxsize=None)
def cyclo_field(conductor: int) -> CycloField:
    return CycloField(conductor)


class CycloNumber:
    """Element of Q(zeta_m) stored as integer numerators over one positive denominator."""

    __slots__ = ("field", "_num", "_den", "_hash")

    def __init__(self, field: CycloField, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != field.degree:
            raise InputError(f"expected {field.degree} coefficients, got {len(coeffs)}")
        den = reduce(lcm, (c.denominator for c in coeffs), 1)
        nums = [c.numerator * (den // c.denominator) for c in coeffs]
        self._init(field, nums, den)

    def _init(self, field, nums, den):
        g = reduce(gcd, nums, den)
        if den < 0:
            g = -g
        if g != 1:
            nums = [x // g for x in nums]
            den //= g
        self.field = field
        self._num = tuple(nums)
        self._den = den
        self._hash = None

    @classmethod
    def _make(cls, field, nums, den) -> CycloNumber:
        obj = cls.__new__(cls)
        obj._init(field, nums, den)
        return obj

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._den) for x in self._num)

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def _coerce(self, other) -> CycloNumber | None:
        if isinstance(other, CycloNumber):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(
                    f"conductor {other.field.conductor} != {self.field.conductor}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    def __bool__(self):
        return any(self._num)

    def __eq__(self, other):
        if isinstance(other, CycloNumber):
            return (other.field == self.field and other._den == self._den
                    and other._num == self._num)
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return (self.is_rational() and self._num[0] == q.numerator
                    and self._den == q.denominator)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._num[0], self._den))
            else:
                self._hash = hash((self.field.conductor, self._num, self._den))
        return self._hash

    def __repr__(self):
        return f"CycloNumber({self.field.conductor}, {self})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(format_rational(c))
                continue
            mono = "zeta" if i == 1 else f"zeta^{i}"
            if c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{format_rational(c)}*{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __neg__(self):
        return CycloNumber._make(self.field, [-x for x in self._num], self._den)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d1, d2 = self._den, o._den
        if d1 == d2:
            nums = [a + b for a, b in zip(self._num, o._num)]
            return CycloNumber._make(self.field, nums, d1)
        nums = [a * d2 + b * d1 for a, b in zip(self._num, o._num)]
        return CycloNumber._make(self.field, nums, d1 * d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloNumber._make(self.field, [x * other for x in self._num], self._den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.field.degree == 1:
            nums = [self._num[0] * o._num[0]]
        else:
            nums = kernels.cyclo_mulmod(list(self._num), list(o._num), self.field._table)
        return CycloNumber._make(self.field, nums, self._den * o._den)

    __rmul__ = __mul__

    def galois_apply(self, j: int) -> CycloNumber:
        """Image under the automorphism zeta -> zeta^j (requires gcd(j, m) = 1)."""
        m = self.field.conductor
        if gcd(j, m) != 1:
            raise InputError(f"galois_apply needs gcd(j, m) = 1, got j={j}, m={m}")
        phi = self.field.degree
        out = [0] * phi
        powers = self.field._powers
        for i, c in enumerate(self._num):
            if c:
                vec = powers[(i * j) % m]
                for t in range(phi):
                    if vec[t]:
                        out[t] += c * vec[t]
        return CycloNumber._make(self.field, out, self._den)

    def norm(self) -> Fraction:
        """Field norm to Q: product of all Galois conjugates."""
        acc = self.field.one()
        for j in self.field.galois_units:
            acc = acc * self.galois_apply(j)
        return acc.to_fraction()

    def inverse(self) -> CycloNumber:
        if not self:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.field.degree == 1:
            return self.field.coerce(Fraction(self._den, self._num[0]))
        cofactor = self.field.one()
        for j in self.field.galois_units:
            if j % self.field.conductor != 1:
                cofactor = cofactor * self.galois_apply(j)
        n = (cofactor * self).to_fraction()
        return cofactor * (1 / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def invert(a: CycloNumber) -> CycloNumber:
    return a.inverse()


def galois_apply(j: int, a: CycloNumber) -> CycloNumber:
    return a.galois_apply(j)


def galois_norm(p: Poly, field: CycloField | None = None) -> Poly:
    """Rational polynomial ``prod_sigma sigma(p)`` over Gal(Q(zeta_m)/Q).

    Every root of ``p`` is a root of the result.  ``field`` is only needed
    when ``p`` has plain rational coefficients.
    """
    if p.is_zero() or not p.is_monic():
        raise NotMonicError(f"galois_norm needs a monic polynomial, got {p}")
    if field is None:
        field = next((c.field for c in p.coeffs if isinstance(c, CycloNumber)), None)
    if field is None:
        raise InputError("galois_norm needs a field for rational input")
    lifted = Poly(field.coerce(c) for c in p.coeffs)
    acc = Poly([field.one()])
    for j in field.galois_units:
        acc = acc * lifted.map(lambda c, j=j: c.galois_apply(j))
    out = []
    for c in acc.coeffs:
        if not c.is_rational():
            raise AssertionError("Galois norm has an irrational coefficient")
        q = c.to_fraction()
        out.append(q.numerator if q.denominator == 1 else q)
    return Poly(out)
