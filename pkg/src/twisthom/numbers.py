"""Exact scalar arithmetic: rationals, cyclotomic fields and Laurent polynomials.

Rationals are plain ``fractions.Fraction`` (already canonical: gcd 1, positive
denominator).  ``Cyclo`` represents elements of Q(zeta_n) reduced modulo the
n-th cyclotomic polynomial, ``Laurent`` represents elements of Q[t, t^-1].
Floats never appear here; numeric cross-checks live in the test suite.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a rational value: {x!r}")


# ---------------------------------------------------------------------------
# dense Q[x] helpers (coefficient lists, index = exponent, no trailing zeros)
# ---------------------------------------------------------------------------

def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else ZERO) - (b[i] if i < len(b) else ZERO) for i in range(n)]
    return _poly_trim(out)


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [ZERO] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(r) >= len(b):
        c = r[-1] * inv_lead
        d = len(r) - len(b)
        if c:
            q[d] = c
            for i, bi in enumerate(b):
                r[d + i] -= c * bi
        assert r[-1] == 0
        r.pop()
    return _poly_trim(q), _poly_trim(r)


@functools.cache
def euler_phi(n: int) -> int:
    assert n >= 1
    out = n
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


@functools.cache
def _cyclotomic_coeffs(n: int) -> tuple[Fraction, ...]:
    # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact division.
    num = [ZERO] * (n + 1)
    num[0], num[n] = Fraction(-1), ONE
    den = [ONE]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul(den, list(_cyclotomic_coeffs(d)))
    q, r = _poly_divmod(num, den)
    assert not r
    return tuple(q)


# ---------------------------------------------------------------------------
# cyclotomic numbers
# ---------------------------------------------------------------------------

class Cyclo:
    """An element of Q(zeta_n), stored as coefficients of 1, z, ..., z^(phi(n)-1).

    The representation is canonical for a fixed conductor; binary operations
    embed both arguments into the lcm of their conductors first.
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs):
        phi = euler_phi(conductor)
        coeffs = tuple(as_fraction(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"need {phi} coefficients for conductor {conductor}, got {len(coeffs)}")
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("Cyclo values are immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(x, conductor: int = 1) -> "Cyclo":
        x = as_fraction(x)
        coeffs = [x] + [ZERO] * (euler_phi(conductor) - 1)
        return Cyclo(conductor, coeffs)

    @staticmethod
    def zero(conductor: int = 1) -> "Cyclo":
        return Cyclo.from_rational(0, conductor)

    @staticmethod
    def one(conductor: int = 1) -> "Cyclo":
        return Cyclo.from_rational(1, conductor)

    @staticmethod
    def root_of_unity(n: int, k: int = 1) -> "Cyclo":
        """zeta_n^k as an element of Q(zeta_n)."""
        k %= n
        poly = [ZERO] * k + [ONE]
        return Cyclo(n, _reduce_mod_cyclotomic(poly, n))

    # -- internals ---------------------------------------------------------

    def _embedded(self, m: int) -> tuple[Fraction, ...]:
        n = self.conductor
        if m == n:
            return self.coeffs
        if m % n != 0:
            raise ValueError(f"conductor {n} does not divide {m}")
        step = m // n
        poly = [ZERO] * ((len(self.coeffs) - 1) * step + 1) if self.coeffs else [ZERO]
        for i, c in enumerate(self.coeffs):
            if c:
                poly[i * step] = c
        return tuple(_reduce_mod_cyclotomic(poly, m))

    def embed(self, m: int) -> "Cyclo":
        """The same field element written with conductor m (n must divide m)."""
        return Cyclo(m, self._embedded(m))

    # -- ring/field structure ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyclo):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclo.from_rational(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        m = _lcm(self.conductor, other.conductor)
        a, b = self._embedded(m), other._embedded(m)
        return Cyclo(m, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.conductor, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        m = _lcm(self.conductor, other.conductor)
        a, b = self._embedded(m), other._embedded(m)
        prod = _poly_mul(list(a), list(b))
        return Cyclo(m, _reduce_mod_cyclotomic(prod, m))

    __rmul__ = __mul__

    def invert(self) -> "Cyclo":
        """Multiplicative inverse, by the extended Euclidean algorithm mod Phi_n."""
        if not self:
            raise ZeroDivisionError("inverting zero cyclotomic number")
        n = self.conductor
        phi = list(_cyclotomic_coeffs(n))
        # Extended Euclid keeping u with u*self = a (mod Phi_n); Phi_n is
        # irreducible so the loop ends with a nonzero constant a.
        a, b = _poly_trim(list(self.coeffs)), phi
        u0, u1 = [ONE], []
        while b:
            q, r = _poly_divmod(a, b)
            a, b = b, r
            u0, u1 = u1, _poly_sub(u0, _poly_mul(q, u1))
        assert len(a) == 1
        g_inv = 1 / a[0]
        inv = [c * g_inv for c in u0]
        return Cyclo(n, _reduce_mod_cyclotomic(inv, n))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        return self.invert() * other

    def conjugate(self) -> "Cyclo":
        """Complex conjugation: the field automorphism zeta |-> zeta^(n-1)."""
        n = self.conductor
        if n == 1:
            return self
        poly = [ZERO] * n
        for i, c in enumerate(self.coeffs):
            if c:
                poly[(n - i) % n] += c
        return Cyclo(n, _reduce_mod_cyclotomic(poly, n))

    # -- predicates ---------------------------------------------------------

    def __bool__(self):
        return any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        m = _lcm(self.conductor, other.conductor)
        return self._embedded(m) == other._embedded(m)

    def __hash__(self):
        # Equal values may carry different conductors, so only the rational
        # case gets a discriminating hash; irrational values collide safely.
        if self.is_rational():
            return hash(self.coeffs[0])
        return 0x5EED

    def __repr__(self):
        terms = [f"{c}*z{self.conductor}^{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"

    def key(self) -> tuple:
        """Hashable canonical key (valid between values of equal conductor)."""
        return (self.conductor, self.coeffs)


def _reduce_mod_cyclotomic(poly: list[Fraction], n: int) -> list[Fraction]:
    phi = euler_phi(n)
    poly = _poly_trim(list(poly))
    if len(poly) > phi:
        _, poly = _poly_divmod(poly, list(_cyclotomic_coeffs(n)))
    return poly + [ZERO] * (phi - len(poly))


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# ---------------------------------------------------------------------------
# Laurent polynomials over Q
# ---------------------------------------------------------------------------

class Laurent:
    """Element of Q[t, t^-1] as a map exponent -> nonzero rational coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                c = as_fraction(c)
                if c:
                    c0 = clean.get(e, ZERO) + c
                    if c0:
                        clean[int(e)] = c0
                    else:
                        clean.pop(e, None)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, *a):
        raise AttributeError("Laurent values are immutable")

    @staticmethod
    def t_power(k: int, coeff=1) -> "Laurent":
        return Laurent({k: coeff})

    @staticmethod
    def const(c) -> "Laurent":
        return Laurent({0: c})

    @staticmethod
    def from_int_coeffs(coeffs) -> "Laurent":
        """Polynomial from a low-to-high coefficient list starting at t^0."""
        return Laurent({i: c for i, c in enumerate(coeffs)})

    # -- ring structure -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Laurent):
            return other
        if isinstance(other, (int, Fraction)):
            return Laurent.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return Laurent(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, ZERO) + c1 * c2
        return Laurent(out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    # -- structure ----------------------------------------------------------

    def valuation(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no valuation")
        return min(self.terms)

    def degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(self.terms)

    def leading_coeff(self) -> Fraction:
        return self.terms[self.degree()]

    def is_unit(self) -> bool:
        """Units of Q[t, t^-1] are exactly the monomials c*t^k."""
        return len(self.terms) == 1

    def is_one(self) -> bool:
        return self.terms == {0: ONE}

    def unit_normalize(self) -> "Laurent":
        """Divide by the unit c*t^k: monic with nonzero constant term; zero stays zero."""
        if not self.terms:
            return self
        v = self.valuation()
        lead = self.leading_coeff()
        return Laurent({e - v: c / lead for e, c in self.terms.items()})

    def shift(self, k: int) -> "Laurent":
        return Laurent({e + k: c for e, c in self.terms.items()})

    def evaluate(self, x: Fraction) -> Fraction:
        x = as_fraction(x)
        out = ZERO
        for e, c in self.terms.items():
            out += c * x ** e
        return out

    def substitute_inverse(self) -> "Laurent":
        """t |-> t^-1."""
        return Laurent({-e: c for e, c in self.terms.items()})

    # -- Euclidean structure (via the polynomial part) ----------------------

    def _as_poly(self) -> tuple[list[Fraction], int]:
        """Coefficient list of t^-v * self (a polynomial) plus the valuation v."""
        if not self.terms:
            return [], 0
        v = self.valuation()
        out = [ZERO] * (self.degree() - v + 1)
        for e, c in self.terms.items():
            out[e - v] = c
        return out, v

    def divmod(self, other: "Laurent") -> tuple["Laurent", "Laurent"]:
        """Division with remainder: self = q*other + r, deg(poly part of r) < deg(other).

        Remainder degrees are measured after stripping t-valuations, which is
        the Euclidean function of Q[t, t^-1].
        """
        if not other:
            raise ZeroDivisionError("Laurent division by zero")
        a, va = self._as_poly()
        b, vb = other._as_poly()
        q, r = _poly_divmod(a, b)
        qp = Laurent({i + va - vb: c for i, c in enumerate(q)})
        rp = Laurent({i + va: c for i, c in enumerate(r)})
        return qp, rp

    def exact_div(self, other: "Laurent") -> "Laurent":
        q, r = self.divmod(other)
        if r:
            raise ValueError(f"{self!r} is not divisible by {other!r}")
        return q

    def divides(self, other: "Laurent") -> bool:
        """Whether self divides other in Q[t, t^-1]."""
        if not self:
            return not other
        return not other.divmod(self)[1]

    def gcd(self, other: "Laurent") -> "Laurent":
        """Monic, valuation-free gcd in Q[t, t^-1]."""
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.unit_normalize()

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.terms.items():
            if e == 0:
                bits.append(f"{c}")
            elif e == 1:
                bits.append(f"{c}*t")
            else:
                bits.append(f"{c}*t^{e}")
        return " + ".join(bits)


def cyclotomic_polynomial(n: int) -> Laurent:
    """The n-th cyclotomic polynomial Phi_n, monic of degree phi(n)."""
    if n < 1:
        raise ValueError("conductor must be positive")
    return Laurent({i: c for i, c in enumerate(_cyclotomic_coeffs(n))})
