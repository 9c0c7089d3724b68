"""
Exact arithmetic in cyclotomic fields Q(zeta_n).

An element is stored in the power basis ``1, zeta, ..., zeta^(phi(n)-1)``
reduced modulo the n-th cyclotomic polynomial.  Internally the coordinates
are kept as a tuple of integers over one positive common denominator, which
keeps the hot arithmetic paths on machine-speed Python ints.

Examples
--------
>>> z4 = zeta(4)
>>> z4 * z4
CycloElement('-1')
>>> 1 / (1 + zeta(3))
CycloElement('-zeta(3)')
>>> str(Fraction(1, 2) + Fraction(1, 3) * zeta(5))
'1/2 + 1/3*zeta(5)'
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence

from .arith import divisors, lcm, mobius, totient
from .errors import ConductorOverflowError, CycloZeroDivisionError

DEFAULT_PHI_CAP = 64

__all__ = [
    "CycloElement",
    "IntPolynomial",
    "zeta",
    "field_arith",
    "conjugate",
    "minimal_polynomial",
    "den",
    "root_of_unity_order",
    "cyclotomic_polynomial",
    "as_cyclo",
    "DEFAULT_PHI_CAP",
    "render",
]


class IntPolynomial:
    """Integer polynomial, coefficients listed from the constant term up."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        coeffs = [int(c) for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def content(self) -> int:
        return gcd(*self.coeffs)

    def primitive(self) -> "IntPolynomial":
        g = self.content()
        if g == 0:
            return self
        if self.coeffs[-1] < 0:
            g = -g
        return IntPolynomial([c // g for c in self.coeffs])

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self.coeffs == IntPolynomial(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}" + (f"*{mono}" if mono else "")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _exact_divide(num: list, den: Sequence[int]) -> list:
    """Quotient of integer polynomials known to divide exactly (den monic up to sign)."""
    num = list(num)
    dl = len(den) - 1
    lead = den[-1]
    q = [0] * (len(num) - dl)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + dl]
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        c //= lead
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[:dl]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(k: int) -> tuple:
    num = [-1] + [0] * (k - 1) + [1]
    for d in divisors(k):
        if d < k:
            num = _exact_divide(num, _cyclotomic_coeffs(d))
    return tuple(num)


def cyclotomic_polynomial(k: int) -> IntPolynomial:
    """Return Phi_k, obtained by dividing x^k - 1 by Phi_d for the proper divisors d."""
    if k < 1:
        raise ValueError("cyclotomic_polynomial needs k >= 1")
    return IntPolynomial(_cyclotomic_coeffs(k))


class _Field:
    __slots__ = ("n", "phi", "cyc", "red", "units", "trace_weight")

    def __init__(self, n: int):
        self.n = n
        self.phi = totient(n)
        self.cyc = _cyclotomic_coeffs(n)
        phi = self.phi
        top = max(n, 2 * phi)
        red = []
        vec = [1] + [0] * (phi - 1)
        for e in range(top):
            red.append(tuple(vec))
            # multiply by zeta, then fold the overflow coefficient using Phi_n (monic)
            carry = vec[-1]
            vec = [0] + vec[:-1]
            if carry:
                for i in range(phi):
                    vec[i] -= carry * self.cyc[i]
        self.red = red
        self.units = [k for k in range(1, n + 1) if gcd(k, n) == 1] if n > 1 else [1]
        weights = []
        for j in range(phi):
            g = gcd(j, n)
            q = n // g
            weights.append(Fraction(mobius(q), totient(q)))
        self.trace_weight = tuple(weights)


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    return _Field(n)


def _check_cap(n: int, cap: int = DEFAULT_PHI_CAP) -> None:
    phi = totient(n)
    if phi > cap:
        raise ConductorOverflowError(n, phi, cap)


def _reduce(n: int, poly: Sequence[int]) -> list:
    """Reduce an integer polynomial in zeta_n to power-basis coordinates."""
    F = _field(n)
    phi = F.phi
    if len(poly) <= phi:
        return list(poly) + [0] * (phi - len(poly))
    out = list(poly[:phi])
    red = F.red
    for e in range(phi, len(poly)):
        c = poly[e]
        if c:
            r = red[e % n]
            for i in range(phi):
                if r[i]:
                    out[i] += c * r[i]
    return out


def _mul_vec(n: int, a: tuple, b: tuple) -> list:
    F = _field(n)
    phi = F.phi
    if phi == 1:
        return [a[0] * b[0]]
    prod = [0] * (2 * phi - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    out = prod[:phi]
    red = F.red
    for e in range(phi, 2 * phi - 1):
        c = prod[e]
        if c:
            r = red[e]
            for i in range(phi):
                if r[i]:
                    out[i] += c * r[i]
    return out


def _embed_vec(n: int, vec: tuple, L: int) -> list:
    if n == L:
        return list(vec)
    step = L // n
    FL = _field(L)
    out = [0] * FL.phi
    for j, c in enumerate(vec):
        if c:
            r = FL.red[(j * step) % L]
            for i, v in enumerate(r):
                if v:
                    out[i] += c * v
    return out


def _galois_vec(n: int, vec: tuple, k: int) -> list:
    F = _field(n)
    out = [0] * F.phi
    for j, c in enumerate(vec):
        if c:
            r = F.red[(j * k) % n]
            for i, v in enumerate(r):
                if v:
                    out[i] += c * v
    return out


class CycloElement:
    """
    Immutable element of Q(zeta_n).

    Parameters
    ----------
    conductor : int
        The n of Q(zeta_n).
    coeffs : sequence of rationals
        Power-basis coordinates.  Longer sequences are read as a polynomial in
        zeta_n and reduced modulo Phi_n.
    """

    __slots__ = ("_n", "_num", "_den", "_hash")

    def __init__(self, conductor: int = 1, coeffs: Sequence = (0,)):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        _check_cap(conductor)
        fr = [Fraction(c) for c in coeffs] or [Fraction(0)]
        d = lcm(*(c.denominator for c in fr))
        ints = [c.numerator * (d // c.denominator) for c in fr]
        n, num, dd = _normalize(conductor, _reduce(conductor, ints), d)
        self._n, self._num, self._den = n, num, dd
        self._hash = None

    @classmethod
    def _raw(cls, n: int, num: list, den: int) -> "CycloElement":
        obj = cls.__new__(cls)
        obj._n, obj._num, obj._den = _normalize(n, num, den)
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, value) -> "CycloElement":
        q = Fraction(value)
        return cls._raw(1, [q.numerator], q.denominator)

    # ---- accessors -------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def phi(self) -> int:
        return len(self._num)

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self) -> tuple:
        return self._num

    @property
    def common_denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return self._num[0] == 0 and self._n == 1

    def is_rational(self) -> bool:
        return self._n == 1

    def to_fraction(self) -> Fraction:
        if self._n != 1:
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def den(self) -> int:
        """Smallest d > 0 with d*a an algebraic integer (power basis == ring of integers)."""
        return self._den

    # ---- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycloElement):
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElement.rational(other)
        return None

    def _merged(self, other: "CycloElement", cap: int = DEFAULT_PHI_CAP):
        n1, n2 = self._n, other._n
        if n1 == n2:
            return n1, self._num, other._num
        if n1 == 1:
            return n2, (self._num[0],) + (0,) * (len(other._num) - 1), other._num
        if n2 == 1:
            return n1, self._num, (other._num[0],) + (0,) * (len(self._num) - 1)
        L = lcm(n1, n2)
        _check_cap(L, cap)
        return L, _embed_vec(n1, self._num, L), _embed_vec(n2, other._num, L)

    def _add(self, other, sign=1, cap=DEFAULT_PHI_CAP):
        L, a, b = self._merged(other, cap)
        d1, d2 = self._den, other._den
        if d1 == d2:
            num = [x + sign * y for x, y in zip(a, b)]
            return CycloElement._raw(L, num, d1)
        num = [x * d2 + sign * y * d1 for x, y in zip(a, b)]
        return CycloElement._raw(L, num, d1 * d2)

    def _mul(self, other, cap=DEFAULT_PHI_CAP):
        if other._n == 1:
            c = other._num[0]
            return CycloElement._raw(self._n, [x * c for x in self._num], self._den * other._den)
        if self._n == 1:
            c = self._num[0]
            return CycloElement._raw(other._n, [x * c for x in other._num], self._den * other._den)
        L, a, b = self._merged(other, cap)
        return CycloElement._raw(L, _mul_vec(L, a, b), self._den * other._den)

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else self._add(other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else self._add(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else other._add(self, -1)

    def __neg__(self):
        return CycloElement._raw(self._n, [-x for x in self._num], self._den)

    def __pos__(self):
        return self

    def __mul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else self._mul(other)

    __rmul__ = __mul__

    def inverse(self) -> "CycloElement":
        if self.is_zero():
            raise CycloZeroDivisionError(self)
        n = self._n
        if n == 1:
            return CycloElement._raw(1, [self._den], self._num[0])
        # a^{-1} = (prod of the other conjugates) / norm(a)
        F = _field(n)
        acc = None
        for k in F.units[1:]:
            g = _galois_vec(n, self._num, k)
            acc = g if acc is None else _mul_vec(n, tuple(acc), tuple(g))
        full = _mul_vec(n, self._num, tuple(acc))
        # num * acc is the rational norm of the numerator vector
        return CycloElement._raw(n, [c * self._den for c in acc], full[0])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise CycloZeroDivisionError(other)
        return self._mul(other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is None else other._mul(self.inverse())

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # ---- automorphisms ---------------------------------------------------

    def galois(self, k: int) -> "CycloElement":
        """Apply zeta_n -> zeta_n^k (k a unit mod n)."""
        if self._n == 1:
            return self
        if gcd(k, self._n) != 1:
            raise ValueError(f"{k} is not a unit modulo {self._n}")
        return CycloElement._raw(self._n, _galois_vec(self._n, self._num, k), self._den)

    def conjugate(self) -> "CycloElement":
        return self.galois(self._n - 1) if self._n > 1 else self

    def conjugates(self) -> list:
        """All phi(n) images under Gal(Q(zeta_n)/Q), listed by unit k."""
        return [self.galois(k) for k in _field(self._n).units]

    def embed(self, L: int) -> tuple:
        """Numerator coordinates of self inside Q(zeta_L); the common denominator is unchanged."""
        if L % self._n:
            raise ValueError(f"conductor {self._n} does not divide {L}")
        if self._n == 1:
            return (self._num[0],) + (0,) * (totient(L) - 1)
        return tuple(_embed_vec(self._n, self._num, L))

    def normalized_trace(self) -> Fraction:
        """Tr(a)/[K:Q]; independent of the conductor used to represent a."""
        w = _field(self._n).trace_weight
        return sum((Fraction(c) * w[j] for j, c in enumerate(self._num) if c), Fraction(0)) / self._den

    def norm(self) -> Fraction:
        acc = ONE
        for c in self.conjugates():
            acc = acc * c
        return acc.to_fraction()

    # ---- numerics --------------------------------------------------------

    def embedding(self, k: int = 1) -> complex:
        n = self._n
        w = cmath.exp(2j * math.pi * k / n)
        acc = 0j
        for c in reversed(self._num):
            acc = acc * w + c
        return acc / self._den

    def embeddings(self) -> list:
        return [self.embedding(k) for k in _field(self._n).units]

    def __complex__(self):
        return self.embedding(1)

    # ---- comparisons -----------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self._n == other._n:
            return self._den == other._den and self._num == other._num
        if self._n == 1 or other._n == 1:
            return False
        if self._den != other._den:
            return False
        L = lcm(self._n, other._n)
        return _embed_vec(self._n, self._num, L) == _embed_vec(other._n, other._num, L)

    def __hash__(self):
        if self._hash is None:
            if self._n == 1:
                self._hash = hash(Fraction(self._num[0], self._den))
            else:
                self._hash = hash(("cyclo", self.normalized_trace()))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycloElement('{self}')"

    def __str__(self):
        return render(self)


def _normalize(n: int, num: list, den: int):
    if den < 0:
        den = -den
        num = [-x for x in num]
    g = gcd(den, *num)
    if g > 1:
        num = [x // g for x in num]
        den //= g
    if n != 1 and not any(num[1:]):
        return 1, (num[0],), den
    if n == 1 and num[0] == 0:
        den = 1
    return n, tuple(num), den


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render(a: CycloElement) -> str:
    """Polynomial expression in ``zeta(n)`` that the DSL parser reads back."""
    parts = []
    for j, q in enumerate(a.coeffs):
        if q == 0:
            continue
        if j == 0:
            mono = ""
        elif j == 1:
            mono = f"zeta({a.conductor})"
        else:
            mono = f"zeta({a.conductor})^{j}"
        mag = abs(q)
        if not mono:
            body = _fmt_fraction(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_fraction(mag)}*{mono}"
        parts.append(("-" if q < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def as_cyclo(value) -> CycloElement:
    if isinstance(value, CycloElement):
        return value
    if isinstance(value, (int, Fraction)):
        return CycloElement.rational(value)
    if isinstance(value, str):
        from .dsl import parse_constant

        return parse_constant(value)
    raise TypeError(f"cannot interpret {value!r} as a cyclotomic element")


def zeta(n: int, k: int = 1) -> CycloElement:
    """zeta_n^k as an element of Q(zeta_n)."""
    _check_cap(n)
    F = _field(n)
    return CycloElement._raw(n, list(F.red[k % n]), 1)


ZERO = CycloElement.rational(0)
ONE = CycloElement.rational(1)


def field_arith(op: str, a, b, phi_cap: int = DEFAULT_PHI_CAP) -> CycloElement:
    """Binary field operation with an explicit phi-degree cap on the merged conductor."""
    a, b = as_cyclo(a), as_cyclo(b)
    if op == "add":
        return a._add(b, 1, phi_cap)
    if op == "sub":
        return a._add(b, -1, phi_cap)
    if op == "mul":
        return a._mul(b, phi_cap)
    if op == "div":
        if b.is_zero():
            raise CycloZeroDivisionError(b)
        return a._mul(b.inverse(), phi_cap)
    raise ValueError(f"unknown operation {op!r}")


def conjugate(a) -> CycloElement:
    return as_cyclo(a).conjugate()


def den(a) -> int:
    return as_cyclo(a).den()


def _poly_mul_cyc(p: list, q: list) -> list:
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] = out[i + j] + x * y
    return out


def minimal_polynomial(a) -> IntPolynomial:
    """
    Primitive integer minimal polynomial of ``a`` over Q.

    The characteristic polynomial of multiplication-by-a equals the product of
    (x - sigma(a)) over the Galois group; keeping each distinct conjugate once
    extracts its irreducible factor vanishing at ``a``.
    """
    a = as_cyclo(a)
    if a.is_rational():
        q = a.to_fraction()
        return IntPolynomial([-q.numerator, q.denominator])
    distinct = []
    seen = set()
    for c in a.conjugates():
        key = (c._n, c._num, c._den)
        if key not in seen:
            seen.add(key)
            distinct.append(c)
    poly = [ONE]
    for c in distinct:
        poly = _poly_mul_cyc(poly, [-c, ONE])
    fr = [c.to_fraction() for c in poly]
    d = lcm(*(f.denominator for f in fr))
    return IntPolynomial([int(f * d) for f in fr]).primitive()


def root_of_unity_order(a, tol: float = 1e-6) -> Optional[int]:
    """Order k if ``a`` is a primitive k-th root of unity, else None."""
    a = as_cyclo(a)
    if a.den() != 1 or a.is_zero():
        return None
    if any(abs(abs(e) - 1.0) > tol for e in a.embeddings()):
        return None
    L = lcm(2, a.conductor)
    if a ** L != ONE:
        return None
    for k in divisors(L):
        if a ** k == ONE:
            return k
    return None  # pragma: no cover - L itself always works
