"""Sparse multivariate polynomials with cyclotomic coefficients."""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from ..arith import lcm
from ..cyclotomic import ONE, ZERO, CycloElement, as_cyclo, render
from ..errors import ArityError

MultiIndex = Tuple[int, ...]


def glex_key(n: Sequence[int]):
    """Graded order: total degree first, then larger exponent of x1, x2, ... first."""
    return (sum(n), tuple(-e for e in n))


def simplex(m: int, N: int):
    """All multi-indices of length m with total degree <= N, in graded order."""
    for s in range(N + 1):
        yield from compositions(s, m)


def compositions(s: int, m: int):
    if m == 1:
        yield (s,)
        return
    for first in range(s, -1, -1):
        for rest in compositions(s - first, m - 1):
            yield (first,) + rest


class MultiPoly:
    """
    Polynomial in x1..xm stored as ``{exponent tuple: CycloElement}``.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term dictionaries agree.
    """

    __slots__ = ("m", "terms", "_hash")

    def __init__(self, m: int, terms: Optional[Mapping] = None):
        if m < 1:
            raise ValueError("a polynomial needs at least one variable")
        self.m = m
        clean: Dict[MultiIndex, CycloElement] = {}
        for n, c in (terms or {}).items():
            n = tuple(int(e) for e in n)
            if len(n) != m or any(e < 0 for e in n):
                raise ArityError(f"exponent {n} does not fit {m} variables")
            c = as_cyclo(c)
            if not c.is_zero():
                prev = clean.get(n)
                c = c if prev is None else prev + c
                if c.is_zero():
                    clean.pop(n, None)
                else:
                    clean[n] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, m: int, c=1) -> "MultiPoly":
        return cls(m, {(0,) * m: c})

    @classmethod
    def variable(cls, m: int, i: int) -> "MultiPoly":
        """The variable x_i (1-based)."""
        if not 1 <= i <= m:
            raise ArityError(f"x{i} is not among {m} variables")
        e = [0] * m
        e[i - 1] = 1
        return cls(m, {tuple(e): ONE})

    @classmethod
    def monomial(cls, n: Sequence[int], c=1) -> "MultiPoly":
        return cls(len(n), {tuple(n): c})

    # -- queries ------------------------------------------------------------

    def __getitem__(self, n) -> CycloElement:
        return self.terms.get(tuple(n), ZERO)

    def constant_term(self) -> CycloElement:
        return self[(0,) * self.m]

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(n) == 0 for n in self.terms)

    @property
    def total_degree(self) -> int:
        return max((sum(n) for n in self.terms), default=-1)

    def support(self):
        return sorted(self.terms, key=glex_key)

    def sorted_terms(self):
        return [(n, self.terms[n]) for n in self.support()]

    def conductor(self) -> int:
        return lcm(*(c.conductor for c in self.terms.values())) if self.terms else 1

    def coefficient_den(self) -> int:
        return lcm(*(c.den() for c in self.terms.values())) if self.terms else 1

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly(self.m, {n: c for n, c in self.terms.items() if sum(n) == d})

    def truncate(self, N: int) -> "MultiPoly":
        return MultiPoly(self.m, {n: c for n, c in self.terms.items() if sum(n) <= N})

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if other.m != self.m:
            raise ArityError(f"cannot combine polynomials in {self.m} and {other.m} variables")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.m, as_cyclo(other))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for n, c in other.terms.items():
            out[n] = out[n] + c if n in out else c
        return MultiPoly(self.m, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.m, {n: -c for n, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = as_cyclo(other)
            return MultiPoly(self.m, {n: v * c for n, v in self.terms.items()})
        self._check(other)
        out: Dict[MultiIndex, CycloElement] = {}
        for n1, c1 in self.terms.items():
            for n2, c2 in other.terms.items():
                n = tuple(a + b for a, b in zip(n1, n2))
                v = c1 * c2
                out[n] = out[n] + v if n in out else v
        return MultiPoly(self.m, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = MultiPoly.constant(self.m, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly(self.m, {n: fn(c) for n, c in self.terms.items()})

    def conjugate(self) -> "MultiPoly":
        return self.map_coefficients(lambda c: c.conjugate())

    def evaluate(self, point: Sequence) -> CycloElement:
        if len(point) != self.m:
            raise ArityError(f"point has {len(point)} coordinates, expected {self.m}")
        point = [as_cyclo(p) for p in point]
        total = ZERO
        for n, c in self.terms.items():
            v = c
            for p, e in zip(point, n):
                if e:
                    v = v * p ** e
            total = total + v
        return total

    def evaluate_complex(self, point: Sequence[complex]) -> complex:
        total = 0j
        for n, c in self.terms.items():
            v = complex(c)
            for p, e in zip(point, n):
                if e:
                    v *= p ** e
            total += v
        return total

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Replace x_i by ``images[i]`` (all images share one variable count)."""
        if len(images) != self.m:
            raise ArityError(f"need {self.m} images, got {len(images)}")
        target_m = images[0].m
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] ** e
            return powers[key]

        total = MultiPoly(target_m)
        for n, c in self.terms.items():
            term = MultiPoly.constant(target_m, c)
            for i, e in enumerate(n):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def line_specialize(self, betas: Sequence) -> "MultiPoly":
        """x_i -> beta_i * t, giving a univariate polynomial in t."""
        betas = [as_cyclo(b) for b in betas]
        if len(betas) != self.m:
            raise ArityError(f"need {self.m} line coefficients, got {len(betas)}")
        out: Dict[MultiIndex, CycloElement] = {}
        for n, c in self.terms.items():
            v = c
            for b, e in zip(betas, n):
                if e:
                    v = v * b ** e
            key = (sum(n),)
            out[key] = out[key] + v if key in out else v
        return MultiPoly(1, out)

    def affine_substitute(self, alphas: Sequence) -> "MultiPoly":
        """x_m -> sum alpha_i x_i, dropping one variable."""
        if self.m < 2 or len(alphas) != self.m - 1:
            raise ArityError(f"need {self.m - 1} coefficients for the last variable")
        k = self.m - 1
        images = [MultiPoly.variable(k, i + 1) for i in range(k)]
        images.append(MultiPoly(k, {tuple(int(i == j) for j in range(k)): a for i, a in enumerate(alphas)}))
        return self.substitute(images)

    def exact_divide(self, divisor: "MultiPoly") -> Optional["MultiPoly"]:
        """Quotient when ``divisor`` divides self exactly; requires divisor(0) != 0."""
        self._check(divisor)
        d0 = divisor.constant_term()
        if d0.is_zero():
            raise ValueError("exact_divide needs a divisor with nonzero constant term")
        if self.is_zero():
            return MultiPoly(self.m)
        qdeg = self.total_degree - divisor.total_degree
        if qdeg < 0:
            return None
        inv = d0.inverse()
        dterms = [(n, c) for n, c in divisor.terms.items() if any(n)]
        q: Dict[MultiIndex, CycloElement] = {}
        for n in simplex(self.m, qdeg):
            acc = self[n]
            for k, c in dterms:
                src = tuple(a - b for a, b in zip(n, k))
                if min(src) >= 0 and src in q:
                    acc = acc - c * q[src]
            if not acc.is_zero():
                q[n] = acc * inv
        quotient = MultiPoly(self.m, q)
        return quotient if quotient * divisor == self else None

    # -- protocol -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.m == other.m and self.terms == other.terms
        if isinstance(other, (int, CycloElement)):
            return self == MultiPoly.constant(self.m, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.m}, '{self}')"

    def __str__(self):
        return self.to_dsl()

    def to_dsl(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.m)]
        if not self.terms:
            return "0"
        pieces = []
        for n, c in self.sorted_terms():
            mono = "*".join(
                (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(n) if e
            )
            if c.is_rational():
                q = c.to_fraction()
                mag = abs(q)
                neg = q < 0
                cs = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
                if not mono:
                    body = cs
                elif mag == 1:
                    body = mono
                else:
                    body = f"{cs}*{mono}"
            else:
                neg = False
                body = f"({render(c)})" + (f"*{mono}" if mono else "")
            pieces.append(("-" if neg else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict:
        return {"m": self.m, "terms": [{"n": list(n), "c": render(c)} for n, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiPoly":
        return cls(int(data["m"]), {tuple(t["n"]): as_cyclo(t["c"]) for t in data["terms"]})


def product(polys: Iterable[MultiPoly], m: int) -> MultiPoly:
    out = MultiPoly.constant(m, 1)
    for p in polys:
        out = out * p
    return out


def binomial(m: int, zeta_value, q: Sequence[int]) -> MultiPoly:
    """The torsion binomial 1 - zeta * x^q."""
    return MultiPoly(m, {(0,) * m: ONE, tuple(q): -as_cyclo(zeta_value)})


def all_exponents_upto(m: int, d: int):
    return list(itertools.chain.from_iterable(compositions(s, m) for s in range(d + 1)))
