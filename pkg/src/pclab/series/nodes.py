"""
Series expressions and their exact truncated expansion.

Nodes are frozen dataclasses, so expressions hash, compare structurally and
can be shared between pipelines.  :func:`expand` turns a node into a
:class:`CoeffTable`; results are memoised per node.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Iterable, Optional, Tuple

import numpy as np

from ..arith import lcm, totient
from ..cyclotomic import ONE, ZERO, CycloElement, _check_cap, _mul_vec, as_cyclo
from ..errors import ArityError, InvalidDenominatorError
from .poly import MultiPoly, compositions
from .table import (
    INT_LIMIT,
    CoeffTable,
    Shell,
    _add,
    _as_object,
    _colsum_bound,
    _matmul,
    _maxabs,
    _maybe_int64,
    _mult_matrix,
    _scale,
    conjugate_table,
    hadamard_rows,
    hadamard_tables,
    shell_exps,
    shell_rank,
    shell_size,
    single_rank,
    sum_rows,
)


class SeriesExpr:
    """Base class; subclasses define ``m`` (the variable count of the result)."""

    m: int

    def __add__(self, other):
        return _rational_op(self, other, "+")

    def __mul__(self, other):
        return _rational_op(self, other, "*")


@dataclass(frozen=True, eq=True)
class Rational(SeriesExpr):
    num: MultiPoly
    den: MultiPoly

    def __post_init__(self):
        if self.num.m != self.den.m:
            raise ArityError("numerator and denominator use different variable counts")
        if self.den.constant_term().is_zero():
            raise InvalidDenominatorError("denominator vanishes at the origin")

    @property
    def m(self) -> int:
        return self.num.m


@dataclass(frozen=True, eq=True)
class Oracle(SeriesExpr):
    name: str
    params: Tuple = ()

    def __post_init__(self):
        if self.name not in ORACLES:
            raise KeyError(f"unknown oracle {self.name!r}")

    @property
    def m(self) -> int:
        return ORACLES[self.name].m


@dataclass(frozen=True, eq=True)
class Hadamard(SeriesExpr):
    left: SeriesExpr
    right: SeriesExpr

    def __post_init__(self):
        if self.left.m != self.right.m:
            raise ArityError(f"Hadamard product of series in {self.left.m} and {self.right.m} variables")

    @property
    def m(self) -> int:
        return self.left.m


@dataclass(frozen=True, eq=True)
class Conjugate(SeriesExpr):
    inner: SeriesExpr

    @property
    def m(self) -> int:
        return self.inner.m


@dataclass(frozen=True, eq=True)
class AbsSquare(SeriesExpr):
    inner: SeriesExpr

    @property
    def m(self) -> int:
        return self.inner.m


@dataclass(frozen=True, eq=True)
class LineSpec(SeriesExpr):
    inner: SeriesExpr
    betas: Tuple[CycloElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(as_cyclo(b) for b in self.betas))
        if len(self.betas) != self.inner.m:
            raise ArityError(f"line needs {self.inner.m} coefficients, got {len(self.betas)}")

    @property
    def m(self) -> int:
        return 1


@dataclass(frozen=True, eq=True)
class AffineSub(SeriesExpr):
    inner: SeriesExpr
    alphas: Tuple[CycloElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(as_cyclo(a) for a in self.alphas))
        if self.inner.m < 2:
            raise ArityError("affine substitution needs at least two variables")
        if len(self.alphas) != self.inner.m - 1:
            raise ArityError(f"affine substitution needs {self.inner.m - 1} coefficients, got {len(self.alphas)}")

    @property
    def m(self) -> int:
        return self.inner.m - 1


def _rational_op(a, b, op):
    if not isinstance(a, Rational) or not isinstance(b, Rational):
        return NotImplemented
    if op == "+":
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den)
    return Rational(a.num * b.num, a.den * b.den)


# ---------------------------------------------------------------------------
# oracle registry


@dataclass(frozen=True)
class OracleSpec:
    name: str
    m: int
    coefficient: Callable  # (n, params) -> rational or CycloElement
    support: Optional[Callable] = None  # (N, params) -> iterable of multi-indices that may be nonzero
    description: str = ""


ORACLES: Dict[str, OracleSpec] = {}


def register_oracle(name: str, m: int, coefficient: Callable, support: Optional[Callable] = None, description: str = ""):
    ORACLES[name] = OracleSpec(name, m, coefficient, support, description)


def _log1p_coeff(n, params):
    k = int(params[0]) if params else 1
    (e,) = n
    if e == 0 or e % k:
        return 0
    j = e // k
    return Fraction((-1) ** (j + 1), j)


def _log1p_support(N, params):
    k = int(params[0]) if params else 1
    return [(k * j,) for j in range(1, N // k + 1)]


def _gap_support(N, params):
    out = []
    n = 0
    while n + factorial(n) <= N:
        out.append((n, factorial(n)))
        n += 1
    return out


def _catalan(n, params):
    from math import comb

    (e,) = n
    return comb(2 * e, e) // (e + 1)


register_oracle("log1p", 1, _log1p_coeff, _log1p_support, "log(1 + x^k)")
register_oracle("expseries", 1, lambda n, p: Fraction(1, factorial(n[0])), None, "sum x^n / n!")
register_oracle("gapfact", 2, lambda n, p: 1 if n[1] == factorial(n[0]) else 0, _gap_support, "sum x^n y^(n!)")
register_oracle("catalan", 1, _catalan, None, "sum Catalan(n) x^n")


# ---------------------------------------------------------------------------
# constructors


def rational(num, den=None, m: Optional[int] = None) -> Rational:
    if not isinstance(num, MultiPoly):
        num = MultiPoly.constant(m or (den.m if isinstance(den, MultiPoly) else 1), num)
    if den is None:
        den = MultiPoly.constant(num.m, 1)
    elif not isinstance(den, MultiPoly):
        den = MultiPoly.constant(num.m, den)
    return Rational(num, den)


def oracle(name: str, *params) -> Oracle:
    return Oracle(name, tuple(params))


def hadamard(F: SeriesExpr, G: SeriesExpr) -> Hadamard:
    return Hadamard(F, G)


def conjugate_series(F: SeriesExpr) -> Conjugate:
    return Conjugate(F)


def abs_square(F: SeriesExpr) -> AbsSquare:
    return AbsSquare(F)


def line_specialize(F: SeriesExpr, betas) -> LineSpec:
    return LineSpec(F, tuple(betas))


def affine_substitute(F: SeriesExpr, alphas) -> AffineSub:
    return AffineSub(F, tuple(alphas))


# ---------------------------------------------------------------------------
# expansion

_CACHE: "OrderedDict[SeriesExpr, CoeffTable]" = OrderedDict()
_CACHE_SIZE = 64


def clear_cache():
    _CACHE.clear()


def expand(F: SeriesExpr, N: int) -> CoeffTable:
    """Exact coefficients of F for every multi-index of total degree <= N."""
    if N < 0:
        raise ValueError("truncation degree must be non-negative")
    hit = _CACHE.get(F)
    if hit is not None and hit.N >= N:
        _CACHE.move_to_end(F)
        return hit if hit.N == N else hit.truncate(N)
    table = _expand(F, N)
    _CACHE[F] = table
    if len(_CACHE) > _CACHE_SIZE:
        _CACHE.popitem(last=False)
    return table


def _expand(F: SeriesExpr, N: int) -> CoeffTable:
    if isinstance(F, Rational):
        return expand_rational(F.num, F.den, N)
    if isinstance(F, Oracle):
        return _expand_oracle(F, N)
    if isinstance(F, Hadamard):
        return hadamard_tables(expand(F.left, N), expand(F.right, N))
    if isinstance(F, Conjugate):
        return conjugate_table(expand(F.inner, N))
    if isinstance(F, AbsSquare):
        T = expand(F.inner, N)
        return hadamard_tables(T, conjugate_table(T))
    if isinstance(F, LineSpec):
        if isinstance(F.inner, Rational):
            # substituting into A and B gives the same series exactly
            return expand_rational(F.inner.num.line_specialize(F.betas), F.inner.den.line_specialize(F.betas), N)
        return line_table(expand(F.inner, N), F.betas)
    if isinstance(F, AffineSub):
        if isinstance(F.inner, Rational):
            return expand_rational(
                F.inner.num.affine_substitute(F.alphas), F.inner.den.affine_substitute(F.alphas), N
            )
        return affine_table(expand(F.inner, N), F.alphas)
    raise TypeError(f"cannot expand {type(F).__name__}")


def _expand_oracle(F: Oracle, N: int) -> CoeffTable:
    spec = ORACLES[F.name]
    if spec.support is not None:
        indices: Iterable = spec.support(N, F.params)
    else:
        from .poly import simplex

        indices = simplex(spec.m, N)
    values = {}
    for n in indices:
        if sum(n) <= N:
            c = spec.coefficient(n, F.params)
            if c:
                values[tuple(n)] = as_cyclo(c) if not isinstance(c, CycloElement) else c
    return CoeffTable.from_mapping(spec.m, N, values)


@dataclass
class _Term:
    k: Tuple[int, ...]
    d: int
    scalar: Optional[int]
    matrix: Optional[np.ndarray]
    bound: int


def expand_rational(A: MultiPoly, B: MultiPoly, N: int) -> CoeffTable:
    """
    Coefficients of A/B from B*F = A, one total-degree shell at a time.

    Every shell is kept as integer numerators over one common denominator;
    the shift by each term of B is a gather on shell indices followed by an
    integer matrix product representing multiplication in Q(zeta_L).
    """
    m = A.m
    if B.m != m:
        raise ArityError("numerator and denominator use different variable counts")
    b0 = B.constant_term()
    if b0.is_zero():
        raise InvalidDenominatorError("denominator vanishes at the origin")
    L = lcm(A.conductor(), B.conductor())
    _check_cap(L)
    phi = totient(L)
    if b0 != ONE:
        inv = b0.inverse()
        A, B = A * inv, B * inv
        L = lcm(L, A.conductor(), B.conductor())
    DB = B.coefficient_den()
    DA = A.coefficient_den()

    terms = []
    for k, c in B.terms.items():
        d = sum(k)
        if d == 0 or d > N:
            continue
        vec = tuple((c * DB).embed(L))
        if all(v == 0 for v in vec[1:]):
            terms.append(_Term(k, d, int(vec[0]), None, abs(int(vec[0]))))
        else:
            M = _mult_matrix(L, vec)
            terms.append(_Term(k, d, None, M, _colsum_bound(M)))

    a_shells: Dict[int, list] = {}
    for n, c in A.terms.items():
        s = sum(n)
        if s <= N:
            a_shells.setdefault(s, []).append((single_rank(n), [v * (DA // c.den()) for v in c.embed(L)]))

    shells = []
    for s in range(N + 1):
        size = shell_size(s, m)
        used = [t for t in terms if t.d <= s]
        M_s = lcm(DA, *(shells[s - t.d].den for t in used)) if used else DA
        E_s = DB * M_s
        if s in a_shells:
            rows = np.zeros((size, phi), dtype=object)
            fac = DB * (M_s // DA)
            for r, vec in a_shells[s]:
                rows[r] = [v * fac for v in vec]
            acc = _maybe_int64(rows)
        else:
            acc = np.zeros((size, phi), dtype=np.int64)
        acc_bound = _maxabs(acc)
        exps = shell_exps(s, m) if used else None
        for t in used:
            src = shells[s - t.d]
            if src.num.shape[0] == 0:
                continue
            if t.d == s:
                # the only source index is 0, i.e. the target index equals k
                idx = np.array([single_rank(t.k)], dtype=np.int64)
                ranks = np.zeros(1, dtype=np.int64)
            else:
                mask = (exps >= np.asarray(t.k, dtype=np.int64)).all(axis=1)
                idx = np.nonzero(mask)[0]
                if idx.size == 0:
                    continue
                ranks = shell_rank(exps[idx] - np.asarray(t.k, dtype=np.int64), s - t.d, m)
            part = src.num[ranks]
            part = _scale(part, M_s // src.den)
            if t.scalar is not None:
                contrib = _scale(part, t.scalar)
            else:
                contrib = _matmul(part, t.matrix, t.bound)
            cb = _maxabs(contrib)
            if acc.dtype != object and contrib.dtype != object and acc_bound + cb < INT_LIMIT:
                acc[idx] -= contrib
            else:
                acc = _as_object(acc)
                acc[idx] -= _as_object(contrib)
            acc_bound += cb
        shells.append(Shell(_maybe_int64(acc) if acc.dtype == object else acc, E_s).reduced())
    return CoeffTable(m, N, L, shells)


def _power_rows(u: CycloElement, L: int, top: int) -> np.ndarray:
    phi = totient(L)
    vec = tuple(u.embed(L))
    rows = np.zeros((top + 1, phi), dtype=object)
    cur = tuple([1] + [0] * (phi - 1))
    for e in range(top + 1):
        rows[e] = cur
        cur = tuple(_mul_vec(L, cur, vec))
    return rows


def line_table(T: CoeffTable, betas) -> CoeffTable:
    """c_s = sum over the shell of f(n) * beta^n, computed shellwise on arrays."""
    betas = [as_cyclo(b) for b in betas]
    if len(betas) != T.m:
        raise ArityError(f"line needs {T.m} coefficients, got {len(betas)}")
    L = lcm(T.conductor, *(b.conductor for b in betas))
    _check_cap(L)
    D = lcm(*(b.den() for b in betas))
    powers = [_maybe_int64(_power_rows(b * D, L, T.N)) for b in betas]
    shells = []
    for s in range(T.N + 1):
        sh = T.shells[s].embedded(T.conductor, L)
        exps = shell_exps(s, T.m)
        W = powers[0][exps[:, 0]]
        for i in range(1, T.m):
            W = _maybe_int64(hadamard_rows(W, powers[i][exps[:, i]], L))
        total = sum_rows(hadamard_rows(sh.num, W, L))
        shells.append(Shell(_maybe_int64(np.asarray(total).reshape(1, -1)), sh.den * D**s).reduced())
    return CoeffTable(1, T.N, L, shells)


def affine_table(T: CoeffTable, alphas) -> CoeffTable:
    """x_m <- sum alpha_i x_i on a table, expanding the multinomials exactly."""
    alphas = [as_cyclo(a) for a in alphas]
    k = T.m - 1
    if k < 1 or len(alphas) != k:
        raise ArityError(f"affine substitution needs {max(k, 1)} coefficients")
    from math import factorial as fact

    weight_cache: Dict[int, list] = {}

    def weights(j):
        if j not in weight_cache:
            out = []
            for a in compositions(j, k):
                w = fact(j)
                c = ONE
                for ai, alpha in zip(a, alphas):
                    w //= fact(ai)
                    if ai:
                        c = c * alpha**ai
                out.append((a, c * w))
            weight_cache[j] = [(a, c) for a, c in out if not c.is_zero()]
        return weight_cache[j]

    values: Dict[Tuple[int, ...], CycloElement] = {}
    for n, c in T.nonzero_items():
        head, j = n[:-1], n[-1]
        for a, w in weights(j):
            key = tuple(x + y for x, y in zip(head, a))
            v = c * w
            values[key] = values[key] + v if key in values else v
    return CoeffTable.from_mapping(k, T.N, values)
