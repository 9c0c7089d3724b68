"""
Truncated coefficient tables and the vectorised shell kernels behind them.

A table for an m-variate series truncated at total degree N is a list of
*shells*, one per total degree s.  Shell s holds the C(s+m-1, m-1)
coefficients with ||n|| = s in graded order, as an integer array of shape
``(count, phi(L))`` over one common positive denominator, where L is the
table conductor.  Arrays are int64 while a magnitude bound proves every
intermediate fits, and Python-int object arrays otherwise; both are exact.
"""

from __future__ import annotations

import csv
import io
import json
from functools import lru_cache
from math import gcd
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..arith import lcm, totient
from ..cyclotomic import CycloElement, _check_cap, _embed_vec, _field, _galois_vec, _mul_vec, as_cyclo, render
from .poly import MultiIndex, compositions, glex_key

INT_LIMIT = 2**62


# ---------------------------------------------------------------------------
# multi-index bookkeeping


@lru_cache(maxsize=None)
def _binom_row_table(size: int, m: int) -> np.ndarray:
    table = np.zeros((size + 1, m + 1), dtype=object)
    for a in range(size + 1):
        table[a, 0] = 1
        for b in range(1, min(a, m) + 1):
            table[a, b] = table[a - 1, b - 1] + (table[a - 1, b] if b <= a - 1 else 0)
    if size < 2000:
        return table.astype(np.int64)
    return table


def _binom_table(size: int, m: int) -> np.ndarray:
    # round the size up so the cache stays small
    rounded = 1 << max(6, (size - 1).bit_length())
    return _binom_row_table(rounded, m)


def shell_size(s: int, m: int) -> int:
    from math import comb

    return comb(s + m - 1, m - 1)


@lru_cache(maxsize=1024)
def shell_exps(s: int, m: int) -> np.ndarray:
    arr = np.array(list(compositions(s, m)), dtype=np.int64).reshape(-1, m)
    arr.setflags(write=False)
    return arr


def shell_rank(exps: np.ndarray, s: int, m: int) -> np.ndarray:
    """Position of each composition of s inside :func:`shell_exps` (vectorised)."""
    k = exps.shape[0]
    rank = np.zeros(k, dtype=np.int64)
    if m == 1 or k == 0:
        return rank
    table = _binom_table(s + m + 1, m)
    R = np.full(k, s, dtype=np.int64)
    for i in range(m - 1):
        r = m - 1 - i
        ni = exps[:, i]
        rank += table[R - ni + r - 1, r].astype(np.int64)
        R = R - ni
    return rank


def single_rank(n: Sequence[int]) -> int:
    n = np.asarray([n], dtype=np.int64)
    return int(shell_rank(n, int(n.sum()), n.shape[1])[0])


# ---------------------------------------------------------------------------
# exact integer array helpers


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


def _as_object(a: np.ndarray) -> np.ndarray:
    return a if a.dtype == object else a.astype(object)


def _maybe_int64(a: np.ndarray) -> np.ndarray:
    if a.dtype != object or a.size == 0:
        return a
    if _maxabs(a) < INT_LIMIT:
        return a.astype(np.int64)
    return a


def _colsum_bound(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    return int(max(sum(abs(int(x)) for x in M[:, j]) for j in range(M.shape[1])))


def _matmul(a: np.ndarray, M: np.ndarray, bound_M: Optional[int] = None) -> np.ndarray:
    """Exact ``a @ M`` for integer arrays."""
    if bound_M is None:
        bound_M = _colsum_bound(M)
    if a.dtype != object and _maxabs(a) * max(bound_M, 1) < INT_LIMIT:
        return a @ M.astype(np.int64)
    return _as_object(a) @ _as_object(M)


def _scale(a: np.ndarray, k: int) -> np.ndarray:
    if k == 1:
        return a
    if a.dtype != object and _maxabs(a) * abs(k) < INT_LIMIT:
        return a * k
    return _as_object(a) * k


def _add(a: np.ndarray, b: np.ndarray, sign: int = 1) -> np.ndarray:
    if a.dtype != object and b.dtype != object and _maxabs(a) + _maxabs(b) < INT_LIMIT:
        return a + sign * b
    return _as_object(a) + sign * _as_object(b)


def _content(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        g = 0
        for x in a.ravel().tolist():
            if x:
                g = gcd(g, x)
                if g == 1:
                    break
        return g
    return int(np.gcd.reduce(a.ravel()))


def _row_contents(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return np.array([gcd(*row) if len(row) else 0 for row in a.tolist()], dtype=object)
    return np.gcd.reduce(a, axis=1)


def _divide_exact(a: np.ndarray, g: int) -> np.ndarray:
    if g == 1:
        return a
    return a // g


@lru_cache(maxsize=None)
def _mult_matrix(L: int, vec: tuple) -> np.ndarray:
    """Integer matrix M with row(v) @ M = v * vec in Q(zeta_L) (numerators)."""
    phi = totient(L)
    rows = []
    for j in range(phi):
        e = [0] * phi
        e[j] = 1
        rows.append(_mul_vec(L, tuple(e), vec))
    return np.array(rows, dtype=object).reshape(phi, phi)


@lru_cache(maxsize=None)
def _embed_matrix(n: int, L: int) -> np.ndarray:
    phi_n, phi_L = totient(n), totient(L)
    rows = []
    for j in range(phi_n):
        e = [0] * phi_n
        e[j] = 1
        rows.append(_embed_vec(n, tuple(e), L))
    return np.array(rows, dtype=object).reshape(phi_n, phi_L)


@lru_cache(maxsize=None)
def _conj_matrix(L: int) -> np.ndarray:
    phi = totient(L)
    if L == 1:
        return np.ones((1, 1), dtype=object)
    rows = []
    for j in range(phi):
        e = [0] * phi
        e[j] = 1
        rows.append(_galois_vec(L, tuple(e), L - 1))
    return np.array(rows, dtype=object).reshape(phi, phi)


@lru_cache(maxsize=None)
def _product_tensor(L: int) -> Tuple[np.ndarray, int]:
    """Flattened (phi^2, phi) reduction tensor for power-basis products, plus its column bound."""
    F = _field(L)
    phi = F.phi
    T = np.zeros((phi * phi, phi), dtype=object)
    for j in range(phi):
        for k in range(phi):
            T[j * phi + k] = F.red[j + k]
    return T, _colsum_bound(T)


def hadamard_rows(a: np.ndarray, b: np.ndarray, L: int) -> np.ndarray:
    """Row-wise product of two arrays of Q(zeta_L) numerators."""
    phi = a.shape[1]
    if phi == 1:
        if a.dtype != object and b.dtype != object and _maxabs(a) * _maxabs(b) < INT_LIMIT:
            return a * b
        return _as_object(a) * _as_object(b)
    T, bound = _product_tensor(L)
    ma, mb = _maxabs(a), _maxabs(b)
    if a.dtype != object and b.dtype != object and ma * mb * bound < INT_LIMIT:
        outer = (a[:, :, None] * b[:, None, :]).reshape(a.shape[0], phi * phi)
        return outer @ T.astype(np.int64)
    outer = (_as_object(a)[:, :, None] * _as_object(b)[:, None, :]).reshape(a.shape[0], phi * phi)
    return outer @ T


def sum_rows(a: np.ndarray) -> np.ndarray:
    if a.dtype != object and _maxabs(a) * max(a.shape[0], 1) < INT_LIMIT:
        return a.sum(axis=0)
    return _as_object(a).sum(axis=0) if a.shape[0] else np.zeros(a.shape[1], dtype=object)


# ---------------------------------------------------------------------------
# shells and tables


class Shell:
    """Coefficients of one total degree: ``num / den`` row by row."""

    __slots__ = ("num", "den")

    def __init__(self, num: np.ndarray, den: int = 1):
        self.num = num
        self.den = int(den)

    def reduced(self) -> "Shell":
        if self.den == 1:
            return self
        g = gcd(self.den, _content(self.num))
        if g in (0, 1):
            return self if g == 1 else Shell(self.num, 1)
        return Shell(_maybe_int64(_divide_exact(self.num, g)), self.den // g)

    def embedded(self, n: int, L: int) -> "Shell":
        if n == L:
            return self
        return Shell(_matmul(self.num, _embed_matrix(n, L)), self.den)

    def lcm_den(self) -> int:
        """lcm of the reduced denominators of the entries in this shell."""
        if self.den == 1:
            return 1
        g = gcd(self.den, _content(self.num))
        return self.den // g if g else 1


class CoeffTable:
    """
    Exact coefficients f(n) for every multi-index with ||n|| <= N.

    Indexing with a multi-index returns a :class:`CycloElement`; indices
    that carry no stored value are exact zeros.
    """

    def __init__(self, m: int, N: int, conductor: int, shells: List[Shell]):
        if len(shells) != N + 1:
            raise ValueError("one shell per total degree is required")
        self.m = m
        self.N = N
        self.conductor = conductor
        self.shells = shells

    # -- construction -------------------------------------------------------

    @classmethod
    def zeros(cls, m: int, N: int, conductor: int = 1) -> "CoeffTable":
        phi = totient(conductor)
        return cls(m, N, conductor, [Shell(np.zeros((shell_size(s, m), phi), dtype=np.int64)) for s in range(N + 1)])

    @classmethod
    def from_mapping(cls, m: int, N: int, values: Mapping) -> "CoeffTable":
        vals = {tuple(n): as_cyclo(c) for n, c in values.items() if sum(n) <= N}
        L = lcm(*(c.conductor for c in vals.values())) if vals else 1
        _check_cap(L)
        phi = totient(L)
        per_shell: Dict[int, list] = {}
        for n, c in vals.items():
            if not c.is_zero():
                per_shell.setdefault(sum(n), []).append((n, c))
        shells = []
        for s in range(N + 1):
            size = shell_size(s, m)
            entries = per_shell.get(s, [])
            d = lcm(*(c.den() for _, c in entries)) if entries else 1
            rows = np.zeros((size, phi), dtype=object)
            for n, c in entries:
                vec = c.embed(L)
                scale = d // c.den()
                rows[single_rank(n)] = [v * scale for v in vec]
            shells.append(Shell(_maybe_int64(rows), d))
        return cls(m, N, L, shells)

    @classmethod
    def from_sequence(cls, values: Sequence) -> "CoeffTable":
        return cls.from_mapping(1, len(values) - 1, {(i,): v for i, v in enumerate(values)})

    # -- access -------------------------------------------------------------

    def _element(self, shell: Shell, row: int) -> CycloElement:
        return CycloElement._raw(self.conductor, [int(x) for x in shell.num[row]], shell.den)

    def __getitem__(self, n) -> CycloElement:
        n = tuple(n)
        if len(n) != self.m:
            raise KeyError(n)
        s = sum(n)
        if s > self.N or min(n) < 0:
            raise KeyError(f"{n} lies outside the table (N={self.N})")
        return self._element(self.shells[s], single_rank(n))

    def shell_values(self, s: int) -> List[CycloElement]:
        sh = self.shells[s]
        return [self._element(sh, r) for r in range(sh.num.shape[0])]

    def items(self) -> Iterator[Tuple[MultiIndex, CycloElement]]:
        """All multi-indices with their coefficient, zeros included, in graded order."""
        for s in range(self.N + 1):
            exps = shell_exps(s, self.m)
            sh = self.shells[s]
            for r in range(exps.shape[0]):
                yield tuple(int(e) for e in exps[r]), self._element(sh, r)

    def nonzero_items(self):
        for n, c in self.items():
            if not c.is_zero():
                yield n, c

    def to_dict(self) -> Dict[MultiIndex, CycloElement]:
        return dict(self.nonzero_items())

    def coefficients(self) -> List[CycloElement]:
        if self.m != 1:
            raise ValueError("coefficients() is for univariate tables")
        return [self._element(sh, 0) for sh in self.shells]

    def truncate(self, N: int) -> "CoeffTable":
        if N > self.N:
            raise ValueError("cannot truncate above the stored degree")
        return CoeffTable(self.m, N, self.conductor, self.shells[: N + 1])

    def embedded(self, L: int) -> "CoeffTable":
        if L == self.conductor:
            return self
        _check_cap(L)
        return CoeffTable(self.m, self.N, L, [sh.embedded(self.conductor, L) for sh in self.shells])

    def __len__(self):
        return sum(sh.num.shape[0] for sh in self.shells)

    def __eq__(self, other):
        if not isinstance(other, CoeffTable):
            return NotImplemented
        if self.m != other.m or self.N != other.N:
            return False
        L = lcm(self.conductor, other.conductor)
        for s in range(self.N + 1):
            a = self.shells[s].embedded(self.conductor, L)
            b = other.shells[s].embedded(other.conductor, L)
            if not np.array_equal(_as_object(a.num) * b.den, _as_object(b.num) * a.den):
                return False
        return True

    def __repr__(self):
        return f"CoeffTable(m={self.m}, N={self.N}, conductor={self.conductor})"

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": "pc-table/1",
            "m": self.m,
            "N": self.N,
            "entries": [{"n": list(n), "c": render(c)} for n, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CoeffTable":
        return cls.from_mapping(
            int(data["m"]), int(data["N"]), {tuple(e["n"]): as_cyclo(e["c"]) for e in data["entries"]}
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"n{i + 1}" for i in range(self.m)] + ["c"])
        for n, c in self.items():
            w.writerow(list(n) + [render(c)])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# table-level combinators


def hadamard_tables(a: CoeffTable, b: CoeffTable) -> CoeffTable:
    N = min(a.N, b.N)
    L = lcm(a.conductor, b.conductor)
    _check_cap(L)
    shells = []
    for s in range(N + 1):
        x = a.shells[s].embedded(a.conductor, L)
        y = b.shells[s].embedded(b.conductor, L)
        shells.append(Shell(_maybe_int64(hadamard_rows(x.num, y.num, L)), x.den * y.den).reduced())
    return CoeffTable(a.m, N, L, shells)


def conjugate_table(a: CoeffTable) -> CoeffTable:
    if a.conductor == 1:
        return a
    M = _conj_matrix(a.conductor)
    return CoeffTable(a.m, a.N, a.conductor, [Shell(_matmul(sh.num, M), sh.den) for sh in a.shells])


def scale_rows(num: np.ndarray, c: CycloElement, L: int) -> np.ndarray:
    """Numerators of each row times the numerator vector of c (c already in Q(zeta_L))."""
    return _matmul(num, _mult_matrix(L, tuple(c.embed(L))))
