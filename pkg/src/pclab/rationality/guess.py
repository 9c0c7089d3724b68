"""Constant- and polynomial-coefficient recurrence guessing with held-out validation."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Sequence

from ..cyclotomic import ONE, ZERO, CycloElement, as_cyclo, render
from ..errors import InsufficientDataError
from ..linalg import Echelon, solve_affine
from ..arith import lcm


def as_terms(data, n_terms: Optional[int] = None) -> List[CycloElement]:
    """Coefficient list from a univariate expression, table or plain sequence."""
    from ..series import CoeffTable, SeriesExpr, expand

    if isinstance(data, SeriesExpr):
        if data.m != 1:
            raise ValueError("expected a univariate series")
        if n_terms is None:
            raise ValueError("number of terms required for a series expression")
        return expand(data, n_terms - 1).coefficients()
    if isinstance(data, CoeffTable):
        vals = data.coefficients()
    else:
        vals = [as_cyclo(c) for c in data]
    return vals if n_terms is None else vals[:n_terms]


@dataclass(frozen=True)
class Recurrence:
    """sum_i coeffs[i] * g[n + i] = 0 for every n >= offset."""

    order: int
    coeffs: tuple
    offset: int = 0

    def residual(self, g: Sequence, n: int) -> CycloElement:
        acc = ZERO
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                acc = acc + c * g[n + i]
        return acc

    def holds_on(self, g: Sequence) -> bool:
        return all(self.residual(g, n).is_zero() for n in range(self.offset, len(g) - self.order))

    def characteristic(self) -> List[CycloElement]:
        """Reversed characteristic polynomial, i.e. the denominator 1 + ... in t (constant first)."""
        return list(reversed(self.coeffs))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            idx = "g[n]" if i == 0 else f"g[n+{i}]"
            parts.append(idx if c == ONE else f"({render(c)})*{idx}")
        return " + ".join(parts) + " = 0"


def _check_recurrence_rows(g, coeffs, R) -> bool:
    for n in range(len(g) - R):
        acc = ZERO
        for i in range(R + 1):
            if not coeffs[i].is_zero() and not g[n + i].is_zero():
                acc = acc + coeffs[i] * g[n + i]
        if not acc.is_zero():
            return False
    return True


def guess_constant_recurrence(c, max_order: int) -> Optional[Recurrence]:
    """Smallest-order constant-coefficient recurrence valid on every supplied term."""
    g = as_terms(c)
    if len(g) < 2 * max_order + 4:
        raise InsufficientDataError(f"need {2 * max_order + 4} terms, got {len(g)}")
    for R in range(1, max_order + 1):
        rows_all = [[g[n + i] for i in range(R)] for n in range(len(g) - R)]
        rhs_all = [-g[n + R] for n in range(len(g) - R)]
        fit = min(len(rows_all), 2 * R + 2)
        sol = solve_affine(rows_all[:fit], rhs_all[:fit], R)
        coeffs = None
        if sol is not None and _check_recurrence_rows(g, sol + [ONE], R):
            coeffs = sol + [ONE]
        elif sol is not None or fit < len(rows_all):
            full = solve_affine(rows_all, rhs_all, R)
            if full is not None:
                coeffs = full + [ONE]
        if coeffs is None:
            continue
        return Recurrence(R, tuple(coeffs), 0)
    return None


@dataclass(frozen=True)
class PRecurrence:
    """
    sum_i P_i(n) * g[n + i] = 0 for every n >= offset, P_i given low degree first.

    The leading polynomial P_R never vanishes at a supplied index, so the
    relation determines each term from its predecessors.
    """

    order: int
    degree: int
    polys: tuple
    offset: int = 0

    def poly_at(self, i: int, n: int) -> CycloElement:
        acc = ZERO
        for c in reversed(self.polys[i]):
            acc = acc * n + c
        return acc

    def residual(self, g: Sequence, n: int) -> CycloElement:
        """Residual at index n, where g[0] is the term of index ``offset``."""
        acc = ZERO
        idx = n + self.offset
        for i in range(self.order + 1):
            acc = acc + self.poly_at(i, idx) * g[n + i]
        return acc

    def holds_on(self, g: Sequence) -> bool:
        return all(self.residual(g, n).is_zero() for n in range(len(g) - self.order))

    def __str__(self):
        def poly_str(p):
            terms = []
            for j, c in enumerate(p):
                if c.is_zero():
                    continue
                cs = render(c)
                if not c.is_rational():
                    cs = f"({cs})"
                mono = "" if j == 0 else ("n" if j == 1 else f"n^{j}")
                if not mono:
                    terms.append(cs)
                elif c == ONE:
                    terms.append(mono)
                else:
                    terms.append(f"{cs}*{mono}")
            return " + ".join(terms) or "0"

        parts = []
        for i, p in enumerate(self.polys):
            s = poly_str(p)
            if s == "0":
                continue
            idx = "g[n]" if i == 0 else f"g[n+{i}]"
            parts.append(f"({s})*{idx}")
        return " + ".join(parts) + " = 0"


def _normalize_prec(polys):
    lead_poly = polys[-1]
    lead = next(c for c in reversed(lead_poly) if not c.is_zero())
    inv = lead.inverse()
    polys = [[c * inv for c in p] for p in polys]
    flat = [c for p in polys for c in p]
    if all(c.is_rational() for c in flat):
        d = lcm(*(c.den() for c in flat))
        polys = [[c * d for c in p] for p in polys]
    return polys


def guess_p_recurrence(c, max_order: int, max_degree: int, start: int = 0) -> Optional[PRecurrence]:
    """
    Smallest (order, then degree) recurrence with polynomial coefficients in n.

    ``start`` is the index of the first supplied term, so data for n >= 1
    gives recurrences written in the true index n.
    """
    g = as_terms(c)
    need = (max_order + 1) * (max_degree + 1) + max_order + 8
    if len(g) < need:
        raise InsufficientDataError(f"need {need} terms, got {len(g)}")
    for R in range(1, max_order + 1):
        for D in range(0, max_degree + 1):
            ncols = (R + 1) * (D + 1)
            nrows = len(g) - R
            if nrows < ncols + 4:
                continue

            def row(n):
                idx = n + start
                out = []
                for i in range(R + 1):
                    gi = g[n + i]
                    p = 1
                    for _ in range(D + 1):
                        out.append(gi * p if p != 1 else gi)
                        p *= idx
                return out

            ech = Echelon(ncols)
            used = 0
            for n in range(nrows):
                ech.add(row(n))
                used = n + 1
                if ech.nullity() == 0:
                    break
                if used >= ncols + 4 and ech.nullity() == 1:
                    break
            if ech.nullity() == 0:
                continue
            basis = ech.kernel()
            candidates = list(basis)
            if len(basis) > 1:
                rng = random.Random(R * 1000 + D)
                for _ in range(3):
                    lam = [rng.randint(1, 97) for _ in basis]
                    candidates.append([sum((l * v[j] for l, v in zip(lam, basis)), ZERO) for j in range(ncols)])
            for vec in candidates:
                polys = [vec[i * (D + 1) : (i + 1) * (D + 1)] for i in range(R + 1)]
                if all(x.is_zero() for x in polys[-1]):
                    continue
                rec = PRecurrence(R, D, tuple(tuple(p) for p in _normalize_prec(polys)), start)
                # a relation whose leading polynomial vanishes on the data cannot generate it
                if any(rec.poly_at(R, n + start).is_zero() for n in range(nrows)):
                    continue
                if rec.holds_on(g):
                    return rec
    return None
