"""Exact linear algebra over cyclotomic fields (no floating-point fallback)."""

from __future__ import annotations

from typing import List, Optional, Sequence

from .cyclotomic import ONE, ZERO, CycloElement, as_cyclo


def _pivot_rank(x: CycloElement):
    # rational pivots first, then smaller conductors; keeps intermediate fields small
    return (0 if x.is_rational() else 1, x.conductor)


def det_bareiss(matrix: Sequence[Sequence]) -> CycloElement:
    """Determinant by Bareiss fraction-free elimination with row pivoting."""
    M = [[as_cyclo(x) for x in row] for row in matrix]
    n = len(M)
    if n == 0:
        return ONE
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = ONE
    for k in range(n - 1):
        candidates = [i for i in range(k, n) if not M[i][k].is_zero()]
        if not candidates:
            return ZERO
        p = min(candidates, key=lambda i: _pivot_rank(M[i][k]))
        if p != k:
            M[k], M[p] = M[p], M[k]
            sign = -sign
        piv = M[k][k]
        inv_prev = prev.inverse()
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            lead = rowi[k]
            for j in range(k + 1, n):
                val = rowi[j] * piv
                if not lead.is_zero() and not rowk[j].is_zero():
                    val = val - lead * rowk[j]
                rowi[j] = val * inv_prev if prev is not ONE else val
            rowi[k] = ZERO
        prev = piv
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def det_cofactor(matrix: Sequence[Sequence]) -> CycloElement:
    """Laplace expansion along the first row; exponential, for cross-checks only."""
    M = [[as_cyclo(x) for x in row] for row in matrix]
    n = len(M)
    if n == 0:
        return ONE
    if n == 1:
        return M[0][0]
    total = ZERO
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


class Echelon:
    """
    Incrementally maintained reduced row-echelon form.

    Rows are added one at a time; :meth:`nullity` and :meth:`kernel` can be
    queried at any moment, which lets callers stop feeding equations as soon
    as the kernel is pinned down.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: List[List[CycloElement]] = []
        self.pivots: List[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def nullity(self) -> int:
        return self.ncols - self.rank

    def add(self, row: Sequence) -> bool:
        """Insert a row; returns True when it increased the rank."""
        r = [as_cyclo(x) for x in row]
        for prow, pc in zip(self.rows, self.pivots):
            c = r[pc]
            if not c.is_zero():
                for j in range(self.ncols):
                    if not prow[j].is_zero():
                        r[j] = r[j] - c * prow[j]
        lead = next((j for j in range(self.ncols) if not r[j].is_zero()), None)
        if lead is None:
            return False
        inv = r[lead].inverse()
        r = [x * inv if not x.is_zero() else x for x in r]
        for prow in self.rows:
            c = prow[lead]
            if not c.is_zero():
                for j in range(self.ncols):
                    if not r[j].is_zero():
                        prow[j] = prow[j] - c * r[j]
        # keep rows ordered by pivot column
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < lead:
            pos += 1
        self.rows.insert(pos, r)
        self.pivots.insert(pos, lead)
        return True

    def kernel(self) -> List[List[CycloElement]]:
        """Basis of the right kernel, one vector per free column (ascending)."""
        free = [j for j in range(self.ncols) if j not in set(self.pivots)]
        basis = []
        for f in free:
            vec = [ZERO] * self.ncols
            vec[f] = ONE
            for prow, pc in zip(self.rows, self.pivots):
                if not prow[f].is_zero():
                    vec[pc] = -prow[f]
            basis.append(vec)
        return basis


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[CycloElement]]:
    ech = Echelon(ncols)
    for row in rows:
        ech.add(row)
        if ech.nullity() == 0:
            break
    return ech.kernel()


def solve_affine(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> Optional[List[CycloElement]]:
    """Some solution of ``rows * x = rhs``, or None if inconsistent."""
    aug = Echelon(ncols + 1)
    for row, b in zip(rows, rhs):
        aug.add(list(row) + [-as_cyclo(b)])
    if ncols in aug.pivots:
        return None
    x = [ZERO] * ncols
    for prow, pc in zip(aug.rows, aug.pivots):
        x[pc] = -prow[ncols]
    return x
