"""Hankel determinants and the windowed Kronecker rationality test."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from ..cyclotomic import CycloElement
from ..errors import InsufficientDataError
from ..linalg import det_bareiss
from .guess import Recurrence, as_terms, guess_constant_recurrence

RATIONAL = "rational"
NOT_RATIONAL = "not_rational_in_window"
INCONCLUSIVE = "inconclusive"


def hankel_matrix(c, n: int):
    return [[c[i + j] for j in range(n + 1)] for i in range(n + 1)]


def hankel_determinant(c, n: int) -> CycloElement:
    """det [c_{i+j}] for 0 <= i, j <= n."""
    c = as_terms(c, 2 * n + 1)
    if len(c) < 2 * n + 1:
        raise InsufficientDataError(f"Hankel determinant of size {n + 1} needs {2 * n + 1} terms, got {len(c)}")
    return det_bareiss(hankel_matrix(c, n))


@dataclass
class KroneckerVerdict:
    kind: str
    recurrence: Optional[Recurrence] = None
    window: tuple = ()
    deltas: List[CycloElement] = field(default_factory=list)

    @property
    def is_rational(self) -> bool:
        return self.kind == RATIONAL

    def to_json(self) -> dict:
        out = {"verdict": self.kind, "window": list(self.window), "nonzero": [not d.is_zero() for d in self.deltas]}
        if self.recurrence is not None:
            out["recurrence"] = str(self.recurrence)
        return out


def kronecker_test(F_uni, window_start: int, window_len: int, n_terms: Optional[int] = None) -> KroneckerVerdict:
    """
    Decide rationality evidence from Hankel determinants on a finite window.

    Vanishing on the whole window triggers a recurrence search that must hold
    on every available term; a nonzero determinant at the end of the window
    means no rational function of that size fits the data.
    """
    need = 2 * (window_start + window_len)
    n_terms = max(need, n_terms or 0)
    c = as_terms(F_uni, n_terms)
    if len(c) < need:
        raise InsufficientDataError(f"window needs {need} terms, got {len(c)}")
    window = tuple(range(window_start, window_start + window_len))
    deltas = [det_bareiss(hankel_matrix(c, n)) for n in window]
    if all(d.is_zero() for d in deltas):
        max_order = max(1, min(window_start + 1, (len(c) - 4) // 2))
        rec = guess_constant_recurrence(c, max_order)
        if rec is not None and rec.holds_on(c):
            return KroneckerVerdict(RATIONAL, rec, window, deltas)
        return KroneckerVerdict(INCONCLUSIVE, None, window, deltas)
    if not deltas[-1].is_zero():
        return KroneckerVerdict(NOT_RATIONAL, None, window, deltas)
    return KroneckerVerdict(INCONCLUSIVE, None, window, deltas)


def kronecker_scan(F_uni, window_start: int, window_len: int, n_terms: int) -> KroneckerVerdict:
    """
    :func:`kronecker_test` applied to every window of ``window_len`` that
    starts at or after ``window_start`` and fits in ``n_terms`` terms.

    Each determinant is computed once.  The first window ending at a nonzero
    determinant refutes rationality with these bounds; if every determinant
    vanishes the recurrence search decides between rational and inconclusive.
    """
    c = as_terms(F_uni, n_terms)
    last = len(c) // 2 - 1
    if last < window_start + window_len - 1:
        raise InsufficientDataError(f"window needs {2 * (window_start + window_len)} terms, got {len(c)}")
    deltas = []
    for n in range(window_start, last + 1):
        d = det_bareiss(hankel_matrix(c, n))
        deltas.append(d)
        pos = len(deltas)
        if pos >= window_len and not d.is_zero():
            window = tuple(range(n - window_len + 1, n + 1))
            return KroneckerVerdict(NOT_RATIONAL, None, window, deltas[pos - window_len :])
    window = tuple(range(window_start, last + 1))
    if all(d.is_zero() for d in deltas):
        max_order = max(1, min(window_start + 1, (len(c) - 4) // 2))
        rec = guess_constant_recurrence(c, max_order)
        if rec is not None and rec.holds_on(c):
            return KroneckerVerdict(RATIONAL, rec, window, deltas)
    return KroneckerVerdict(INCONCLUSIVE, None, window, deltas)
