"""Multivariate power series: sparse polynomials, expression nodes and exact expansion."""

from .nodes import (
    ORACLES,
    AbsSquare,
    AffineSub,
    Conjugate,
    Hadamard,
    LineSpec,
    Oracle,
    Rational,
    SeriesExpr,
    abs_square,
    affine_substitute,
    clear_cache,
    conjugate_series,
    expand,
    expand_rational,
    hadamard,
    line_specialize,
    oracle,
    rational,
    register_oracle,
)
from .poly import MultiIndex, MultiPoly, binomial, compositions, glex_key, simplex
from .table import CoeffTable, Shell, shell_exps, shell_size

__all__ = [
    "ORACLES", "AbsSquare", "AffineSub", "CoeffTable", "Conjugate", "Hadamard", "LineSpec",
    "MultiIndex", "MultiPoly", "Oracle", "Rational", "SeriesExpr", "Shell", "abs_square",
    "affine_substitute", "binomial", "clear_cache", "compositions", "conjugate_series", "expand",
    "expand_rational", "glex_key", "hadamard", "line_specialize", "oracle", "rational",
    "register_oracle", "shell_exps", "shell_size", "simplex",
]
