"""Rationality tests, recurrence guessing and rational reconstruction."""

from .guess import PRecurrence, Recurrence, as_terms, guess_constant_recurrence, guess_p_recurrence
from .hankel import (
    INCONCLUSIVE,
    NOT_RATIONAL,
    RATIONAL,
    KroneckerVerdict,
    hankel_determinant,
    kronecker_scan,
    kronecker_test,
)
from .reconstruct import (
    BinomialFactor,
    PoleCertificate,
    RationalForm,
    binomial_factorization,
    default_torsion_bound,
    poles_are_roots_of_unity,
    reconstruct_multivariate,
    reconstruct_univariate,
)

__all__ = [
    "INCONCLUSIVE", "NOT_RATIONAL", "RATIONAL", "BinomialFactor", "KroneckerVerdict", "PRecurrence",
    "PoleCertificate", "RationalForm", "Recurrence", "as_terms", "binomial_factorization",
    "default_torsion_bound", "guess_constant_recurrence", "guess_p_recurrence", "hankel_determinant",
    "kronecker_scan", "kronecker_test", "poles_are_roots_of_unity", "reconstruct_multivariate", "reconstruct_univariate",
]
