"""
Rational reconstruction from truncated expansions and torsion-binomial
certification of denominators.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from ..arith import divisors, lcm, totient
from ..cyclotomic import (
    DEFAULT_PHI_CAP,
    ONE,
    ZERO,
    CycloElement,
    as_cyclo,
    cyclotomic_polynomial,
    render,
    root_of_unity_order,
    zeta,
)
from ..errors import InsufficientDataError, VerificationError
from ..linalg import Echelon
from .. import upoly
from ..series import CoeffTable, MultiPoly, SeriesExpr, expand
from ..series.nodes import expand_rational
from ..series.poly import compositions

TRIVIAL = "trivial"
EXHAUSTED = "exhausted"
UNDETERMINED = "undetermined beyond bound"


@dataclass(frozen=True)
class BinomialFactor:
    """The factor (1 - zeta * x^q) ** mult."""

    zeta: CycloElement
    q: Tuple[int, ...]
    mult: int = 1

    def poly(self, m: int) -> MultiPoly:
        return MultiPoly(m, {(0,) * m: ONE, self.q: -self.zeta}) ** self.mult

    def to_json(self) -> dict:
        return {"zeta": render(self.zeta), "q": list(self.q), "mult": self.mult}


@dataclass
class RationalForm:
    num: MultiPoly
    den: MultiPoly
    factors: List[BinomialFactor] = field(default_factory=list)
    cofactor: Optional[MultiPoly] = None
    torsion_form: bool = False
    cofactor_status: str = TRIVIAL

    @property
    def m(self) -> int:
        return self.num.m

    def series(self):
        from ..series import Rational

        return Rational(self.num, self.den)

    def factored_product(self) -> MultiPoly:
        out = self.cofactor if self.cofactor is not None else MultiPoly.constant(self.m, 1)
        for f in self.factors:
            out = out * f.poly(self.m)
        return out

    def to_json(self) -> dict:
        return {
            "num": self.num.to_json(),
            "den": self.den.to_json(),
            "factors": [f.to_json() for f in self.factors],
            "cofactor": (self.cofactor or MultiPoly.constant(self.m, 1)).to_json(),
            "torsion_form": self.torsion_form,
            "cofactor_status": self.cofactor_status,
        }

    @classmethod
    def from_json(cls, data) -> "RationalForm":
        return cls(
            num=MultiPoly.from_json(data["num"]),
            den=MultiPoly.from_json(data["den"]),
            factors=[BinomialFactor(as_cyclo(f["zeta"]), tuple(f["q"]), int(f["mult"])) for f in data["factors"]],
            cofactor=MultiPoly.from_json(data["cofactor"]),
            torsion_form=bool(data["torsion_form"]),
            cofactor_status=data.get("cofactor_status", TRIVIAL),
        )

    def __str__(self):
        return f"({self.num}) / ({self.den})"


# ---------------------------------------------------------------------------
# univariate pole certificates


@dataclass
class PoleCertificate:
    ok: bool
    factors: List[Tuple[int, int]]
    residual: list

    def __bool__(self):
        return self.ok


def _as_upoly(b) -> list:
    if isinstance(b, MultiPoly):
        if b.m != 1:
            raise ValueError("expected a univariate polynomial")
        deg = max(b.total_degree, 0)
        return upoly.trim([b[(i,)] for i in range(deg + 1)])
    return upoly.trim(b)


def _may_vanish_at_order(approx, k: int) -> bool:
    """False only when p is clearly nonzero at every primitive k-th root of unity."""
    tol = 1e-7 * (1.0 + sum(abs(c) for c in approx))
    for j in range(k):
        if math.gcd(j, k) != 1 and k > 1:
            continue
        w = cmath.exp(2j * math.pi * j / k)
        acc = 0j
        for c in reversed(approx):
            acc = acc * w + c
        if abs(acc) <= tol:
            return True
    return False


def poles_are_roots_of_unity(b, k_bound: Optional[int] = None) -> PoleCertificate:
    """
    Peel gcd(b, Phi_k) over the coefficient field for every admissible k,
    with multiplicity.

    True when nothing but a constant is left; the certificate lists the
    orders k and how many gcd peels each one took.
    """
    p = _as_upoly(b)
    if p[0].is_zero():
        raise ValueError("b(0) must be nonzero")
    deg = upoly.degree(p)
    cert: List[Tuple[int, int]] = []
    if deg <= 0:
        return PoleCertificate(True, cert, p)
    # over Q(zeta_L) a factor of Phi_k has degree phi(lcm(k, L)) / phi(L)
    L = 1
    for c in p:
        L = lcm(L, c.conductor)
    phiL = totient(L)
    top = 2 * (deg * phiL) ** 2 + 2
    if k_bound is not None:
        top = min(top, k_bound)
    approx = [complex(c) for c in p]
    for k in range(1, top + 1):
        if totient(lcm(k, L)) > upoly.degree(p) * phiL:
            continue
        if not _may_vanish_at_order(approx, k):
            continue
        phi_k = [as_cyclo(c) for c in cyclotomic_polynomial(k).coeffs]
        mult = 0
        while upoly.degree(p) >= 1:
            g = upoly.gcd(p, phi_k)
            if upoly.degree(g) < 1:
                break
            p, r = upoly.divmod_poly(p, g)
            if upoly.degree(r) >= 0:  # pragma: no cover - g divides p by construction
                raise ArithmeticError("inexact gcd division")
            mult += 1
        if mult:
            cert.append((k, mult))
            approx = [complex(c) for c in p]
        if upoly.degree(p) < 1:
            break
    return PoleCertificate(upoly.degree(p) < 1, cert, p)


# ---------------------------------------------------------------------------
# binomial factorisation


def _primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v), g


def _candidate_exponents(B: MultiPoly) -> List[Tuple[int, ...]]:
    supp = list(B.terms)
    zero = (0,) * B.m
    if zero not in supp:
        supp.append(zero)
    cands = set()
    for u in supp:
        for v in supp:
            d = tuple(a - b for a, b in zip(v, u))
            if any(d) and min(d) >= 0:
                p, g = _primitive(d)
                for j in divisors(g):
                    cands.add(tuple(j * x for x in p))
    return sorted(cands, key=lambda q: (sum(q), tuple(-x for x in q)))


def _torus_point(q, zeta_c: complex, rng: random.Random):
    """A random point x on the unit torus with zeta * x^q = 1."""
    m = len(q)
    j = max(range(m), key=lambda i: q[i])
    x = [cmath.exp(2j * math.pi * rng.random()) for _ in range(m)]
    rest = 1
    for i in range(m):
        if i != j:
            rest *= x[i] ** q[i]
    target = 1 / (zeta_c * rest)
    x[j] = cmath.exp(1j * cmath.phase(target) / q[j])
    return x


def _field_degree(n: int, k: int) -> int:
    return totient(lcm(n, k)) // totient(n)


def default_torsion_bound(B: MultiPoly) -> int:
    return lcm(2, B.conductor()) * 12


def binomial_factorization(B: MultiPoly, torsion_bound: Optional[int] = None, phi_cap: int = DEFAULT_PHI_CAP, seed: int = 0):
    """
    Split B into binomials 1 - zeta*x^q and a cofactor by exact trial division.

    Returns ``(factors, cofactor, torsion_form, status)``.  Candidate pairs
    (zeta, q) are screened numerically at random points where the binomial
    vanishes; only exact division counts.
    """
    m = B.m
    b0 = B.constant_term()
    if b0.is_zero():
        raise ValueError("B(0) must be nonzero")
    if b0 != ONE:
        B = B * b0.inverse()
    if torsion_bound is None:
        torsion_bound = default_torsion_bound(B)
    rng = random.Random(seed)
    n0 = B.conductor()
    factors: Dict[Tuple[int, Tuple[int, ...], tuple], list] = {}
    rest = B
    for q in _candidate_exponents(B):
        if sum(q) > rest.total_degree:
            continue
        for k in range(1, torsion_bound + 1):
            nk = lcm(n0, k)
            if totient(nk) > phi_cap:
                continue
            if _field_degree(n0, k) * sum(q) > B.total_degree:
                continue
            for e in range(k):
                if gcd(e, k) != 1 and k > 1:
                    continue
                if sum(q) > rest.total_degree:
                    break
                z = zeta(k, e) if k > 1 else ONE
                zc = complex(z)
                scale = sum(abs(complex(c)) for c in rest.terms.values())
                while rest.total_degree >= sum(q):
                    pts = [_torus_point(q, zc, rng) for _ in range(2)]
                    if any(abs(rest.evaluate_complex(p)) > 1e-8 * scale for p in pts):
                        break
                    binom = MultiPoly(m, {(0,) * m: ONE, q: -z})
                    quot = rest.exact_divide(binom)
                    if quot is None:
                        break
                    rest = quot
                    key = (k, q, e)
                    if key in factors:
                        factors[key][2] += 1
                    else:
                        factors[key] = [z, q, 1]
    out = [BinomialFactor(z, q, mult) for z, q, mult in factors.values()]
    torsion = rest.is_constant()
    if torsion:
        status = TRIVIAL
    else:
        status = EXHAUSTED if _search_exhaustive(n0, rest.total_degree, torsion_bound, phi_cap) else UNDETERMINED
    return out, rest, torsion, status


def _search_exhaustive(n0: int, deg: int, torsion_bound: int, phi_cap: int) -> bool:
    """Whether every root-of-unity order that could divide a degree-deg cofactor was tried."""
    limit = 6 * deg * totient(n0) + 30
    for k in range(1, limit + 1):
        if _field_degree(n0, k) <= deg and (k > torsion_bound or totient(lcm(n0, k)) > phi_cap):
            return False
    return True


def _finish_form(A: MultiPoly, B: MultiPoly, torsion_bound, seed=0) -> RationalForm:
    factors, cof, torsion, status = binomial_factorization(B, torsion_bound, seed=seed)
    return RationalForm(A, B, factors, cof, torsion, status)


# ---------------------------------------------------------------------------
# reconstruction


def _table_values(T: CoeffTable) -> Dict[Tuple[int, ...], CycloElement]:
    return T.to_dict()


def _solve_denominator(values, m: int, dnum: int, d: int, N: int):
    """B with B(0)=1 and total degree <= d such that B*F has no terms of degree in (dnum, N]."""
    unknowns = [k for s in range(1, d + 1) for k in compositions(s, m)]
    ncols = len(unknowns)
    if ncols == 0:
        # B = 1 works iff F has no terms beyond dnum
        ok = all(sum(n) <= dnum for n in values)
        return {} if ok else None
    ech = Echelon(ncols + 1)

    def row(n):
        out = []
        for k in unknowns:
            src = tuple(a - b for a, b in zip(n, k))
            out.append(values.get(src, ZERO) if min(src) >= 0 else ZERO)
        out.append(values.get(n, ZERO))
        return out

    consistent = True
    for s in range(dnum + 1, N + 1):
        for n in compositions(s, m):
            if ech.add(row(n)) and ncols in ech.pivots:
                consistent = False
                break
        if not consistent or ech.rank == ncols:
            break
    if not consistent:
        return None
    sol = {}
    for prow, pc in zip(ech.rows, ech.pivots):
        if pc < ncols:
            # the augmented column holds +f(n), so b_k = -prow[aug]
            sol[unknowns[pc]] = -prow[ncols]
    return sol


def reconstruct_multivariate(F, max_deg_num: int, max_deg_den: int, N: int, torsion_bound: Optional[int] = None, seed: int = 0) -> Optional[RationalForm]:
    """Recover A/B from the truncation of F to total degree N, smallest denominator degree first."""
    if N < max_deg_num + max_deg_den + 2:
        raise InsufficientDataError(f"N must be at least {max_deg_num + max_deg_den + 2}")
    T = F if isinstance(F, CoeffTable) else expand(F, N)
    if T.N < N:
        raise InsufficientDataError("table is shorter than the requested truncation")
    if T.N > N:
        T = T.truncate(N)
    m = T.m
    values = _table_values(T)
    for d in range(0, max_deg_den + 1):
        sol = _solve_denominator(values, m, max_deg_num, d, N)
        if sol is None:
            continue
        terms = {(0,) * m: ONE}
        terms.update(sol)
        B = MultiPoly(m, terms)
        A = _numerator(values, B, m, max_deg_num)
        if expand_rational(A, B, N) != T:
            continue
        return _finish_form(A, B, torsion_bound, seed)
    return None


def _numerator(values, B: MultiPoly, m: int, dnum: int) -> MultiPoly:
    out: Dict[Tuple[int, ...], CycloElement] = {}
    for s in range(dnum + 1):
        for n in compositions(s, m):
            acc = ZERO
            for k, b in B.terms.items():
                src = tuple(x - y for x, y in zip(n, k))
                if min(src) >= 0:
                    v = values.get(src)
                    if v is not None:
                        acc = acc + b * v
            if not acc.is_zero():
                out[n] = acc
    return MultiPoly(m, out)


def reconstruct_univariate(F_uni, max_deg_num: int, max_deg_den: int, N_terms: int, torsion_bound: Optional[int] = None) -> Optional[RationalForm]:
    """
    Pade-style reconstruction b*f = a mod t^N_terms with b(0)=1.

    When F_uni is an expression the candidate is also checked against an
    expansion to 2*N_terms terms; a mismatch there raises VerificationError.
    """
    if N_terms < max_deg_num + max_deg_den + 2:
        raise InsufficientDataError(f"need at least {max_deg_num + max_deg_den + 2} terms")
    if isinstance(F_uni, SeriesExpr):
        if F_uni.m != 1:
            raise ValueError("expected a univariate series")
        T = expand(F_uni, N_terms - 1)
    elif isinstance(F_uni, CoeffTable):
        T = F_uni.truncate(N_terms - 1)
    else:
        T = CoeffTable.from_sequence(list(F_uni)[:N_terms])
    form = reconstruct_multivariate(T, max_deg_num, max_deg_den, N_terms - 1, torsion_bound)
    if form is None:
        return None
    if isinstance(F_uni, SeriesExpr):
        long = expand(F_uni, 2 * N_terms - 1)
        if expand_rational(form.num, form.den, 2 * N_terms - 1) != long:
            raise VerificationError("reconstructed form disagrees with the series beyond the fitted range")
    return form
