"""
Weil heights, S-integrality, and the h_N / d_N growth profiles of a series.

Heights are absolute logarithmic heights in nats, computed from the
embeddings of an element: for a in Q(zeta_n) with primitive minimal
polynomial of leading coefficient c and degree d,

    h(a) = log(c)/d + (1/phi(n)) * sum_k log max(1, |sigma_k(a)|).

Archimedean terms are enclosed with interval arithmetic until the enclosure
is narrower than the requested tolerance.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from mpmath.ctx_iv import MPIntervalContext

from .arith import is_prime, lcm, totient
from .cyclotomic import CycloElement, _field, as_cyclo, minimal_polynomial, root_of_unity_order
from .errors import GrowthLengthError, UnsupportedFieldError

DEFAULT_TOL = 1e-9
DN_EXACT_BITS = 64_000
GROWTH_CLASSES = ("constant", "logarithmic", "linear", "superlinear", "inconclusive")


# ---------------------------------------------------------------------------
# scalar heights


def _archimedean_enclosure(a: CycloElement, prec: int):
    """Interval enclosure of (1/phi) * sum_k log max(1, |sigma_k a|)."""
    iv = MPIntervalContext()
    iv.prec = prec
    n = a.conductor
    units = _field(n).units
    coeffs = [iv.mpf(c) for c in a.numerators]
    den = iv.mpf(a.common_denominator)
    total = iv.mpf(0)
    two_pi = 2 * iv.pi
    for k in units:
        re = iv.mpf(0)
        im = iv.mpf(0)
        for j, c in enumerate(a.numerators):
            if c:
                ang = two_pi * ((j * k) % n) / n
                re += coeffs[j] * iv.cos(ang)
                im += coeffs[j] * iv.sin(ang)
        mod2 = (re * re + im * im) / (den * den)
        lo, hi = mod2.a, mod2.b
        one = iv.mpf(1)
        lo_c = one if lo < 1 else lo
        hi_c = one if hi < 1 else hi
        total += iv.mpf([iv.log(lo_c).a, iv.log(hi_c).b]) / 2
    return total / len(units)


@lru_cache(maxsize=65536)
def _height_cached(n: int, num: tuple, den: int, tol: float) -> float:
    a = CycloElement._raw(n, list(num), den)
    if a.is_zero():
        return 0.0
    if a.is_rational():
        q = a.to_fraction()
        return math.log(max(abs(q.numerator), q.denominator))
    if den == 1 and root_of_unity_order(a) is not None:
        return 0.0
    finite = 0.0
    if den != 1:
        mp = minimal_polynomial(a)
        finite = math.log(abs(mp.leading)) / mp.degree
    prec = 64
    while True:
        enc = _archimedean_enclosure(a, prec)
        lo, hi = float(enc.a), float(enc.b)
        if hi - lo < tol or prec > 4096:
            return max(0.0, finite + (lo + hi) / 2)
        prec *= 2


def height(a, tol: float = DEFAULT_TOL) -> float:
    """Absolute logarithmic Weil height of ``a`` to within ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_cyclo(a)
    return _height_cached(a.conductor, a.numerators, a.common_denominator, float(tol))


def height_tuple_rational(v: Sequence) -> float:
    """Height of the projective point [v_1 : ... : v_m : 1] for rational coordinates."""
    coords = []
    for x in v:
        if isinstance(x, CycloElement):
            if not x.is_rational():
                raise UnsupportedFieldError("tuple heights are only available for rational coordinates")
            x = x.to_fraction()
        elif not isinstance(x, (int, Fraction)):
            raise UnsupportedFieldError(f"cannot treat {x!r} as a rational coordinate")
        coords.append(Fraction(x))
    D = lcm(*(c.denominator for c in coords)) if coords else 1
    ints = [int(c * D) for c in coords] + [D]
    g = 0
    for u in ints:
        g = gcd(g, u)
    return math.log(max(abs(u) // g for u in ints))


@dataclass(frozen=True)
class PrimeSet:
    primes: frozenset

    def __init__(self, primes: Iterable[int] = ()):
        ps = list(primes)
        if len(set(ps)) != len(ps):
            raise ValueError("duplicate primes in S")
        for p in ps:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "primes", frozenset(ps))

    def __contains__(self, p):
        return p in self.primes

    def __iter__(self):
        return iter(sorted(self.primes))


def is_s_integer(a, S) -> bool:
    """True when every prime dividing den(a) lies in S."""
    if not isinstance(S, PrimeSet):
        S = PrimeSet(S)
    d = as_cyclo(a).den()
    for p in S:
        while d % p == 0:
            d //= p
    return d == 1


# ---------------------------------------------------------------------------
# growth classification


def classify_growth(seq: Sequence[float], const_threshold: float = 1e-6, tie_margin: float = 0.1) -> Tuple[str, float]:
    """
    Fit the tail half of ``seq`` by c, c*log(N+1) and c*N.

    Returns ``(class, fitted constant)``.  The class is ``inconclusive``
    when the two best normalised residuals are within ``tie_margin`` of
    each other.
    """
    y_all = np.asarray(seq, dtype=float)
    if y_all.size < 16:
        raise GrowthLengthError(f"need at least 16 samples, got {y_all.size}")
    start = y_all.size // 2
    Ns = np.arange(start, y_all.size, dtype=float)
    y = y_all[start:]
    if float(y.max() - y.min()) < const_threshold:
        return "constant", float(y.mean())
    norm = float(np.linalg.norm(y))
    fits = {}
    for name, basis in (("constant", np.ones_like(Ns)), ("logarithmic", np.log(Ns + 1)), ("linear", Ns)):
        c = float(basis @ y / (basis @ basis))
        fits[name] = (float(np.linalg.norm(y - c * basis)) / norm, c)
    ranked = sorted(fits.items(), key=lambda kv: kv[1][0])
    (best, (r1, c1)), (_, (r2, _)) = ranked[0], ranked[1]
    if r2 > 0 and (r2 - r1) / r2 < tie_margin:
        return "inconclusive", c1
    if best == "linear":
        half = len(y) // 2
        if half >= 3:
            s1 = np.polyfit(Ns[:half], y[:half], 1)[0]
            s2 = np.polyfit(Ns[half:], y[half:], 1)[0]
            if s1 > 0 and s2 > 1.04 * s1:
                return "superlinear", c1
    return best, c1


# ---------------------------------------------------------------------------
# profiles


@dataclass
class HeightProfile:
    N_max: int
    hN: List[float]
    dN_log: List[float]
    dN_exact: List[Optional[int]] = field(default_factory=list)
    fitted_class: str = "inconclusive"
    fitted_constant: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "N": list(range(self.N_max + 1)),
            "hN": list(self.hN),
            "log_dN": list(self.dN_log),
            "class": self.fitted_class,
            "constant": self.fitted_constant,
        }

    @classmethod
    def from_json(cls, data) -> "HeightProfile":
        return cls(
            N_max=max(data["N"]),
            hN=[float(x) for x in data["hN"]],
            dN_log=[float(x) for x in data["log_dN"]],
            fitted_class=data["class"],
            fitted_constant=data["constant"],
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "hN", "log_dN"])
        for N in range(self.N_max + 1):
            w.writerow([N, repr(self.hN[N]), repr(self.dN_log[N])])
        return buf.getvalue()


@lru_cache(maxsize=None)
def _embedding_matrix(n: int) -> np.ndarray:
    F = _field(n)
    j = np.arange(F.phi)[:, None]
    k = np.array(F.units)[None, :]
    return np.exp(2j * np.pi * ((j * k) % n) / n)


def _safe_log(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.maximum(x, 1.0))


def _rational_shell_height(num: np.ndarray, den: int) -> float:
    col = num[:, 0]
    if col.dtype != object:
        absn = np.abs(col)
        nz = absn != 0
        if not nz.any():
            return 0.0
        g = np.gcd(absn[nz], den)
        p = absn[nz] // g
        q = den // g
        return float(np.log(np.maximum(p, q).astype(float)).max())
    best = 0.0
    seen = set()
    for x in col.tolist():
        if x and x not in seen:
            seen.add(x)
            g = gcd(x, den)
            best = max(best, math.log(max(abs(x) // g, den // g)))
    return best


def _cyclo_shell_height(num: np.ndarray, den: int, L: int, tol: float) -> float:
    """Max height over the rows of one shell (all rows share den)."""
    phi = num.shape[1]
    if num.dtype == object:
        nz_rows = [i for i, row in enumerate(num.tolist()) if any(row)]
    else:
        nz_rows = np.nonzero(np.any(num != 0, axis=1))[0].tolist()
    if not nz_rows:
        return 0.0
    rows = num[nz_rows]
    maxabs = int(np.abs(rows).max())
    shift = max(0, maxabs.bit_length() - 900)
    if shift:
        fl = np.array([[float(x >> shift) for x in r] for r in rows.tolist()])
    else:
        fl = rows.astype(float)
    Z = _embedding_matrix(L)
    emb = np.abs(fl @ Z)
    # rounding plus truncation radius in scaled units
    rad = phi * ((1.0 if shift else 0.0) + np.abs(fl).max(axis=1, keepdims=True) * 1e-13) + 1e-300
    logscale = shift * math.log(2) - math.log(den)
    with np.errstate(divide="ignore"):
        lo_mod = np.log(np.maximum(emb - rad, 1e-300)) + logscale
        hi_mod = np.log(emb + rad) + logscale
    arch_lo = np.maximum(lo_mod, 0.0).sum(axis=1) / phi
    arch_hi = np.maximum(hi_mod, 0.0).sum(axis=1) / phi
    # a row's own denominator bounds its finite contribution
    if den > 1:
        contents = np.array([gcd(den, *map(int, r)) for r in rows.tolist()], dtype=object)
        extra = np.array([math.log(den // int(c)) for c in contents])
    else:
        extra = np.zeros(len(nz_rows))
    upper = arch_hi + extra
    floor = float(arch_lo.max())
    candidates = np.nonzero(upper >= floor - tol)[0]
    order = candidates[np.argsort(-upper[candidates])]
    best = 0.0
    seen = set()
    for i in order.tolist():
        if upper[i] < best - tol:
            break
        key = tuple(int(x) for x in rows[i])
        if key in seen:
            continue
        seen.add(key)
        best = max(best, height(CycloElement._raw(L, list(key), den), tol))
    return best


def _shell_log_house(num: np.ndarray, den: int, L: int) -> Optional[float]:
    """log of the largest |sigma(c)| over the coefficients c of one shell (float)."""
    if num.dtype == object:
        rows = np.array([r for r in num.tolist() if any(r)], dtype=object)
    else:
        rows = num[np.any(num != 0, axis=1)]
    if len(rows) == 0:
        return None
    maxabs = int(np.abs(rows).max())
    shift = max(0, maxabs.bit_length() - 900)
    fl = np.array([[float(int(x) >> shift) for x in r] for r in rows.tolist()]) if shift or rows.dtype == object else rows.astype(float)
    top = float(np.abs(fl @ _embedding_matrix(L)).max())
    if top <= 0.0:
        return None
    return math.log(top) + shift * math.log(2) - math.log(den)


def growth_exponent(T) -> Optional[float]:
    """
    Fitted e in max_{|n| <= N} |f(n)| ~ N^e over the tail half of the table,
    using the largest archimedean embedding of each coefficient.
    """
    best = None
    xs, ys = [], []
    for s in range(T.N + 1):
        sh = T.shells[s]
        v = _shell_log_house(sh.num, sh.den, T.conductor)
        if v is not None:
            best = v if best is None else max(best, v)
        if best is not None and s >= max(1, T.N // 2):
            xs.append(math.log(s + 1))
            ys.append(best)
    if len(xs) < 4:
        return None
    return float(np.polyfit(xs, ys, 1)[0])


def shell_lcm_den(num: np.ndarray, den: int) -> int:
    if den == 1:
        return 1
    from .series.table import _content

    g = gcd(den, _content(num))
    return den // g if g else 1


def table_profile(T, tol: float = DEFAULT_TOL) -> HeightProfile:
    """Profile of an already expanded :class:`CoeffTable`."""
    hN: List[float] = []
    dlog: List[float] = []
    dex: List[Optional[int]] = []
    h = 0.0
    d = 1
    L = T.conductor
    for s in range(T.N + 1):
        sh = T.shells[s]
        if L == 1:
            hs = _rational_shell_height(sh.num, sh.den)
        else:
            hs = _cyclo_shell_height(sh.num, sh.den, L, tol)
        h = max(h, hs)
        d = lcm(d, shell_lcm_den(sh.num, sh.den))
        hN.append(h)
        dlog.append(math.log(d) if d > 1 else 0.0)
        dex.append(d if d.bit_length() <= DN_EXACT_BITS else None)
    prof = HeightProfile(T.N, hN, dlog, dex)
    if len(hN) >= 16:
        prof.fitted_class, prof.fitted_constant = classify_growth(hN)
    return prof


def height_profile(F, N_max: int, tol: float = DEFAULT_TOL) -> HeightProfile:
    """Expand F to total degree N_max and record h_N and d_N for every N."""
    if N_max < 1:
        raise ValueError("N_max must be at least 1")
    from .series import expand

    return table_profile(expand(F, N_max), tol)
