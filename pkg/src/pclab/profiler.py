"""
End-to-end experiments: the rational/torsion dichotomy pipeline, the lcm
growth experiment for log(1 + x^k), and root-of-unity line diagnostics.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .arith import divisors, lcm, primes_upto, totient
from .cyclotomic import DEFAULT_PHI_CAP, ONE, CycloElement, render, zeta
from .heights import DEFAULT_TOL, HeightProfile, growth_exponent, table_profile
from .rationality import (
    NOT_RATIONAL,
    RATIONAL,
    RationalForm,
    kronecker_scan,
    poles_are_roots_of_unity,
    reconstruct_multivariate,
)
from .series import LineSpec, SeriesExpr, expand, oracle
from .series.nodes import expand_rational

REPORT_SCHEMA = "pc-report/1"

CONSISTENT = "consistent_rational_torsion"
NONTORSION = "rational_nontorsion_denominator"
HEIGHT_EXCLUDES = "height_growth_excludes_hypothesis"
IRRATIONAL = "irrational_in_window"
INCONCLUSIVE = "inconclusive"
VERDICTS = (CONSISTENT, NONTORSION, HEIGHT_EXCLUDES, IRRATIONAL, INCONCLUSIVE)

SMALL_GROWTH = ("constant", "logarithmic")
HYPOTHESIS_NOTE = "sub-linear growth of h_N and log d_N is read off finite data as a fitted class of constant or logarithmic"


@dataclass
class CertifyConfig:
    N: int = 16
    deg_num: int = 4
    deg_den: int = 4
    recon_N: Optional[int] = None
    torsion_bound: int = 24
    omega_samples: int = 5
    seed: int = 0
    tol: float = DEFAULT_TOL
    window_len: int = 4
    line_terms: Optional[int] = None

    def resolved(self) -> "CertifyConfig":
        out = CertifyConfig(**self.__dict__)
        if out.recon_N is None:
            out.recon_N = min(out.N, 16)
        out.recon_N = max(out.recon_N, out.deg_num + out.deg_den + 2)
        ws = max(out.deg_den, out.deg_num + 1)
        if out.line_terms is None:
            out.line_terms = max(min(out.N, 64), 2 * (ws + out.window_len) + 4)
        return out

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class DichotomyReport:
    verdict: str
    profile: HeightProfile
    line_diagnostics: List[dict]
    reconstruction: Optional[RationalForm]
    parameters: dict
    notes: List[str] = field(default_factory=list)
    growth_exponent: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "verdict": self.verdict,
            "profile": self.profile.to_json(),
            "growth_exponent": self.growth_exponent,
            "line_diagnostics": self.line_diagnostics,
            "reconstruction": None if self.reconstruction is None else self.reconstruction.to_json(),
            "parameters": self.parameters,
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_dict(cls, data) -> "DichotomyReport":
        if data.get("schema") != REPORT_SCHEMA:
            raise ValueError(f"not a {REPORT_SCHEMA} document")
        rec = data.get("reconstruction")
        return cls(
            verdict=data["verdict"],
            profile=HeightProfile.from_json(data["profile"]),
            line_diagnostics=list(data["line_diagnostics"]),
            reconstruction=None if rec is None else RationalForm.from_json(rec),
            parameters=dict(data["parameters"]),
            notes=list(data.get("notes", [])),
            growth_exponent=data.get("growth_exponent"),
        )

    def summary(self) -> str:
        p = self.profile
        lines = [
            f"verdict: {self.verdict}",
            f"height profile: N <= {p.N_max}, class {p.fitted_class}, constant {p.fitted_constant}",
            f"h_N at N_max: {p.hN[-1]:.6g}   log d_N at N_max: {p.dN_log[-1]:.6g}",
            f"coefficient growth exponent (max |f| ~ N^e): {self.growth_exponent}",
        ]
        if self.reconstruction is None:
            lines.append("reconstruction: none within the degree bounds")
        else:
            r = self.reconstruction
            lines.append(f"reconstruction: {r}")
            lines.append(f"  torsion form: {r.torsion_form}; cofactor {r.cofactor} ({r.cofactor_status})")
            for f in r.factors:
                lines.append(f"  (1 - ({render(f.zeta)})*x^{tuple(f.q)})^{f.mult}")
        for d in self.line_diagnostics:
            lines.append(f"line {d['omegas']}: {d['kronecker_verdict']}")
        lines.extend(self.notes)
        return "\n".join(lines)


def sample_omegas(m: int, count: int, torsion_bound: int, seed: int, base_conductor: int = 1, phi_cap: int = DEFAULT_PHI_CAP):
    """Root-of-unity tuples with orders uniform over the divisors of torsion_bound."""
    rng = random.Random(seed)
    orders = divisors(torsion_bound)
    out = []
    attempts = 0
    while len(out) < count and attempts < 100 * max(count, 1):
        attempts += 1
        tup = []
        cond = base_conductor
        for _ in range(m):
            k = rng.choice(orders)
            units = [e for e in range(k) if math.gcd(e, k) == 1] if k > 1 else [0]
            e = rng.choice(units)
            tup.append((k, e))
            cond = lcm(cond, k)
        if totient(cond) > phi_cap:
            continue
        out.append(tuple(tup))
    return out


def _omega_values(tup) -> Tuple[CycloElement, ...]:
    return tuple(zeta(k, e) if k > 1 else ONE for k, e in tup)


def line_diagnostic(F: SeriesExpr, omegas, ws: int, wl: int, n_terms: int) -> dict:
    vals = _omega_values(omegas)
    line = LineSpec(F, vals)
    verdict = kronecker_scan(line, ws, wl, n_terms)
    out = {
        "omegas": [render(v) for v in vals],
        "kronecker_verdict": verdict.kind,
        "window": [verdict.window[0], verdict.window[-1]] if verdict.window else [],
    }
    if verdict.kind == RATIONAL:
        rec = verdict.recurrence
        out["recurrence"] = str(rec)
        cert = poles_are_roots_of_unity(rec.characteristic())
        out["poles_roots_of_unity"] = cert.ok
        out["pole_orders"] = [[k, mult] for k, mult in cert.factors]
    return out


def certify_dichotomy(F: SeriesExpr, N: int = 16, deg_bounds: Tuple[int, int] = (4, 4), torsion_bound: int = 24, omega_samples: int = 5, seed: int = 0, tol: float = DEFAULT_TOL, recon_N: Optional[int] = None, window_len: int = 4, line_terms: Optional[int] = None) -> DichotomyReport:
    """
    Run the profile, the line diagnostics and the reconstruction, and fold
    them into one verdict.
    """
    cfg = CertifyConfig(N, deg_bounds[0], deg_bounds[1], recon_N, torsion_bound, omega_samples, seed, tol, window_len, line_terms).resolved()
    if N < cfg.deg_num + cfg.deg_den + 2:
        raise ValueError(f"N must be at least {cfg.deg_num + cfg.deg_den + 2} for these degree bounds")
    T = expand(F, max(cfg.N, cfg.recon_N))
    profile = table_profile(T.truncate(cfg.N), cfg.tol)
    notes = [HYPOTHESIS_NOTE]
    if profile.fitted_class == "inconclusive" and cfg.N < 15:
        notes.append("profile too short to classify growth (need N >= 15)")

    ws = max(cfg.deg_den, cfg.deg_num + 1)
    diagnostics = []
    for omegas in sample_omegas(F.m, cfg.omega_samples, cfg.torsion_bound, cfg.seed, T.conductor):
        diagnostics.append(line_diagnostic(F, omegas, ws, cfg.window_len, cfg.line_terms))

    form = reconstruct_multivariate(T.truncate(cfg.recon_N), cfg.deg_num, cfg.deg_den, cfg.recon_N, cfg.torsion_bound, cfg.seed)
    if form is not None and T.N > cfg.recon_N:
        if expand_rational(form.num, form.den, T.N) != T:
            notes.append("reconstruction fitted to the reconstruction window disagrees with the full expansion")
            form = None

    cls = profile.fitted_class
    if cls in ("linear", "superlinear"):
        verdict = HEIGHT_EXCLUDES
    elif cls not in SMALL_GROWTH:
        verdict = INCONCLUSIVE
    elif form is not None:
        verdict = CONSISTENT if form.torsion_form else NONTORSION
    elif any(d["kronecker_verdict"] == NOT_RATIONAL for d in diagnostics):
        verdict = IRRATIONAL
    else:
        verdict = INCONCLUSIVE
    if verdict == CONSISTENT:
        bad = [d for d in diagnostics if d["kronecker_verdict"] != RATIONAL or not d.get("poles_roots_of_unity")]
        if bad:
            notes.append("some line diagnostics did not confirm root-of-unity poles")
    params = cfg.to_json()
    params["m"] = F.m
    return DichotomyReport(verdict, profile, diagnostics, form, params, notes, growth_exponent(T.truncate(cfg.N)))


# ---------------------------------------------------------------------------
# lcm growth


def chebyshev_psi(x: float) -> float:
    """Sum of log p over prime powers p^a <= x."""
    total = 0.0
    for p in primes_upto(int(x)):
        pa = p
        while pa <= x:
            total += math.log(p)
            pa *= p
    return total


@dataclass
class RemarkResult:
    k: int
    N: int
    log_dN: float
    target: float
    ratio: float
    dN: int = 0

    CSV_HEADER = "k,N,log_dN,target,ratio"

    def csv_row(self) -> str:
        return f"{self.k},{self.N},{self.log_dN!r},{self.target!r},{self.ratio!r}"

    def to_json(self) -> dict:
        return {"k": self.k, "N": self.N, "log_dN": self.log_dN, "target": self.target, "ratio": self.ratio}


def remark_experiment(k: int, N: int) -> RemarkResult:
    """log d_N of log(1 + x^k) against N/k, with d_N taken from the expanded coefficients."""
    if k < 1 or N < k:
        raise ValueError("need k >= 1 and N >= k")
    T = expand(oracle("log1p", k), N)
    d = 1
    for sh in T.shells:
        d = lcm(d, sh.lcm_den())
    log_d = math.log(d)
    target = N / k
    return RemarkResult(k, N, log_d, target, log_d / target, d)
