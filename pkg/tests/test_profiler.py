import json
import math

import pytest

from pclab.dsl import parse_series as P
from pclab.profiler import (
    CONSISTENT,
    HEIGHT_EXCLUDES,
    HYPOTHESIS_NOTE,
    IRRATIONAL,
    NONTORSION,
    DichotomyReport,
    RemarkResult,
    certify_dichotomy,
    chebyshev_psi,
    remark_experiment,
    sample_omegas,
)


def test_torsion_example_is_consistent():
    rep = certify_dichotomy(P("1/((1-x1)*(1-x1*x2))"), N=16)
    assert rep.verdict == CONSISTENT
    assert rep.reconstruction.torsion_form
    assert rep.profile.fitted_class == "constant"
    assert all(d["kronecker_verdict"] == "rational" and d["poles_roots_of_unity"] for d in rep.line_diagnostics)
    assert rep.notes == [HYPOTHESIS_NOTE]


def test_gap_series_is_irrational():
    rep = certify_dichotomy(P("gapfact()"), N=64)
    assert rep.verdict == IRRATIONAL
    assert rep.reconstruction is None


def test_trinomial_height_excludes():
    rep = certify_dichotomy(P("1/(1-x1-x2)"), N=256, recon_N=16)
    assert rep.verdict == HEIGHT_EXCLUDES
    assert rep.profile.fitted_class == "linear"
    assert rep.profile.fitted_constant == pytest.approx(math.log(2), rel=0.05)


def test_nontorsion_small_heights():
    # a small-height rational function whose denominator is not binomial
    rep = certify_dichotomy(P("1/(1-x1-x2)"), N=16, deg_bounds=(0, 1))
    assert rep.verdict in (NONTORSION, HEIGHT_EXCLUDES)


def test_growth_exponent():
    rep = certify_dichotomy(P("1/((1-x1)^2*(1-x1*x2))"), N=32)
    assert rep.growth_exponent == pytest.approx(1.0, abs=0.05)
    rep = certify_dichotomy(P("1/(1-zeta(3)*x1)^3"), N=32)
    assert rep.growth_exponent == pytest.approx(2.0, abs=0.1)


def test_n_too_small():
    with pytest.raises(ValueError):
        certify_dichotomy(P("1/(1-x1)"), N=4)


def test_report_roundtrip_and_determinism():
    F = P("1/((1-x1*x2)*(1-zeta(3)*x1))")
    a = certify_dichotomy(F, N=16, seed=5).dumps()
    b = certify_dichotomy(F, N=16, seed=5).dumps()
    assert a == b
    doc = json.loads(a)
    assert doc["schema"] == "pc-report/1"
    assert DichotomyReport.from_dict(doc).dumps() == a


def test_omega_sampling():
    om = sample_omegas(3, 6, 24, seed=1)
    assert len(om) == 6
    assert all(24 % k == 0 for tup in om for k, _ in tup)
    assert sample_omegas(3, 6, 24, seed=1) == om


def test_remark_examples():
    r = remark_experiment(1, 10)
    assert r.dN == 2520
    assert r.log_dN == pytest.approx(math.log(2520), abs=1e-12)
    assert r.ratio == pytest.approx(0.783, abs=1e-3)
    assert remark_experiment(2, 12).dN == 60
    r = remark_experiment(1, 100)
    assert r.ratio == pytest.approx(chebyshev_psi(100) / 100, abs=1e-12)
    assert r.csv_row().startswith("1,100,")
    assert RemarkResult.CSV_HEADER == "k,N,log_dN,target,ratio"


def test_chebyshev_psi():
    assert chebyshev_psi(10) == pytest.approx(math.log(2520))
