import math
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from pclab.cyclotomic import as_cyclo, zeta
from pclab.dsl import parse_series as P
from pclab.errors import InsufficientDataError
from pclab.linalg import det_bareiss, det_cofactor
from pclab.rationality import (
    NOT_RATIONAL,
    RATIONAL,
    RationalForm,
    binomial_factorization,
    guess_constant_recurrence,
    guess_p_recurrence,
    hankel_determinant,
    kronecker_scan,
    kronecker_test,
    poles_are_roots_of_unity,
    reconstruct_multivariate,
    reconstruct_univariate,
)
from pclab.series import MultiPoly, binomial, expand


def fib(n, a=1, b=1):
    out = [a, b]
    while len(out) < n:
        out.append(out[-1] + out[-2])
    return out[:n]


def gap_indicator(n):
    g = [0] * n
    k = 0
    while k + math.factorial(k) < n:
        g[k + math.factorial(k)] = 1
        k += 1
    return g


class TestHankel:
    def test_examples(self):
        assert hankel_determinant([1] * 5, 1) == 0
        assert hankel_determinant([1, 1, 2, 3, 5], 1) == 1

    def test_exponential_series(self):
        # det [[1,1,1/2],[1,1/2,1/6],[1/2,1/6,1/24]] by cofactor expansion
        m = [[Fr(1), Fr(1), Fr(1, 2)], [Fr(1), Fr(1, 2), Fr(1, 6)], [Fr(1, 2), Fr(1, 6), Fr(1, 24)]]
        ref = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        assert ref == Fr(-1, 144)
        assert hankel_determinant(P("expseries()"), 2) == as_cyclo(ref)

    def test_catalan_unimodular(self):
        for n in range(11):
            assert hankel_determinant(P("catalan()"), n) == 1

    def test_too_short(self):
        with pytest.raises(InsufficientDataError):
            hankel_determinant([1, 2], 1)

    def test_bareiss_matches_cofactor_cyclotomic(self):
        rng = random.Random(3)
        vals = [0, 1, -2, as_cyclo("1/3"), zeta(3), 1 - zeta(4), zeta(5) ** 2]
        for _ in range(20):
            n = rng.randint(1, 4)
            M = [[rng.choice(vals) for _ in range(n)] for _ in range(n)]
            assert det_bareiss(M) == det_cofactor(M)


class TestKronecker:
    def test_fibonacci_rational(self):
        v = kronecker_test(P("x1/(1-x1-x1^2)"), 2, 4)
        assert v.kind == RATIONAL
        assert v.recurrence.coeffs == (-1, -1, 1)

    def test_exponential_not_rational(self):
        assert kronecker_test(P("expseries()"), 4, 5).kind == NOT_RATIONAL

    def test_catalan_not_rational(self):
        assert kronecker_test(P("catalan()"), 2, 5).kind == NOT_RATIONAL

    def test_scan_on_gap_line(self):
        v = kronecker_scan(P("line(gapfact(), 1, 1)"), 5, 4, 64)
        assert v.kind == NOT_RATIONAL

    def test_scan_rational_line(self):
        v = kronecker_scan(P("line(1/((1-x1)*(1-x1*x2)), zeta(3), zeta(4))"), 5, 4, 40)
        assert v.kind == RATIONAL
        assert poles_are_roots_of_unity(v.recurrence.characteristic()).ok


class TestRecurrences:
    def test_powers_of_two(self):
        r = guess_constant_recurrence([2 ** n for n in range(20)], 3)
        assert r.order == 1 and r.coeffs == (-2, 1)

    def test_fibonacci(self):
        data = fib(40)
        r = guess_constant_recurrence(data[:20], 3)
        assert r.order == 2
        assert r.holds_on(data)

    def test_gap_indicator_has_none(self):
        g = gap_indicator(200)
        assert guess_constant_recurrence(g, 8) is None
        assert guess_p_recurrence(g, 3, 3) is None

    def test_factorial(self):
        r = guess_p_recurrence([math.factorial(n) for n in range(30)], 1, 1)
        # g[n+1] - (n+1) g[n] = 0
        assert r.poly_at(1, 5) == 1 and r.poly_at(0, 5) == -6

    def test_central_binomial(self):
        data = [math.comb(2 * n, n) for n in range(40)]
        r = guess_p_recurrence(data[:30], 1, 1)
        assert r.holds_on(data)
        # (n+1) g[n+1] - (4n+2) g[n] = 0 up to a scalar
        for n in range(5):
            assert r.poly_at(0, n) * (n + 1) == -(4 * n + 2) * r.poly_at(1, n)

    def test_log_coefficients(self):
        data = [Fr((-1) ** (n + 1), n) for n in range(1, 31)]
        r = guess_p_recurrence(data, 1, 1, start=1)
        for n in range(1, 8):
            assert r.poly_at(0, n) * (n + 1) == n * r.poly_at(1, n)

    def test_insufficient(self):
        with pytest.raises(InsufficientDataError):
            guess_constant_recurrence([1, 2, 3], 3)


class TestReconstruction:
    def test_fibonacci(self):
        f = reconstruct_univariate(fib(16), 1, 2, 16)
        t = MultiPoly.variable(1, 1)
        assert f.den == 1 - t - t * t
        assert not f.torsion_form

    def test_period_three(self):
        f = reconstruct_univariate([1, 0, 0] * 6, 0, 3, 18)
        t = MultiPoly.variable(1, 1)
        assert f.den == 1 - t ** 3 and f.torsion_form
        assert sorted(x.mult for x in f.factors) == [1, 1, 1]

    def test_exponential_absent(self):
        assert reconstruct_univariate(P("expseries()"), 4, 4, 16) is None

    def test_torsion_multivariate(self):
        f = reconstruct_multivariate(P("1/((1-x1*x2)*(1-zeta(3)*x1))"), 0, 3, 10)
        assert f.torsion_form
        got = {(x.zeta, x.q) for x in f.factors}
        assert got == {(zeta(3), (1, 0)), (as_cyclo(1), (1, 1))}

    def test_nontorsion_multivariate(self):
        f = reconstruct_multivariate(P("1/(1-x1-x2)"), 0, 1, 10)
        x1, x2 = MultiPoly.variable(2, 1), MultiPoly.variable(2, 2)
        assert f.den == 1 - x1 - x2 and not f.torsion_form

    def test_polynomial(self):
        f = reconstruct_multivariate(P("1+x1*x2"), 2, 0, 10)
        assert f.den == MultiPoly.constant(2, 1)
        assert f.num == P("1+x1*x2").num

    def test_json_roundtrip(self):
        f = reconstruct_multivariate(P("1/((1-x1*x2)*(1-zeta(3)*x1))"), 0, 3, 10)
        g = RationalForm.from_json(f.to_json())
        assert g.to_json() == f.to_json()


class TestFactorization:
    def test_pole_certificates(self):
        assert poles_are_roots_of_unity(P("1-x1^3").num).factors == [(1, 1), (3, 1)]
        assert not poles_are_roots_of_unity(P("1-x1-x1^2").num).ok
        assert poles_are_roots_of_unity(P("(1-x1)*(1+x1+x1^2)^2").num).factors == [(1, 1), (3, 2)]

    def test_pole_certificate_over_cyclotomic_field(self):
        t = MultiPoly.variable(1, 1)
        b = (1 - zeta(8) * t) * (1 + zeta(3) * t)
        cert = poles_are_roots_of_unity(b)
        assert cert.ok

    def test_binomial_examples(self):
        fs, cof, tf, _ = binomial_factorization(P("1-x1-x2+x1*x2").num)
        assert tf and cof == MultiPoly.constant(2, 1)
        assert {(f.zeta, f.q) for f in fs} == {(as_cyclo(1), (1, 0)), (as_cyclo(1), (0, 1))}
        fs, cof, tf, _ = binomial_factorization(P("1+x1+x1^2", 2).num)
        assert tf and {(f.zeta, f.q) for f in fs} == {(zeta(3), (1, 0)), (zeta(3) ** 2, (1, 0))}
        fs, cof, tf, status = binomial_factorization(P("1-x1-x2").num)
        assert fs == [] and not tf and status == "exhausted"


@settings(max_examples=25, deadline=None)
@given(
    st.lists(
        st.tuples(st.sampled_from([1, 2, 3, 4, 6]), st.integers(0, 5), st.tuples(st.integers(0, 2), st.integers(0, 2))),
        min_size=1,
        max_size=3,
    )
)
def test_binomial_factorization_roundtrip(spec):
    B = MultiPoly.constant(2, 1)
    for k, e, q in spec:
        if q == (0, 0):
            q = (1, 0)
        z = zeta(k, e % k) if k > 1 else as_cyclo(1)
        B = B * binomial(2, z, q)
    fs, cof, tf, _ = binomial_factorization(B, torsion_bound=12)
    assert tf
    prod = cof
    for f in fs:
        prod = prod * f.poly(2)
    assert prod == B


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=3), st.lists(st.integers(-3, 3), min_size=1, max_size=2))
def test_univariate_reconstruction_recovers_form(num, den_tail):
    t = MultiPoly.variable(1, 1)
    A = sum((c * t ** i for i, c in enumerate(num)), MultiPoly.constant(1, 0))
    B = MultiPoly.constant(1, 1)
    for i, c in enumerate(den_tail):
        B = B + c * t ** (i + 1)
    c = expand(_series(A, B), 23).coefficients()
    f = reconstruct_univariate(c, len(num) - 1, len(den_tail), 24)
    assert f is not None
    assert f.num * B == A * f.den


def _series(A, B):
    from pclab.series import rational

    return rational(A, B)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.sampled_from([1, 2, 3, 4, 6, 8, 12]), st.integers(0, 11)), min_size=1, max_size=4))
def test_certified_poles_divide_power_of_binomial(roots):
    t = MultiPoly.variable(1, 1)
    b = MultiPoly.constant(1, 1)
    for k, e in roots:
        b = b * (1 - zeta(k, e % k) * t if k > 1 else 1 - t)
    cert = poles_are_roots_of_unity(b)
    assert cert.ok
    L = 1
    for k, _ in cert.factors:
        L = L * k // math.gcd(L, k)
    deg = b.total_degree
    assert ((1 - t ** L) ** deg).exact_divide(b) is not None
