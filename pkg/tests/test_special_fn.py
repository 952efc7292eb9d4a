import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from mlefit.errors import ConvergenceError, DomainError
from mlefit.special_fn import (
    EULER_GAMMA,
    ZETA3,
    PsiMode,
    constants,
    digamma,
    log_gamma,
    mittag_leffler,
    polygamma,
    trigamma,
)

# Frozen oracle values (mpmath, 40 digits):
# E_{1/2,1}(-1): 200-term Kahan-free mp.fsum and e*erfc(1) agree to 40 digits
E_HALF_ONE_AT_MINUS_ONE = 0.4275835761558070044
# sum_{k>=0} 1/(10+k)^2 summed to 10^6 terms plus the integral tail
TRIGAMMA_10 = 0.1051663356816857460
# 250-digit direct summation of 6000 terms
E_03_1_AT_MINUS_5 = 0.13708086902027064
E_02_1_AT_MINUS_3 = 0.2258545451264881


class TestMittagLeffler:
    def test_reduces_to_exp(self):
        assert mittag_leffler(1.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-15)

    def test_zero_argument(self):
        assert mittag_leffler(0.5, 0.5, 0.0) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-15)

    def test_half_order_against_erfc_identity(self):
        assert mittag_leffler(0.5, 1.0, -1.0) == pytest.approx(E_HALF_ONE_AT_MINUS_ONE, rel=1e-12)
        for z in (-2.0, -0.3, 0.7, 2.0):
            expected = float(mpmath.exp(z * z) * mpmath.erfc(-z))
            assert mittag_leffler(0.5, 1.0, z) == pytest.approx(expected, rel=1e-12)

    def test_exp_identity_on_grid(self):
        xs = np.linspace(-5.0, 5.0, 401)
        err = max(abs(mittag_leffler(1.0, 1.0, x) - math.exp(x)) / math.exp(abs(x)) for x in xs)
        assert err <= 1e-12

    @pytest.mark.parametrize("alpha,nu,tau", [(0.3, 0.7, 2.5), (0.8, 1.6, -4.0), (0.55, 0.55, -1.3)])
    def test_against_mpmath_series(self, alpha, nu, tau):
        mpmath.mp.dps = 40
        expected = mpmath.nsum(lambda k: mpmath.mpf(tau) ** k / mpmath.gamma(nu + k * alpha), [0, mpmath.inf])
        assert mittag_leffler(alpha, nu, tau) == pytest.approx(float(expected), rel=1e-12)

    def test_heavy_cancellation(self):
        # largest terms are near exp(5**(1/0.3)) ~ 1e92
        assert mittag_leffler(0.3, 1.0, -5.0) == pytest.approx(E_03_1_AT_MINUS_5, rel=1e-14)
        assert mittag_leffler(0.2, 1.0, -3.0) == pytest.approx(E_02_1_AT_MINUS_3, rel=1e-14)

    def test_completely_monotone_on_negative_axis(self):
        vals = [mittag_leffler(0.6, 1.0, -x) for x in np.linspace(0.0, 5.0, 26)]
        assert all(0.0 < b < a for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("alpha,nu", [(0.0, 1.0), (1.2, 1.0), (0.5, 0.0), (0.5, -1.0)])
    def test_domain(self, alpha, nu):
        with pytest.raises(DomainError):
            mittag_leffler(alpha, nu, 1.0)

    def test_overflow_guard(self):
        with pytest.raises(DomainError, match="overflow guard"):
            mittag_leffler(0.5, 1.0, -30.0)

    def test_nonfinite_argument(self):
        with pytest.raises(DomainError):
            mittag_leffler(0.5, 1.0, math.nan)

    def test_term_budget(self, monkeypatch):
        import mlefit.special_fn as sf

        monkeypatch.setattr(sf, "ML_MAX_TERMS", 5)
        with pytest.raises(ConvergenceError):
            sf.mittag_leffler(1.0, 1.0, 3.0)


class TestPsi:
    def test_digamma_at_one(self):
        assert digamma(1.0) == pytest.approx(-0.5772156649, abs=1e-10)
        assert digamma(1.0) == pytest.approx(-EULER_GAMMA, rel=1e-14)

    def test_digamma_at_two(self):
        assert digamma(2.0) == pytest.approx(1.0 - EULER_GAMMA, rel=1e-13)

    def test_trigamma_at_one(self):
        assert trigamma(1.0) == pytest.approx(math.pi**2 / 6, rel=1e-13)

    def test_trigamma_at_ten_brute_force(self):
        assert trigamma(10.0) == pytest.approx(TRIGAMMA_10, rel=1e-12)

    def test_truncated_digamma_exact(self):
        # log(1) - 1/2 - 1/12 + 1/120 - 1/252
        assert digamma(1.0, PsiMode.PAPER_TRUNCATED) == float(Fraction(-1459, 2520))
        assert digamma(1.0, "paper") == pytest.approx(-0.578968, abs=1e-6)

    def test_truncated_trigamma_exact(self):
        # 2 + 2 + 8/6 - 32/30 + 128/42 at tau = 1/2
        assert trigamma(0.5, PsiMode.PAPER_TRUNCATED) == pytest.approx(float(Fraction(256, 35)), rel=1e-15)
        # documented gap to the exact value pi^2/2
        assert abs(trigamma(0.5, "paper") - trigamma(0.5)) > 2.0

    @pytest.mark.parametrize("tau", [0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
    def test_digamma_recurrence(self, tau):
        assert digamma(tau + 1.0) - digamma(tau) == pytest.approx(1.0 / tau, abs=1e-10)

    def test_trigamma_positive_and_decreasing(self):
        grid = np.geomspace(1e-3, 100.0, 500)
        vals = [trigamma(t) for t in grid]
        assert all(v > 0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_polygamma_against_mpmath(self, n):
        for x in np.geomspace(1e-3, 100.0, 200):
            ref = float(mpmath.polygamma(n, x))
            got = polygamma(n, x)
            # digamma crosses zero near 1.4616; use an absolute floor there
            scale = max(abs(ref), 1.0) if n == 0 else abs(ref)
            assert abs(got - ref) <= 1e-10 * scale, (n, x)

    @pytest.mark.parametrize("fn", [digamma, trigamma])
    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf])
    def test_domain(self, fn, bad):
        with pytest.raises(DomainError):
            fn(bad)

    def test_mode_parsing(self):
        assert PsiMode.parse(None) is PsiMode.ACCURATE
        assert PsiMode.parse("PAPER") is PsiMode.PAPER_TRUNCATED
        with pytest.raises(DomainError):
            PsiMode.parse("fast")

    @given(st.floats(min_value=1e-3, max_value=100.0))
    def test_truncated_trigamma_is_derivative_of_truncated_digamma(self, t):
        h = 1e-6 * t
        fd = (digamma(t + h, "paper") - digamma(t - h, "paper")) / (2 * h)
        assert fd == pytest.approx(trigamma(t, "paper"), rel=1e-5)


class TestLogGamma:
    @pytest.mark.parametrize(
        "tau,expected",
        [(1.0, 0.0), (0.5, 0.5723649429247001), (5.0, math.log(24.0))],
    )
    def test_known_values(self, tau, expected):
        assert log_gamma(tau) == pytest.approx(expected, rel=1e-12, abs=1e-15)

    @pytest.mark.parametrize("q", [0.1, 0.25, 0.5])
    def test_reflection(self, q):
        lhs = math.exp(log_gamma(q) + log_gamma(1.0 - q))
        assert lhs == pytest.approx(math.pi / math.sin(math.pi * q), rel=1e-10)

    def test_against_mpmath(self):
        for x in np.geomspace(1e-3, 170.0, 300):
            ref = float(mpmath.loggamma(x))
            assert log_gamma(x) == pytest.approx(ref, rel=1e-12, abs=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            log_gamma(0.0)


class TestConstants:
    def test_values(self):
        c = constants()
        assert c["euler_gamma"] == 0.5772156649015328606065
        assert c == constants()

    def test_zeta3_brute_force(self):
        # partial sum to N-1 plus Euler-Maclaurin tail 1/(2N^2) + 1/(2N^3) + 1/(4N^4)
        n = 20000
        partial = math.fsum(1.0 / k**3 for k in range(1, n))
        tail = 1 / (2 * n**2) + 1 / (2 * n**3) + 1 / (4 * n**4)
        assert ZETA3 == pytest.approx(partial + tail, rel=1e-15)
        assert ZETA3 == pytest.approx(1.2020569031595943, rel=1e-16)
