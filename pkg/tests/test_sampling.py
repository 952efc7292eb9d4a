import math

import numpy as np
import pytest
from scipy import stats

from mlefit.distributions import GMLParams, MLParams, gml_cdf, gml_log_moments, ml_fractional_moment
from mlefit.errors import DomainError
from mlefit.sampling import (
    RngStream,
    r_from_uniform,
    sample_exp,
    sample_gamma,
    sample_gml,
    sample_ml,
    sample_positive_stable,
    sample_r,
    stable_from_uniforms,
)


class TestRngStream:
    def test_same_path_same_stream(self):
        a = RngStream(7, 3, 11).uniform(5)
        b = RngStream(7, 3, 11).uniform(5)
        assert np.array_equal(a, b)

    def test_paths_differ(self):
        base = RngStream(7, 0, 0).uniform(4)
        for other in (RngStream(8, 0, 0), RngStream(7, 1, 0), RngStream(7, 0, 1)):
            assert not np.array_equal(base, other.uniform(4))

    def test_split_and_path(self):
        s = RngStream(7).split(2, 5)
        assert s.path == (2, 5)
        assert np.array_equal(s.uniform(3), RngStream(7, 2, 5).uniform(3))

    def test_entropy_streams_differ(self):
        assert RngStream.from_entropy().uniform() != RngStream.from_entropy().uniform()

    def test_scalar_and_array_shapes(self, rng):
        assert isinstance(sample_ml(rng, MLParams(0.5, 1.0)), float)
        assert sample_gml(rng, GMLParams(0.5, 1.0), 10).shape == (10,)


class TestTransforms:
    def test_r_inverse_cdf_matches_tan_form(self):
        u = np.linspace(0.01, 0.99, 99)
        a = 0.7
        th = a * math.pi
        tan_form = math.sin(th) * np.tan(th * u + math.pi / 2 - th) - math.cos(th)
        assert np.allclose(r_from_uniform(u, a), tan_form, rtol=1e-10)

    def test_r_median_is_one(self):
        assert r_from_uniform(0.5, 0.4) == pytest.approx(1.0, rel=1e-15)

    def test_stable_transform_positive(self):
        u = np.linspace(0.01, math.pi - 0.01, 50)
        assert np.all(stable_from_uniforms(u, np.ones_like(u), 0.5) > 0)

    def test_half_stable_is_levy(self, rng):
        # S_{1/2} with Laplace transform exp(-sqrt(lam)) equals 1/(4 G), G ~ Gamma(1/2)
        x = sample_positive_stable(rng, 0.5, 50_000)
        ref = stats.levy(scale=0.5)
        assert stats.kstest(x, ref.cdf).pvalue > 0.001


class TestBuildingBlocks:
    def test_exp_ks(self, rng):
        assert stats.kstest(sample_exp(rng, 20_000), "expon").pvalue > 0.001

    def test_gamma_ks(self, rng):
        x = sample_gamma(rng, 2.5, 20_000)
        assert stats.kstest(x, stats.gamma(2.5).cdf).pvalue > 0.001

    def test_gamma_small_shape_positive(self, rng):
        assert np.all(sample_gamma(rng, 0.05, 10_000) > 0)

    @pytest.mark.parametrize("fn", [sample_positive_stable, sample_r])
    def test_index_domain(self, rng, fn):
        with pytest.raises(DomainError):
            fn(rng, 1.5)

    def test_alpha_one_degenerate(self, rng):
        assert sample_positive_stable(rng, 1.0) == 1.0
        assert np.all(sample_r(rng, 1.0, 3) == 1.0)

    def test_gamma_domain(self, rng):
        with pytest.raises(DomainError):
            sample_gamma(rng, 0.0)


class TestCompositeLaws:
    def test_ml_alpha_one_is_exponential(self, rng):
        x = sample_ml(rng, MLParams(1.0, 2.0), 20_000)
        assert stats.kstest(x, stats.expon(scale=2.0).cdf).pvalue > 0.001

    def test_gml_alpha_one_is_gamma(self, rng):
        x = sample_gml(rng, GMLParams(1.0, 3.0), 20_000)
        assert stats.kstest(x, stats.gamma(3.0).cdf).pvalue > 0.001

    @pytest.mark.parametrize("alpha,beta", [(0.6, 1.0), (0.8, 2.0)])
    def test_gml_against_series_cdf(self, rng, alpha, beta):
        p = GMLParams(alpha, beta)
        x = sample_gml(rng, p, 20_000)
        # the series is reliable on a moderate range; compare there
        for q in (0.5, 1.0, 2.0):
            emp = float(np.mean(x <= q))
            assert emp == pytest.approx(gml_cdf(p, q), abs=4 * math.sqrt(0.25 / x.size))

    def test_ml_fractional_moment(self, rng):
        p = MLParams(0.7, 3.0)
        q = 0.2  # 2q < alpha, so the sample mean has finite variance
        x = sample_ml(rng, p, 200_000) ** q
        se = x.std(ddof=1) / math.sqrt(x.size)
        assert abs(x.mean() - ml_fractional_moment(p, q)) < 4 * se

    def test_gml_log_moments(self, rng):
        p = GMLParams(0.6, 3.0)
        y = np.log(sample_gml(rng, p, 200_000))
        m = gml_log_moments(p)
        assert abs(y.mean() - m.mean) < 4 * math.sqrt(m.variance / y.size)
        se_var = math.sqrt((m.fourth_central - m.variance**2) / y.size)
        assert abs(y.var() - m.variance) < 4 * se_var
