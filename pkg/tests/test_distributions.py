import math

import numpy as np
import pytest
from scipy.special import gammaln

from lighttails import distributions as D

CATALOGUE = [
    D.Gaussian(0.0, 1.0),
    D.Gaussian(2.0, 0.5),
    D.Exponential(1.0),
    D.Exponential(3.0),
    D.Rademacher(),
    D.UniformInterval(0.0, 1.0),
    D.UniformInterval(-2.0, 3.0),
    D.Poisson(2.0),
    D.ChiSquared(3),
    D.TwoPointEps(0.1),
    D.FiniteSupport((-1.0, 0.0, 2.0), (0.25, 0.5, 0.25)),
    D.Shifted(D.Exponential(1.0), -1.0),
    D.Scaled(D.Rademacher(), 2.0),
    D.SquareOf(D.Gaussian(0.0, 1.0)),
    D.Centered(D.Exponential(1.0)),
]


def mc_sd(samples):
    return samples.std(ddof=1) / math.sqrt(len(samples))


class TestSampling:
    def test_rademacher_support(self):
        vals = D.sample(D.Rademacher(), seed=7, count=4)
        assert set(np.unique(vals)) <= {-1.0, 1.0}

    def test_point_mass(self):
        vals = D.sample(D.FiniteSupport((0.0,), (1.0,)), seed=3, count=10)
        assert np.all(vals == 0.0)

    def test_exponential_mean(self):
        vals = D.sample(D.Exponential(1.0), seed=1, count=10 ** 6)
        assert abs(vals.mean() - 1.0) < 0.01

    def test_bit_identical(self):
        for spec in CATALOGUE:
            a = D.sample(spec, seed=11, count=500)
            b = D.sample(spec, seed=11, count=500)
            assert np.array_equal(a, b)

    def test_streams_differ(self):
        a = D.sample(D.Gaussian(0, 1), seed=11, count=100, stream=0)
        b = D.sample(D.Gaussian(0, 1), seed=11, count=100, stream=1)
        assert not np.array_equal(a, b)

    def test_vector_shape(self):
        vec = D.VectorSpec(3, (D.Gaussian(0, 1), D.Exponential(1.0), D.Rademacher()))
        out = D.sample_vector(vec, seed=2, count=50)
        assert out.shape == (50, 3)


class TestValidation:
    def test_bad_sd(self):
        with pytest.raises(D.SpecError, match="sd"):
            D.validate(D.Gaussian(0.0, -1.0))

    def test_bad_rate(self):
        with pytest.raises(D.SpecError, match="rate"):
            D.validate(D.Exponential(0.0))

    def test_bad_probs(self):
        with pytest.raises(D.SpecError, match="probs"):
            D.validate(D.FiniteSupport((0.0, 1.0), (0.6, 0.6)))

    def test_bad_eps(self):
        with pytest.raises(D.SpecError, match="eps"):
            D.validate(D.TwoPointEps(1.5))


class TestMoments:
    def test_rademacher_cube(self):
        assert D.lp_norm(D.Rademacher(), 3) == pytest.approx(1.0, abs=1e-14)

    def test_exponential_l2(self):
        assert D.lp_norm(D.Exponential(1.0), 2) == pytest.approx(math.sqrt(2), rel=1e-12)

    def test_finite_l1(self):
        spec = D.FiniteSupport((0.0, 2.0), (0.5, 0.5))
        assert D.lp_norm(spec, 1) == pytest.approx(1.0, abs=1e-14)

    def test_p_below_one_rejected(self):
        with pytest.raises(ValueError):
            D.lp_norm(D.Rademacher(), 0.5)

    def test_two_point_eps_exact(self):
        eps = 0.03
        spec = D.TwoPointEps(eps)
        for p in (1.0, 2.0, 5.0, 32.0):
            assert D.lp_norm(spec, p) == pytest.approx(eps ** (1.0 / p), rel=1e-12)

    def test_lyapunov_monotone(self):
        ps = [1.0, 1.5, 2.0, 4.0, 8.0, 16.0, 64.0, 256.0]
        for spec in CATALOGUE:
            norms = [D.lp_norm(spec, p) for p in ps]
            for a, b in zip(norms, norms[1:]):
                assert a <= b + 1e-12 * max(1.0, b)

    def test_gaussian_closed_form(self):
        # E|N(0,1)|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)
        for p in (1.0, 2.0, 3.0, 7.5):
            want = math.exp((0.5 * p * math.log(2.0)
                             + float(gammaln((p + 1) / 2)) - 0.5 * math.log(math.pi)) / p)
            assert D.lp_norm(D.Gaussian(0, 1), p) == pytest.approx(want, rel=1e-10)

    def test_mc_agreement(self):
        count = 2 * 10 ** 5
        for spec in CATALOGUE:
            vals = np.abs(D.sample(spec, seed=19, count=count))
            for p in (1.0, 2.0, 4.0):
                emp = vals ** p
                tol = 5 * mc_sd(emp)
                assert abs(emp.mean() - D.abs_moment(spec, p)) <= tol + 1e-12

    def test_high_p_no_overflow(self):
        for spec in CATALOGUE:
            assert np.isfinite(D.log_abs_moment(spec, 256.0))


class TestMeans:
    def test_examples(self):
        assert D.mean(D.Rademacher()) == 0.0
        assert D.mean(D.Exponential(2.0)) == pytest.approx(0.5)
        assert D.mean(D.Centered(D.Exponential(1.0))) == pytest.approx(0.0, abs=1e-14)

    def test_transform_consistency(self):
        spec = D.Shifted(D.Scaled(D.Poisson(2.0), 3.0), -1.0)
        assert D.mean(spec) == pytest.approx(5.0, rel=1e-12)
        vals = D.sample(spec, seed=4, count=10 ** 5)
        assert abs(vals.mean() - 5.0) < 5 * mc_sd(vals)


class TestMgf:
    def test_exponential_divergence(self):
        with pytest.raises(D.MomentDivergenceError):
            D.mgf(D.Exponential(1.0), 1.0)

    def test_gaussian(self):
        assert D.mgf(D.Gaussian(0, 1), 1.3) == pytest.approx(math.exp(1.3 ** 2 / 2), rel=1e-10)

    def test_rademacher(self):
        assert D.mgf(D.Rademacher(), 2.0) == pytest.approx(math.cosh(2.0), rel=1e-12)


class TestSupportInterval:
    def test_bounded(self):
        assert D.support_interval(D.UniformInterval(-1.0, 2.0)) == (-1.0, 2.0)
        assert D.support_interval(D.Rademacher()) == (-1.0, 1.0)

    def test_unbounded(self):
        lo, hi = D.support_interval(D.Gaussian(0, 1))
        assert lo == -math.inf and hi == math.inf
        assert D.support_interval(D.Exponential(1.0)) == (0.0, math.inf)

    def test_square_transform(self):
        assert D.support_interval(D.SquareOf(D.UniformInterval(-1.0, 2.0))) == (0.0, 4.0)


class TestSerialization:
    def test_roundtrip(self):
        for spec in CATALOGUE:
            assert D.spec_from_dict(D.spec_to_dict(spec)) == spec

    def test_unknown_kind(self):
        with pytest.raises(D.SpecError, match="kind"):
            D.spec_from_dict({"kind": "cauchy"})
