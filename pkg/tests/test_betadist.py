import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, stats

from betapoly.betadist import (
    Family,
    Model,
    Side,
    beta_model,
    beta_prime_model,
    cdf1,
    density,
    halfspace_content,
    log_norm_const_ratio,
    norm_const,
    projected_line_param,
    projected_model,
    sample_point,
    sample_points,
    slab1,
    slab_content,
    sphere_model,
    stream,
)
from betapoly.specfun import sphere_surface


def radial_mass(model: Model) -> float:
    c, d, b = norm_const(model), model.dim, model.beta
    if model.family is Family.BETA:
        # (1 - r^2)^b = (1 - r)^b (1 + r)^b; the singular factor goes into the weight
        f = lambda r: c * sphere_surface(d) * r ** (d - 1) * (1 + r) ** b  # noqa: E731
        return integrate.quad(f, 0, 1, weight="alg", wvar=(0.0, b), epsabs=1e-13, epsrel=1e-13)[0]
    f = lambda r: c * sphere_surface(d) * r ** (d - 1) * (1 + r * r) ** (-b)  # noqa: E731
    return integrate.quad(f, 0, np.inf, limit=200, epsabs=1e-13, epsrel=1e-13)[0]


class TestModel:
    def test_validation(self):
        with pytest.raises(ValueError):
            beta_model(2, -1.0)
        with pytest.raises(ValueError):
            beta_prime_model(3, 1.5)
        with pytest.raises(ValueError):
            Model(Family.SPHERE, 2, 0.0)
        with pytest.raises(ValueError):
            Model(Family.BETA, 0, 0.0)
        with pytest.raises(ValueError):
            Model(Family.BETA, 2)

    def test_str(self):
        assert str(beta_model(2, 0)) == "beta(d=2, beta=0)"
        assert str(sphere_model(3)) == "sphere(d=3)"
        assert str(beta_prime_model(3, 2.5)) == "betaprime(d=3, beta=2.5)"

    def test_uniform_ball_constant(self):
        assert norm_const(beta_model(3, 0.0)) == pytest.approx(3 / (4 * math.pi), rel=1e-15)
        assert norm_const(beta_model(2, 0.0)) == pytest.approx(1 / math.pi, rel=1e-15)

    @pytest.mark.parametrize(
        "model",
        [beta_model(1, -0.5), beta_model(2, 0.0), beta_model(3, 2.5), beta_model(4, -0.9),
         beta_prime_model(1, 1.0), beta_prime_model(2, 1.5), beta_prime_model(3, 4.0)],
        ids=str,
    )
    def test_density_integrates_to_one(self, model):
        assert radial_mass(model) == pytest.approx(1.0, abs=1e-9)

    def test_density_values(self):
        m = beta_model(2, 1.0)
        assert density(m, [0.0, 0.0]) == pytest.approx(norm_const(m))
        assert density(m, [0.6, 0.8]) == 0.0
        assert density(m, [[2.0, 0.0], [0.5, 0.0]])[1] == pytest.approx(norm_const(m) * 0.75)
        with pytest.raises(ValueError):
            density(sphere_model(2), [1.0, 0.0])
        with pytest.raises(ValueError):
            density(m, [0.0, 0.0, 0.0])

    def test_norm_ratio_finite_at_sphere_limit(self):
        for d in (2, 3, 5):
            r = log_norm_const_ratio(Family.BETA, d, -1.0)
            assert math.isfinite(r)
            assert log_norm_const_ratio(Family.BETA, d, -1.0 + 1e-9) == pytest.approx(r, abs=1e-8)


class TestLineLaws:
    @given(st.floats(-0.99, 30.0), st.floats(-1.0, 1.0))
    def test_beta_cdf_matches_scipy(self, beta, h):
        want = stats.beta(beta + 1, beta + 1).cdf((1 + h) / 2)
        assert cdf1(Family.BETA, beta, h) == pytest.approx(want, abs=1e-12)

    @given(st.floats(0.55, 30.0), st.floats(-50.0, 50.0))
    def test_beta_prime_cdf_is_scaled_student_t(self, beta, h):
        # one coordinate of the beta-prime law is t with 2 beta - 1 degrees of freedom, scaled
        nu = 2 * beta - 1
        want = stats.t(nu).cdf(h * math.sqrt(nu))
        assert cdf1(Family.BETA_PRIME, beta, h) == pytest.approx(want, abs=1e-11)

    @given(st.floats(-0.9, 40.0), st.floats(0.0, 1.0))
    def test_beta_symmetry(self, beta, h):
        assert cdf1(Family.BETA, beta, h) + cdf1(Family.BETA, beta, -h) == pytest.approx(1.0, abs=1e-13)

    @given(st.floats(0.55, 40.0), st.floats(0.0, 1e3))
    def test_beta_prime_symmetry(self, beta, h):
        s = cdf1(Family.BETA_PRIME, beta, h) + cdf1(Family.BETA_PRIME, beta, -h)
        assert s == pytest.approx(1.0, abs=1e-13)

    def test_cdf_against_direct_quadrature(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            beta, h = rng.uniform(-0.8, 6.0), rng.uniform(-1.0, 1.0)
            c = math.gamma(beta + 1.5) / (math.sqrt(math.pi) * math.gamma(beta + 1))
            # weight (t+1)^beta (h-t)^0 on [-1, h] leaves the smooth factor (1-t)^beta
            f = lambda t: c * (1 - t) ** beta  # noqa: E731
            want = integrate.quad(f, -1, h, weight="alg", wvar=(beta, 0.0), epsabs=1e-14, epsrel=1e-13)[0]
            assert cdf1(Family.BETA, beta, h) == pytest.approx(want, abs=1e-10)
        for _ in range(25):
            beta, h = rng.uniform(0.6, 8.0), rng.uniform(-20.0, 20.0)
            c = math.gamma(beta) / (math.sqrt(math.pi) * math.gamma(beta - 0.5))
            f = lambda t: c * (1 + t * t) ** (-beta)  # noqa: E731
            want = 0.5 + math.copysign(integrate.quad(f, 0, abs(h), epsabs=1e-14, epsrel=1e-13, limit=200)[0], h)
            assert cdf1(Family.BETA_PRIME, beta, h) == pytest.approx(want, abs=1e-10)

    @given(st.floats(-0.9, 10.0))
    def test_cdf_monotone(self, beta):
        v = cdf1(Family.BETA, beta, np.linspace(-1, 1, 401))
        assert np.all(np.diff(v) >= 0)

    @given(st.floats(0.6, 10.0), st.floats(0.0, 1e6))
    def test_slab_equals_cdf_difference(self, beta, h):
        for fam in (Family.BETA, Family.BETA_PRIME):
            want = cdf1(fam, beta, h) - cdf1(fam, beta, -h)
            assert slab1(fam, beta, h) == pytest.approx(want, abs=2e-14)

    def test_small_slab_keeps_relative_accuracy(self):
        h = 1e-9
        # density at 0 of the uniform (beta=0) line law on [-1, 1] is 1/2
        assert slab1(Family.BETA, 0.0, h) == pytest.approx(h, rel=1e-12)

    def test_limits(self):
        assert cdf1(Family.BETA, 0.5, -1.0) == 0.0
        assert cdf1(Family.BETA, 0.5, 2.0) == 1.0
        assert cdf1(Family.BETA_PRIME, 2.0, np.inf) == 1.0
        assert cdf1(Family.BETA_PRIME, 2.0, -np.inf) == 0.0
        assert cdf1(Family.BETA, 0.0, 0.5) == pytest.approx(0.75)
        v = cdf1(Family.BETA, 1.0, np.array([-0.5, 0.0, 0.5]))
        assert v.shape == (3,) and v[1] == pytest.approx(0.5)

    def test_bad_line_parameters(self):
        with pytest.raises(ValueError):
            cdf1(Family.BETA_PRIME, 0.5, 0.0)
        with pytest.raises(ValueError):
            cdf1(Family.SPHERE, 0.0, 0.0)
        with pytest.raises(ValueError):
            slab_content(beta_model(2, 0.0), -0.1)


class TestProjection:
    def test_parameters(self):
        assert projected_model(beta_model(5, 1.0), 2) == beta_model(2, 2.5)
        assert projected_model(beta_prime_model(5, 4.0), 2) == beta_prime_model(2, 2.5)
        assert projected_model(sphere_model(4), 1) == beta_model(1, 0.5)
        assert projected_model(sphere_model(3), 3) == sphere_model(3)
        assert projected_line_param(sphere_model(2)) == (Family.BETA, -0.5)
        with pytest.raises(ValueError):
            projected_model(beta_model(3, 0.0), 4)

    def test_sphere_is_beta_limit(self):
        # the projected sphere law is the beta -> -1 limit of the projected beta law
        h = 0.3
        a = halfspace_content(sphere_model(4), h)
        b = halfspace_content(beta_model(4, -1 + 1e-10), h)
        assert a == pytest.approx(b, abs=1e-8)

    def test_archimedes(self):
        # a coordinate of the uniform point on S^2 is uniform on [-1, 1]
        for h in (-0.7, 0.0, 0.4):
            assert halfspace_content(sphere_model(3), h) == pytest.approx((1 + h) / 2, abs=1e-15)
        assert halfspace_content(sphere_model(3), 0.4, Side.ABOVE) == pytest.approx(0.3, abs=1e-15)


class TestSampling:
    def test_determinism(self):
        a = sample_points(beta_model(3, 0.5), 50, stream(42, 3))
        b = sample_points(beta_model(3, 0.5), 50, stream(42, 3))
        c = sample_points(beta_model(3, 0.5), 50, stream(42, 4))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)
        assert sample_point(beta_model(3, 0.5), stream(1)).shape == (3,)

    def test_stream_matches_seed_sequence_spawn(self):
        child = np.random.SeedSequence(7).spawn(3)[2]
        want = np.random.Generator(np.random.PCG64(child)).random(5)
        assert np.array_equal(stream(7, 2).random(5), want)

    def test_sphere_points_have_unit_norm(self):
        x = sample_points(sphere_model(4), 1000, stream(0))
        assert np.allclose(np.linalg.norm(x, axis=1), 1.0, atol=1e-14)

    @pytest.mark.parametrize(
        "model",
        [beta_model(2, 0.0), beta_model(3, -0.7), beta_model(4, 3.0), beta_prime_model(3, 2.0),
         beta_prime_model(2, 1.2), sphere_model(3), sphere_model(5)],
        ids=str,
    )
    def test_coordinate_law(self, model):
        # one coordinate of a sample must follow the projected line law
        x = sample_points(model, 20000, stream(11))[:, 0]
        fam, b = projected_line_param(model)
        ks = stats.kstest(x, lambda h: cdf1(fam, b, h))
        assert ks.pvalue > 1e-4

    @pytest.mark.parametrize("model", [beta_model(3, 0.0), beta_model(2, 1.5), beta_prime_model(3, 2.5)], ids=str)
    def test_radial_law(self, model):
        r2 = np.sum(sample_points(model, 20000, stream(5)) ** 2, axis=1)
        d = model.dim
        if model.family is Family.BETA:
            ks = stats.kstest(r2, stats.beta(d / 2, model.beta + 1).cdf)
        else:
            ks = stats.kstest(r2 / (1 + r2), stats.beta(d / 2, model.beta - d / 2).cdf)
        assert ks.pvalue > 1e-4

    def test_rotation_invariance(self):
        x = sample_points(beta_model(3, 0.0), 40000, stream(9))
        u = np.array([1.0, 2.0, -2.0]) / 3.0
        ks = stats.ks_2samp(x @ u, x[:, 2])
        assert ks.pvalue > 1e-4

    def test_halfspace_content_against_sampling(self):
        model = beta_prime_model(3, 2.25)
        x = sample_points(model, 200000, stream(2))[:, 1]
        for h in (-1.0, 0.3, 2.0):
            p = halfspace_content(model, h)
            se = math.sqrt(p * (1 - p) / len(x))
            assert abs(np.mean(x <= h) - p) < 4.5 * se
