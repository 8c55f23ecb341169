import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evtsup.asymptotics import (PICKANDS_EXACT, Regime, RegimeTag,
                                TailClampWarning, check_abn_ratio,
                                classify_regime, compute_constants,
                                estimate_pickands, normalizers,
                                pickands_constant, tail_approx,
                                tail_prefactor, weibull_normalizers)
from evtsup.rng import stream
from evtsup.suprema import DriftSequence, ModelSpec


def model_of(h, h0, beta, sigma0=0.0, c=1.0, sigma=1.0, p=1.0):
    return ModelSpec(hurst=h, hurst0=h0, beta=beta, sigma0=sigma0,
                     drifts=DriftSequence(c=c, p=p), sigma=sigma)


model_params = st.tuples(
    st.floats(0.1, 0.9), st.floats(0.1, 0.9),
    st.floats(0.05, 1.5), st.floats(0.2, 3.0),
).map(lambda t: model_of(t[0], t[1], max(t[0], t[1]) + t[2], c=t[3]))


class TestConstants:
    def test_brownian_closed_forms(self):
        c = compute_constants(model_of(0.5, 0.5, 1.0, c=1.0))
        assert c.peak_time == pytest.approx(1.0)
        assert c.peak_std == pytest.approx(0.5)
        assert c.curvature == pytest.approx(0.5)
        assert c.tail_power == pytest.approx(1.0)
        assert c.tail_rate == pytest.approx(2.0)
        assert c.local_index == 1.0
        assert c.pickands == 1.0

    def test_brownian_drift_two(self):
        # t0 = H/(c(beta-H)) = 1/2, A = 0.5 * sqrt(1/2), rate 1/(2A^2) = 2c
        c = compute_constants(model_of(0.5, 0.5, 1.0, c=2.0))
        assert c.peak_time == pytest.approx(0.5)
        assert c.peak_std == pytest.approx(0.5 * math.sqrt(0.5))
        assert c.tail_rate == pytest.approx(4.0)

    def test_sigma_scaling_reduces_to_unit(self):
        # sigma*X - c t^beta = sigma*(X - (c/sigma) t^beta)
        a = compute_constants(model_of(0.6, 0.5, 1.1, c=2.0, sigma=2.0), pickands=1.0)
        b = compute_constants(model_of(0.6, 0.5, 1.1, c=1.0, sigma=1.0), pickands=1.0)
        assert a.peak_time == pytest.approx(b.peak_time)
        assert a.peak_std == pytest.approx(b.peak_std)

    @given(model_params)
    @settings(max_examples=40, deadline=None)
    def test_peak_matches_numeric_argmax(self, m):
        c = compute_constants(m, pickands=1.0)
        h, beta, cc = m.hurst, m.beta, m.drifts.c
        t = c.peak_time * np.linspace(0.2, 5.0, 20001)
        sd = t ** h / (1.0 + cc * t ** beta)
        i = np.argmax(sd)
        assert t[i] == pytest.approx(c.peak_time, rel=1e-3)
        assert sd[i] == pytest.approx(c.peak_std, rel=1e-6)

    @given(model_params)
    @settings(max_examples=40, deadline=None)
    def test_curvature_is_second_derivative_of_inverse_std(self, m):
        # B is the quadratic coefficient of 1/sigma_Z(t) around its minimum:
        # 1/sigma_Z(t0 + s) = 1/A + B s^2 / 2 + O(s^3) ... up to the 1/A scale
        c = compute_constants(m, pickands=1.0)
        h, beta, cc = m.hurst, m.beta, m.drifts.c

        def inv_sd(t):
            return (1.0 + cc * t ** beta) / t ** h

        eps = 1e-4 * c.peak_time
        d2 = (inv_sd(c.peak_time + eps) - 2 * inv_sd(c.peak_time)
              + inv_sd(c.peak_time - eps)) / eps ** 2
        assert d2 == pytest.approx(c.curvature, rel=1e-3)

    @given(model_params)
    def test_tail_power_in_open_interval(self, m):
        c = compute_constants(m, pickands=1.0)
        assert 0.0 < c.tail_power < 2.0
        assert c.tail_power == pytest.approx(2.0 * (1.0 - m.hurst / m.beta))

    def test_structure_inverse_power_law(self):
        c = compute_constants(model_of(0.25, 0.5, 1.0), pickands=1.0)
        # K(t) = t0^{-H} t^H  =>  inverse(s) = t0 s^{1/H}
        s = 0.3
        assert c.structure_inverse(s) == pytest.approx(c.peak_time * s ** 4.0)


class TestTail:
    def test_brownian_prefactor_is_one(self):
        c = compute_constants(model_of(0.5, 0.5, 1.0, c=1.0))
        for u in (0.5, 1.0, 3.0, 10.0):
            assert tail_prefactor(u, c) == pytest.approx(1.0, rel=1e-12)

    def test_brownian_tail_exact(self):
        for cc in (0.5, 1.0, 2.0):
            c = compute_constants(model_of(0.5, 0.5, 1.0, c=cc))
            for u in (0.5, 1.0, 2.0):
                assert tail_approx(u, c) == pytest.approx(math.exp(-2 * cc * u), rel=1e-12)

    def test_prefactor_reduces_to_pure_power_law(self):
        # with the self-similar structure function, R(u) collapses to
        # const * u^{-tau (1 - 1/(2H))}; check against that hand expansion
        h = 0.75
        m = model_of(h, 0.5, 1.5, c=1.0)
        c = compute_constants(m, pickands=0.8)
        alpha, tau = 2 * h, c.tail_power
        front = (c.peak_std ** (1.5 - 2.0 / alpha) * 0.8
                 / (2.0 ** (1.0 / alpha) * math.sqrt(c.curvature) * c.peak_time))
        for u in (0.7, 2.7, 15.0):
            expect = front * u ** (-tau * (1.0 - 1.0 / (2.0 * h)))
            assert tail_prefactor(u, c) == pytest.approx(expect, rel=1e-12)

    def test_tail_clamped_with_warning(self):
        # H > 1/2: the prefactor R(u) diverges as u -> 0, so the raw
        # first-order formula exceeds 1 near the origin
        c = compute_constants(model_of(0.75, 0.5, 1.5), pickands=0.8)
        with pytest.warns(TailClampWarning):
            v = tail_approx(1e-9, c)
        assert v < 1.0

    def test_tail_rejects_nonpositive_u(self):
        c = compute_constants(model_of(0.5, 0.5, 1.0))
        with pytest.raises(ValueError):
            tail_prefactor(0.0, c)


class TestNormalizers:
    def test_brownian_values(self):
        m = model_of(0.5, 0.5, 1.0, c=1.0, sigma0=1.0)
        c = compute_constants(m)
        seq = normalizers(1000, c, m)
        assert seq.b_n == pytest.approx(0.5 * math.log(1000), rel=1e-12)
        assert seq.a_n == pytest.approx(0.5, rel=1e-12)
        # e_n = sigma0 t0^{H0} b_n^{H0/beta}
        assert seq.e_n == pytest.approx(math.sqrt(0.5 * math.log(1000)), rel=1e-12)

    def test_generic_weibull_coincides_with_supremum_sequences(self):
        m = model_of(0.7, 0.4, 1.1, c=0.9)
        c = compute_constants(m, pickands=1.0)
        seq = normalizers(5000, c, m)
        assert seq.b_n == pytest.approx(seq.mu_n)
        assert seq.a_n == pytest.approx(seq.nu_n)

    def test_weibull_normalizers_solve_tail_equation(self):
        # n * survival(mu_n) ~ 1 for the pure Weibull tail
        for n in (10 ** 3, 10 ** 6, 10 ** 9):
            mu, nu = weibull_normalizers(n, rate=2.0, power=1.3)
            assert n * math.exp(-2.0 * mu ** 1.3) == pytest.approx(1.0, rel=1e-9)
            assert nu == pytest.approx(mu ** (1.0 - 1.3) / (2.0 * 1.3), rel=1e-9)

    def test_prefactor_correction_improves_tail_equation(self):
        def log_rho(x):
            return -0.7 * math.log(x)

        n = 10 ** 5
        mu0, _ = weibull_normalizers(n, 1.0, 2.0)
        mu1, _ = weibull_normalizers(n, 1.0, 2.0, log_rho)
        resid0 = abs(math.log(n) + log_rho(mu0) - mu0 ** 2)
        resid1 = abs(math.log(n) + log_rho(mu1) - mu1 ** 2)
        assert resid1 < resid0

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            weibull_normalizers(2, 1.0, 1.0)


class TestRegimes:
    @given(st.floats(0.1, 0.9), st.floats(0.1, 0.9), st.floats(0.05, 1.5))
    def test_trichotomy_total(self, h, h0, gap):
        m = model_of(h, h0, max(h, h0) + gap, sigma0=1.0)
        r = classify_regime(m)
        assert r.tag in RegimeTag

    def test_boundary_cases(self):
        # beta exactly 2H - H0
        m = model_of(0.75, 0.5, 1.0, sigma0=1.0)
        r = classify_regime(m)
        assert r.tag is RegimeTag.MIXTURE_LIMIT
        assert r.mixture_coeff == pytest.approx(1.0 * 1.0 * 1.0 / 0.75)
        assert classify_regime(model_of(0.5, 0.5, 1.0)).tag is RegimeTag.NORMAL_LIMIT
        assert classify_regime(model_of(0.8, 0.3, 1.0)).tag is RegimeTag.ERLANG_LOG_LIMIT

    def test_tolerance_window(self):
        m = model_of(0.75, 0.5, 1.0 + 1e-13, sigma0=1.0)
        assert classify_regime(m).tag is RegimeTag.MIXTURE_LIMIT
        m2 = model_of(0.75, 0.5, 1.0 + 1e-9, sigma0=1.0)
        assert classify_regime(m2).tag is RegimeTag.NORMAL_LIMIT

    def test_abn_ratio_limits(self):
        ns = [10 ** 3, 10 ** 5, 10 ** 8, 10 ** 12]
        # strongly dependent: ratio diverges
        r1 = check_abn_ratio(model_of(0.5, 0.5, 1.0, sigma0=1.0), ns)
        assert np.all(np.diff(r1) > 0)
        # weakly dependent: ratio vanishes
        r2 = check_abn_ratio(model_of(0.8, 0.3, 1.0, sigma0=1.0), ns)
        assert np.all(np.diff(r2) < 0)
        # boundary: converges to tail_power * tail_rate
        m = model_of(0.75, 0.5, 1.0, sigma0=1.0)
        c = compute_constants(m, pickands=1.0)
        r3 = check_abn_ratio(m, [10 ** 6, 10 ** 10, 10 ** 14], consts=c)
        target = c.tail_power * c.tail_rate
        assert abs(r3[-1] - target) < abs(r3[0] - target)
        assert r3[-1] == pytest.approx(target, rel=0.05)


class TestPickands:
    def test_exact_values(self):
        assert pickands_constant(1.0) == 1.0
        assert pickands_constant(2.0) == pytest.approx(1.0 / math.sqrt(math.pi))
        assert PICKANDS_EXACT[2.0] == pytest.approx(0.5641895835477563)

    def test_estimator_validation(self):
        with pytest.raises(ValueError):
            estimate_pickands(0.0)
        with pytest.raises(ValueError):
            estimate_pickands(2.5)
        with pytest.raises(ValueError):
            estimate_pickands(1.0, reps=10)
        with pytest.raises(ValueError):
            estimate_pickands(1.0, n_points=101, reps=200)
        with pytest.raises(ValueError):
            estimate_pickands(1.0, method="bogus", reps=200)

    def test_degenerate_smooth_case_is_exact(self):
        # alpha = 2: sup_t(sqrt(2) t N - t^2) integrates in closed form
        est, se = estimate_pickands(2.0, T=16.0, n_points=2 ** 10, reps=2000,
                                    rng=stream(31, 0, 1))
        assert se < 1e-3
        assert est == pytest.approx(1.0 / math.sqrt(math.pi), rel=0.01)

    def test_ratio_estimator_brownian(self):
        est, se = estimate_pickands(1.0, T=16.0, n_points=2 ** 11, reps=3000,
                                    rng=stream(31, 0, 2))
        assert est == pytest.approx(1.0, abs=0.04)

    def test_direct_estimator_small_window(self):
        # the naive average exp(sup)/T is only usable for tiny windows
        est, _ = estimate_pickands(1.0, T=1.0, n_points=2 ** 8, reps=5000,
                                   rng=stream(31, 0, 3), method="direct")
        assert 0.5 < est < 3.0

    def test_cached_constant_deterministic(self):
        a = pickands_constant(1.5)
        b = pickands_constant(1.5)
        assert a == b
        assert 0.5 < a < 1.0  # between the alpha = 2 and alpha = 1 values
