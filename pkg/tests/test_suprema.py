import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evtsup.process_sim import GridSpec, SamplePath, sample_fbm_unit
from evtsup.rng import stream
from evtsup.suprema import (DriftSequence, ModelSpec, TopK,
                            batch_order_statistics, kth_heap_vs_sort_oracle,
                            optimal_time_scale, supremum_on_grid,
                            truncation_horizon)


def bm_model(c=1.0, sigma0=0.0, p=1.0):
    return ModelSpec(hurst=0.5, hurst0=0.5, beta=1.0, sigma0=sigma0,
                     drifts=DriftSequence(c=c, p=p))


class TestTopK:
    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200),
           st.integers(1, 20))
    def test_heap_matches_sort(self, values, k):
        values = np.asarray(values)
        k = min(k, values.size)
        assert kth_heap_vs_sort_oracle(values, k)

    def test_streaming_matches_one_shot(self):
        rng = stream(21, 0, 1)
        values = rng.standard_normal(1000)
        a, b = TopK(5), TopK(5)
        a.push_many(values)
        for chunk in np.array_split(values, 13):
            b.push_many(chunk)
        assert np.array_equal(a.stats(), b.stats())

    def test_duplicates_kept(self):
        t = TopK(3)
        t.push_many(np.array([2.0, 2.0, 2.0, 1.0]))
        assert np.array_equal(t.stats(), [2.0, 2.0, 2.0])

    def test_k_validation(self):
        with pytest.raises(ValueError):
            TopK(0)
        with pytest.raises(ValueError):
            kth_heap_vs_sort_oracle(np.arange(3.0), 5)


class TestDriftSequence:
    def test_coefficients_split(self):
        d = DriftSequence(c=2.0, p=0.5, elevated_factor=1.5)
        c = d.coefficients(10)
        assert np.array_equal(c[:5], np.full(5, 2.0))
        assert np.array_equal(c[5:], np.full(5, 3.0))
        assert d.n_minimal(10) == 5

    @given(st.floats(0.01, 1.0), st.integers(1, 1000))
    def test_n_minimal_is_ceil(self, p, n):
        assert DriftSequence(c=1.0, p=p).n_minimal(n) == min(n, math.ceil(p * n))

    def test_validation(self):
        with pytest.raises(ValueError):
            DriftSequence(c=0.0)
        with pytest.raises(ValueError):
            DriftSequence(c=1.0, p=1.5)
        with pytest.raises(ValueError):
            DriftSequence(c=1.0, p=0.5, elevated_factor=1.0)


class TestModelSpec:
    def test_beta_must_dominate_hursts(self):
        with pytest.raises(ValueError):
            ModelSpec(hurst=0.8, hurst0=0.3, beta=0.7, sigma0=0.0,
                      drifts=DriftSequence(c=1.0))

    def test_scale_validation(self):
        with pytest.raises(ValueError):
            ModelSpec(hurst=0.5, hurst0=0.5, beta=1.0, sigma0=-0.1,
                      drifts=DriftSequence(c=1.0))
        with pytest.raises(ValueError):
            ModelSpec(hurst=0.5, hurst0=0.5, beta=1.0, sigma0=0.0,
                      drifts=DriftSequence(c=1.0), sigma=0.0)


def test_optimal_time_scale_brownian():
    assert optimal_time_scale(bm_model(c=1.0)) == pytest.approx(1.0)
    assert optimal_time_scale(bm_model(c=2.0)) == pytest.approx(0.5)


def test_optimal_time_scale_matches_numeric_argmax():
    m = ModelSpec(hurst=0.7, hurst0=0.5, beta=1.2, sigma0=0.0,
                  drifts=DriftSequence(c=0.8))
    t = np.linspace(1e-4, 20, 400001)
    sd = t ** m.hurst / (1.0 + m.drifts.c * t ** m.beta)
    assert optimal_time_scale(m) == pytest.approx(t[np.argmax(sd)], rel=1e-3)


def test_truncation_horizon_scaling():
    m = bm_model(c=1.0)
    assert truncation_horizon(m, 4.0, g_mult=3.0) == pytest.approx(12.0)
    with pytest.raises(ValueError):
        truncation_horizon(m, 0.0)


def test_supremum_on_grid_agrees_with_direct_max():
    m = bm_model(c=1.0, sigma0=0.5)
    grid = GridSpec(64, 2.0)
    idio = SamplePath(stream(22, 0, 1).standard_normal(65) * 0.1, grid, 0.5)
    idio = SamplePath(np.concatenate([[0.0], idio.values[1:]]), grid, 0.5)
    common = SamplePath(np.concatenate([[0.0], stream(22, 0, 2).standard_normal(64) * 0.1]),
                        grid, 0.5)
    got = supremum_on_grid(idio, common, m, c_i=1.0)
    t = grid.times
    want = (idio.values + 0.5 * common.values - t).max()
    assert got == pytest.approx(want)


def test_supremum_on_grid_validates_consistency():
    m = bm_model()
    g1, g2 = GridSpec(16, 1.0), GridSpec(16, 2.0)
    p1 = SamplePath(np.zeros(17), g1, 0.5)
    p2 = SamplePath(np.zeros(17), g2, 0.5)
    with pytest.raises(ValueError):
        supremum_on_grid(p1, p2, m, 1.0)
    wrong_h = SamplePath(np.zeros(17), g1, 0.7)
    with pytest.raises(ValueError):
        supremum_on_grid(wrong_h, p1, m, 1.0)


def test_batch_with_override_reproduces_sorted_tail():
    q = stream(23, 0, 1).standard_normal(500)
    batch = batch_order_statistics(bm_model(), n=500, k=4, grid=GridSpec(16),
                                   level=1.0, suprema_override=q)
    assert np.array_equal(batch.kth_stats, np.sort(q)[::-1][:4])
    assert batch.exceed_count == int((q > 1.0).sum())


def test_batch_simulation_basic_properties():
    grid = GridSpec(128, 4.0)
    batch = batch_order_statistics(bm_model(c=1.0), n=300, k=3, grid=grid,
                                   rng=stream(24, 0, 1), retain_q=True)
    assert batch.q_values.shape == (300,)
    assert np.all(batch.q_values >= 0.0)  # sup includes t = 0
    assert np.array_equal(batch.kth_stats, np.sort(batch.q_values)[::-1][:3])


def test_batch_common_factor_induces_dependence():
    grid = GridSpec(64, 4.0)
    rho = {}
    for sigma0 in (0.0, 2.0):
        m = bm_model(c=1.0, sigma0=sigma0)
        qs = np.stack([
            batch_order_statistics(m, n=64, k=1, grid=grid,
                                   rng=stream(25, rep, int(sigma0)),
                                   retain_q=True).q_values
            for rep in range(200)
        ])
        half = qs.shape[1] // 2
        a = qs[:, :half].mean(axis=1)
        b = qs[:, half:].mean(axis=1)
        rho[sigma0] = np.corrcoef(a, b)[0, 1]
    assert rho[0.0] < 0.3
    assert rho[2.0] > 0.6


def test_batch_validation():
    with pytest.raises(ValueError):
        batch_order_statistics(bm_model(), n=5, k=5, grid=GridSpec(8),
                               suprema_override=np.zeros(5))
    with pytest.raises(ValueError):
        batch_order_statistics(bm_model(), n=10, k=1, grid=GridSpec(8))
    with pytest.raises(ValueError):
        batch_order_statistics(bm_model(), n=10, k=1, grid=GridSpec(8),
                               suprema_override=np.zeros(7))
