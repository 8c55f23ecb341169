"""Suprema of trended Gaussian paths and streaming k-th order statistics.

Each Q_i is the grid maximum of sigma * X_i(t) + sigma0 * X(t) - c_i t^beta
over a truncated horizon, with one common path X shared by the whole
batch.  The batch keeps only a bounded top-k structure and an exceedance
counter, so memory is O(grid) + O(k) regardless of n.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .process_sim import GridSpec, SamplePath, get_sampler, rescale_self_similar

CHUNK = 256


@dataclass(frozen=True)
class DriftSequence:
    """Drift coefficients c_i: the first ceil(p*n) are minimal (= c), the rest elevated."""

    c: float
    p: float = 1.0
    elevated_factor: float = 1.5

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"minimal drift must be positive, got {self.c}")
        if not 0.0 < self.p <= 1.0:
            raise ValueError(f"p must lie in (0, 1], got {self.p}")
        if self.p < 1.0 and not self.elevated_factor > 1.0:
            raise ValueError("elevated_factor must exceed 1 when p < 1")
        if self.elevated_factor < 1.0:
            raise ValueError("elevated_factor must be >= 1")

    def n_minimal(self, n: int) -> int:
        return min(n, math.ceil(self.p * n))

    def coefficients(self, n: int) -> np.ndarray:
        out = np.full(n, self.c * self.elevated_factor)
        out[: self.n_minimal(n)] = self.c
        return out


@dataclass(frozen=True)
class ModelSpec:
    """Parameters of the sequence Q_i; requires beta > max(hurst, hurst0)."""

    hurst: float
    hurst0: float
    beta: float
    sigma0: float
    drifts: DriftSequence
    sigma: float = 1.0

    def __post_init__(self):
        for name, h in (("hurst", self.hurst), ("hurst0", self.hurst0)):
            if not 0.0 < h < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {h}")
        if not self.beta > max(self.hurst, self.hurst0):
            raise ValueError(
                f"beta must exceed max(hurst, hurst0): beta={self.beta}, "
                f"hurst={self.hurst}, hurst0={self.hurst0}"
            )
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.sigma0 < 0:
            raise ValueError(f"sigma0 must be nonnegative, got {self.sigma0}")


@dataclass
class SupremaBatch:
    n: int
    k: int
    kth_stats: np.ndarray
    exceed_count: int = 0
    q_values: np.ndarray | None = None


class TopK:
    """Bounded min-heap keeping the k largest values seen so far."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        self.k = k
        self._heap: list[float] = []

    def push(self, value: float) -> None:
        if len(self._heap) < self.k:
            heapq.heappush(self._heap, value)
        elif value > self._heap[0]:
            heapq.heapreplace(self._heap, value)

    def push_many(self, values: np.ndarray) -> None:
        values = np.asarray(values).ravel()
        if len(self._heap) == self.k and len(values) > self.k:
            values = values[values > self._heap[0]]
        for v in values:
            self.push(float(v))

    def stats(self) -> np.ndarray:
        """Current order statistics, largest first."""
        return np.array(sorted(self._heap, reverse=True))


def kth_heap_vs_sort_oracle(values: np.ndarray, k: int) -> bool:
    """True iff the bounded heap reproduces the sort-based top-k exactly."""
    values = np.asarray(values, dtype=float)
    if k > values.size:
        raise ValueError("k exceeds number of values")
    top = TopK(k)
    top.push_many(values)
    expected = np.sort(values)[::-1][:k]
    return np.array_equal(top.stats(), expected)


def optimal_time_scale(model: ModelSpec) -> float:
    """Location t0 of the variance maximum of X_H(t) / (1 + (c/sigma) t^beta)."""
    h, b = model.hurst, model.beta
    c = model.drifts.c / model.sigma
    return (h / (c * (b - h))) ** (1.0 / b)


def truncation_horizon(model: ModelSpec, b_n: float, g_mult: float = 3.0) -> float:
    """Simulation horizon g_mult * t0 * b_n^{1/beta} covering the supremum location."""
    if not b_n > 0:
        raise ValueError(f"b_n must be positive, got {b_n}")
    return g_mult * optimal_time_scale(model) * (b_n / model.sigma) ** (1.0 / model.beta)


def supremum_on_grid(idio: SamplePath, common: SamplePath, model: ModelSpec,
                     c_i: float) -> float:
    """Grid maximum of sigma*idio + sigma0*common - c_i t^beta (lower-biased)."""
    if idio.grid != common.grid:
        raise ValueError("idiosyncratic and common paths must share a grid")
    if idio.hurst != model.hurst or common.hurst != model.hurst0:
        raise ValueError("path Hurst indices do not match the model")
    t = idio.grid.times
    y = model.sigma * idio.values + model.sigma0 * common.values - c_i * t ** model.beta
    return float(y.max())


def batch_order_statistics(model: ModelSpec, n: int, k: int, grid: GridSpec,
                           level: float | None = None,
                           rng: np.random.Generator | None = None,
                           retain_q: bool = False,
                           suprema_override: np.ndarray | None = None) -> SupremaBatch:
    """One batch of n suprema sharing a common path, streamed into a top-k heap.

    suprema_override bypasses path simulation with given Q values (testing).
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")

    top = TopK(k)
    count = 0
    kept: list[np.ndarray] = []

    def consume(q: np.ndarray) -> None:
        nonlocal count
        top.push_many(q)
        if level is not None:
            count += int((q > level).sum())
        if retain_q:
            kept.append(q)

    if suprema_override is not None:
        q = np.asarray(suprema_override, dtype=float)
        if q.size != n:
            raise ValueError("suprema_override must have length n")
        consume(q)
    else:
        if rng is None:
            raise ValueError("rng is required unless suprema_override is given")
        horizon = grid.horizon
        idio_sampler = get_sampler(model.hurst, grid.n_points)
        t_beta = grid.times ** model.beta
        if model.sigma0 > 0:
            common = rescale_self_similar(
                get_sampler(model.hurst0, grid.n_points).sample(rng), horizon)
            base = model.sigma0 * common.values
        else:
            base = np.zeros(grid.n_points + 1)
        coeffs = model.drifts.coefficients(n)
        idio_scale = model.sigma * horizon ** model.hurst
        for start in range(0, n, CHUNK):
            c_chunk = coeffs[start:start + CHUNK]
            vals = idio_sampler.sample_values(rng, len(c_chunk))
            y = idio_scale * vals + base - c_chunk[:, None] * t_beta
            consume(y.max(axis=1))

    return SupremaBatch(
        n=n, k=k, kth_stats=top.stats(), exceed_count=count,
        q_values=np.concatenate(kept) if retain_q else None,
    )
