"""Sample-path synthesis for the fractional Brownian motion family.

Paths are generated on a uniform grid over [0, 1] by circulant embedding
of fractional Gaussian noise (FFT, O(N log N)) and mapped to arbitrary
horizons by self-similar rescaling.  If the embedding is not
nonnegative-definite beyond a small tolerance, generation falls back to
a dense covariance factorization, which is exact but O(N^3).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft

EIG_TOL = 1e-10


class SynthesisError(RuntimeError):
    """Raised when no exact synthesis method applies."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid with n_points cells; physical times are horizon * j / n_points."""

    n_points: int
    horizon: float = 1.0

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points}")
        if not self.horizon > 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")

    @property
    def times(self) -> np.ndarray:
        return self.horizon * np.arange(self.n_points + 1) / self.n_points


@dataclass(frozen=True)
class SamplePath:
    """Process values at grid times; values[0] is always 0."""

    values: np.ndarray
    grid: GridSpec
    hurst: float

    def __post_init__(self):
        if len(self.values) != self.grid.n_points + 1:
            raise ValueError("values length must equal n_points + 1")


@dataclass(frozen=True)
class FgnCovariance:
    """Autocovariance gamma(k) of unit-spacing fractional Gaussian noise."""

    hurst: float
    lags: np.ndarray


def _check_hurst(hurst: float) -> None:
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"hurst must lie in (0, 1), got {hurst}")


def fgn_covariance(hurst: float, max_lag: int) -> FgnCovariance:
    """gamma(k) = 0.5 * (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) for k = 0..max_lag."""
    _check_hurst(hurst)
    if max_lag < 0:
        raise ValueError("max_lag must be nonnegative")
    k = np.arange(max_lag + 1, dtype=float)
    two_h = 2.0 * hurst
    gamma = 0.5 * (np.abs(k + 1) ** two_h - 2 * np.abs(k) ** two_h + np.abs(k - 1) ** two_h)
    return FgnCovariance(hurst=hurst, lags=gamma)


class FbmSampler:
    """Exact sampler of standard fBm on the unit grid.

    The embedding (or factorization) is computed once at construction and
    is immutable afterwards; the sampler may be shared read-only across
    threads.  Randomness always comes from an explicit generator.
    """

    def __init__(self, hurst: float, n_points: int, *, eig_tol: float = EIG_TOL,
                 method: str | None = None):
        _check_hurst(hurst)
        if n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {n_points}")
        self.hurst = hurst
        self.n_points = n_points
        self._scale = float(n_points) ** (-hurst)

        if method not in (None, "circulant", "cholesky"):
            raise ValueError(f"unknown method: {method}")

        if method in (None, "circulant"):
            gamma = fgn_covariance(hurst, n_points).lags
            m = 2 * n_points
            row = np.empty(m)
            row[: n_points + 1] = gamma
            row[n_points + 1:] = gamma[1:n_points][::-1]
            eig = np.fft.fft(row).real
            min_eig = eig.min()
            if min_eig >= -eig_tol:
                np.clip(eig, 0.0, None, out=eig)
                self.method = "circulant"
                self._sqrt_eig = np.sqrt(eig)
                return
            if method == "circulant":
                raise SynthesisError(
                    f"circulant embedding has eigenvalue {min_eig:.3e} < -{eig_tol:.1e}"
                )

        # Dense route: factor the fBm covariance at grid times j/N, j >= 1.
        t = np.arange(1, n_points + 1) / n_points
        cov = 0.5 * (t[:, None] ** (2 * hurst) + t[None, :] ** (2 * hurst)
                     - np.abs(t[:, None] - t[None, :]) ** (2 * hurst))
        try:
            self._chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise SynthesisError("fBm covariance factorization failed") from exc
        self.method = "cholesky"

    @property
    def normals_per_path(self) -> int:
        return 2 * self.n_points if self.method == "circulant" else self.n_points

    def sample_normals(self, rng: np.random.Generator, count: int = 1) -> np.ndarray:
        """Draw the (count, normals_per_path) standard-normal block for count paths."""
        return rng.standard_normal((count, self.normals_per_path))

    def paths_from_normals(self, normals: np.ndarray) -> np.ndarray:
        """Deterministic map from normal draws to fBm values, shape (B, n_points + 1)."""
        normals = np.atleast_2d(normals)
        if normals.shape[1] != self.normals_per_path:
            raise ValueError(
                f"expected {self.normals_per_path} normals per path, got {normals.shape[1]}"
            )
        n = self.n_points
        if self.method == "circulant":
            m = 2 * n
            z = np.empty((normals.shape[0], m), dtype=complex)
            z[:, 0] = normals[:, 0]
            z[:, n] = normals[:, 1]
            z[:, 1:n] = (normals[:, 2::2] + 1j * normals[:, 3::2]) / np.sqrt(2.0)
            z[:, n + 1:] = np.conj(z[:, 1:n])[:, ::-1]
            z *= self._sqrt_eig
            fgn = np.sqrt(m) * scipy.fft.ifft(z, axis=1).real[:, :n]
            out = np.empty((normals.shape[0], n + 1))
            out[:, 0] = 0.0
            np.cumsum(fgn, axis=1, out=out[:, 1:])
            out[:, 1:] *= self._scale
            return out
        out = np.empty((normals.shape[0], n + 1))
        out[:, 0] = 0.0
        out[:, 1:] = normals @ self._chol.T
        return out

    def sample(self, rng: np.random.Generator) -> SamplePath:
        values = self.paths_from_normals(self.sample_normals(rng))[0]
        return SamplePath(values=values, grid=GridSpec(self.n_points), hurst=self.hurst)

    def sample_values(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return self.paths_from_normals(self.sample_normals(rng, count))


@lru_cache(maxsize=32)
def get_sampler(hurst: float, n_points: int, method: str | None = None) -> FbmSampler:
    return FbmSampler(hurst, n_points, method=method)


def sample_fbm_unit(hurst: float, n_points: int, rng: np.random.Generator) -> SamplePath:
    """One standard fBm path on [0, 1] with n_points grid cells."""
    return get_sampler(hurst, n_points).sample(rng)


def rescale_self_similar(path: SamplePath, horizon: float) -> SamplePath:
    """Map a unit-interval path to [0, horizon] using X(Ts) =_d T^H X(s)."""
    if not horizon > 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if path.grid.horizon != 1.0:
        raise ValueError("rescale expects a path on [0, 1]")
    scale = horizon ** path.hurst
    return SamplePath(
        values=path.values * scale,
        grid=GridSpec(path.grid.n_points, horizon),
        hurst=path.hurst,
    )


def refine_path(path: SamplePath, rng: np.random.Generator) -> SamplePath:
    """Conditionally double the grid of a unit-interval path.

    The returned path agrees with the input at the shared (coarse) grid
    points, so its grid supremum can only increase.  Dense factorization;
    intended for diagnostics at moderate grid sizes.
    """
    if path.grid.horizon != 1.0:
        raise ValueError("refine expects a path on [0, 1]")
    n = path.grid.n_points
    h = path.hurst
    n_fine = 2 * n
    t_fine = np.arange(1, n_fine + 1) / n_fine
    # Order: coarse points (even fine indices) first, then midpoints.
    coarse_idx = np.arange(2, n_fine + 1, 2) - 1
    mid_idx = np.arange(1, n_fine, 2) - 1
    order = np.concatenate([coarse_idx, mid_idx])
    t = t_fine[order]
    cov = 0.5 * (t[:, None] ** (2 * h) + t[None, :] ** (2 * h)
                 - np.abs(t[:, None] - t[None, :]) ** (2 * h))
    chol = np.linalg.cholesky(cov)
    w = np.empty(n_fine)
    # Reproduce the coarse values, then draw the midpoints conditionally.
    w[:n] = np.linalg.solve(chol[:n, :n], path.values[1:])
    w[n:] = rng.standard_normal(n)
    vals_ordered = chol @ w
    values = np.empty(n_fine + 1)
    values[0] = 0.0
    # Snap to the input values exactly (the solve reproduces them only to
    # round-off), so the grid supremum is monotone under refinement.
    values[1 + coarse_idx] = path.values[1:]
    values[1 + mid_idx] = vals_ordered[n:]
    return SamplePath(values=values, grid=GridSpec(n_fine), hurst=h)
