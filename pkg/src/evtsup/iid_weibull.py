"""IID samplers with generalized Weibull-like right tails.

Survival rho(x) * exp(-rate * x^power) beyond a derived left edge
x_star, with an atom at x_star absorbing the remaining mass (the limit
theorems under test are insensitive to the left tail, and bounded-below
support keeps every negative moment condition trivially satisfied).
These give fast IID oracles for the order-statistic limit laws without
any Gaussian path simulation; the exact Brownian case is
rate = 2c, power = 1, rho == 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .asymptotics import weibull_normalizers
from .experiments import ExperimentResult, ks_statistic
from .limit_laws import ErlangLogLaw

INV_TOL = 1e-12
MAX_NEWTON_ITER = 200


class InversionError(RuntimeError):
    """Quantile root-finding failed to converge."""


@dataclass(frozen=True)
class WeibullLikeSpec:
    """Tail survival prefactor0 * x^prefactor_power * exp(-rate * x^power)."""

    rate: float
    power: float
    prefactor0: float = 1.0
    prefactor_power: float = 0.0
    x_star: float = field(init=False)

    def __post_init__(self):
        if not self.rate > 0 or not self.power > 0:
            raise ValueError("rate and power must be positive")
        if not self.prefactor0 > 0:
            raise ValueError("prefactor0 must be positive")
        gamma = self.prefactor_power
        if abs(gamma) < 1e-9 or (
                gamma < 0.0 and self.prefactor0 < 1.0
                and math.log(self.prefactor0) / gamma > 690.0):
            # x^gamma with |gamma| this small is 1 everywhere except exactly
            # x = 0, where it produces a spurious 0/inf; likewise a tiny
            # negative gamma whose prefactor crossing underflows double range
            # is constant at every representable x. Treat both as constant.
            object.__setattr__(self, "prefactor_power", 0.0)
        object.__setattr__(self, "x_star", self._left_edge())

    @property
    def constant_prefactor(self) -> bool:
        return self.prefactor_power == 0.0

    def _log_survival(self, x):
        x = np.asarray(x, dtype=float)
        out = math.log(self.prefactor0) - self.rate * x ** self.power
        if self.prefactor_power != 0.0:
            with np.errstate(divide="ignore"):
                # x = 0 with a power-law prefactor: log-survival -> +-inf,
                # which downstream exp/clipping handles correctly
                out = out + self.prefactor_power * np.log(x)
        return out

    def _left_edge(self) -> float:
        """Smallest x from which the survival expression is <= 1 and nonincreasing."""
        gamma = self.prefactor_power
        if gamma == 0.0:
            if self.prefactor0 <= 1.0:
                return 0.0
            return (math.log(self.prefactor0) / self.rate) ** (1.0 / self.power)
        if gamma > 0.0:
            x_mono = (gamma / (self.rate * self.power)) ** (1.0 / self.power)
            if self._log_survival(x_mono) <= 0.0:
                return x_mono
            # x_mono can underflow to 0 for tiny gamma; keep the bracket
            # strictly positive so log stays finite
            lo = max(x_mono, 1e-300)
        else:
            # survival blows up as x -> 0, is decreasing throughout
            lo = 1e-300
            if self._log_survival(lo) <= 0.0:
                # the crossing sits below double range (tiny |gamma| with
                # prefactor0 < 1): the edge is indistinguishable from 0
                return 0.0
        hi = max(1.0, 2.0 * lo if lo > 0 else 1.0)
        while self._log_survival(hi) > 0.0:
            hi *= 2.0
        return float(brentq(self._log_survival, lo, hi, xtol=1e-15))

    def survival(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x < self.x_star, 1.0,
                       np.exp(np.minimum(self._log_survival(np.maximum(x, self.x_star)), 0.0)))
        return out if out.shape else float(out)

    def cdf(self, x):
        return 1.0 - self.survival(x)

    def quantile(self, u: float) -> float:
        """Inverse CDF at u, resolving |F(x) - u| <= 1e-12."""
        if not 0.0 <= u < 1.0:
            raise ValueError(f"u must lie in [0, 1), got {u}")
        s = 1.0 - u
        edge_survival = float(self.survival(self.x_star))
        if s >= edge_survival:
            return self.x_star
        if self.constant_prefactor:
            return ((math.log(self.prefactor0) - math.log(s)) / self.rate) ** (1.0 / self.power)
        # Safeguarded Newton on y = log x: the root can sit many orders of
        # magnitude below 1, where linear-space bisection cannot converge.
        target = math.log(s)

        def h(y):
            return (math.log(self.prefactor0) + self.prefactor_power * y
                    - self.rate * math.exp(self.power * y) - target)

        lo = math.log(max(self.x_star, 1e-300))
        if h(lo) <= 0.0:
            return self.x_star
        hi = max(lo + 1.0, 1.0)
        while h(hi) > 0.0:
            lo = hi
            hi = 2.0 * hi if hi > 1.0 else hi + 1.0
        y = 0.5 * (lo + hi)
        for _ in range(MAX_NEWTON_ITER):
            g = h(y)
            if abs(math.exp(target + g) - s) <= INV_TOL:
                return math.exp(y)
            if g > 0:
                lo = y
            else:
                hi = y
            dg = self.prefactor_power - self.rate * self.power * math.exp(self.power * y)
            step = y - g / dg if dg != 0 else None
            y = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
        raise InversionError(
            f"no convergence for u={u!r} within log-bracket [{lo!r}, {hi!r}]")

    def sample(self, rng: np.random.Generator, size=None):
        u = rng.random(size)
        if self.constant_prefactor:
            s = 1.0 - np.asarray(u, dtype=float)
            edge = float(self.survival(self.x_star))
            x = ((math.log(self.prefactor0) - np.log(np.minimum(s, edge))) / self.rate) \
                ** (1.0 / self.power)
            out = np.where(s >= edge, self.x_star, x)
            return out if out.shape else float(out)
        if size is None:
            return self.quantile(float(u))
        flat = np.asarray(u, dtype=float).ravel()
        return np.array([self.quantile(v) for v in flat]).reshape(np.shape(u))


def sample_weibull_like(spec: WeibullLikeSpec, rng: np.random.Generator) -> float:
    """One inverse-CDF draw."""
    return float(spec.sample(rng))


def spec_normalizers(spec: WeibullLikeSpec, n: int) -> tuple[float, float]:
    """Centering/scaling (mu_n, nu_n) for the k-th order statistics of n draws."""
    if spec.prefactor0 == 1.0 and spec.prefactor_power == 0.0:
        log_rho = None
    else:
        def log_rho(x):
            return math.log(spec.prefactor0) + spec.prefactor_power * math.log(float(x))
    return weibull_normalizers(n, spec.rate, spec.power, log_rho)


def _tail_dominates(spec: WeibullLikeSpec, elevated: WeibullLikeSpec) -> bool:
    if elevated.power != spec.power:
        return elevated.power > spec.power
    return elevated.rate > spec.rate


def thinned_experiment(spec: WeibullLikeSpec, elevated_spec: WeibullLikeSpec | None,
                       p: float, n: int, k: int, reps: int,
                       rng: np.random.Generator,
                       lambdas: tuple[float, ...] = ()) -> ExperimentResult:
    """k-th order statistics of ceil(p*n) minimal-tail draws mixed with
    n - ceil(p*n) elevated draws, normalized by the minimal-tail constants.

    p = 1 is exactly the plain IID experiment (same stream consumption).
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    if reps < 100:
        raise ValueError(f"reps must be at least 100, got {reps}")
    m = min(n, math.ceil(p * n))
    if m < n:
        if elevated_spec is None:
            raise ValueError("elevated_spec required when p < 1")
        if not _tail_dominates(spec, elevated_spec):
            raise ValueError("elevated_spec must have a strictly lighter right tail")

    mu, nu = spec_normalizers(spec, m)
    stats = np.empty((reps, k))
    chunk = max(1, int(4e6 / n))
    for start in range(0, reps, chunk):
        b = min(chunk, reps - start)
        draws = np.empty((b, n))
        draws[:, :m] = spec.sample(rng, (b, m))
        if m < n:
            draws[:, m:] = elevated_spec.sample(rng, (b, n - m))
        top = np.partition(draws, n - k, axis=1)[:, n - k:]
        stats[start:start + b] = np.sort(top, axis=1)[:, ::-1]
    normalized = (stats - mu) / nu

    ks = {j: ks_statistic(normalized[:, j - 1], ErlangLogLaw(j).cdf) for j in range(1, k + 1)}
    empirical, limits, std_errs = {}, {}, {}
    for lam in lambdas:
        vals = np.abs(normalized[:, k - 1]) ** lam
        empirical[lam] = float(vals.mean())
        std_errs[lam] = float(vals.std(ddof=1) / math.sqrt(reps))
        limits[lam] = ErlangLogLaw(k).abs_moment(lam)

    return ExperimentResult(
        normalized_stats=normalized, ks_distance=ks,
        empirical_moments=empirical, limit_moments=limits, moment_std_errs=std_errs,
        m_n=m,
    )


def iid_order_statistic_experiment(spec: WeibullLikeSpec, n: int, k: int, reps: int,
                                   rng: np.random.Generator,
                                   lambdas: tuple[float, ...] = ()) -> ExperimentResult:
    """Plain IID k-th order-statistic experiment against the -log-Erlang limits."""
    return thinned_experiment(spec, None, 1.0, n, k, reps, rng, lambdas)
