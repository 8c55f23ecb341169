"""Closed-form constants, normalizing sequences and tail asymptotics.

Everything here is a pure function of the model parameters.  The only
Monte Carlo piece is the estimator of the constant appearing in the tail
prefactor (the Pickands-type constant), which takes an explicit
generator and is cached per smoothness index.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .process_sim import get_sampler, rescale_self_similar
from .rng import stream
from .suprema import ModelSpec

REGIME_TOL = 1e-12

# Exact values of the Pickands constant at the two indices where a closed
# form is known; other indices are estimated by Monte Carlo on demand.
PICKANDS_EXACT = {1.0: 1.0, 2.0: 1.0 / math.sqrt(math.pi)}
_PICKANDS_CACHE: dict[float, float] = {}
_PICKANDS_SEED = 0x9E3779B97F4A7C15  # fixed so auto-estimated constants are deterministic


class TailClampWarning(UserWarning):
    """Tail approximation exceeded 1 and was clamped."""


class RegimeTag(enum.Enum):
    NORMAL_LIMIT = "NORMAL_LIMIT"
    ERLANG_LOG_LIMIT = "ERLANG_LOG_LIMIT"
    MIXTURE_LIMIT = "MIXTURE_LIMIT"


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    mixture_coeff: float | None = None


@dataclass(frozen=True)
class AsymptoticConstants:
    """Constants of the tail of sup_t(X_H(t) - c t^beta).

    peak_time / peak_std / curvature describe the variance of
    X_H(t)/(1 + c t^beta) near its maximum; tail_power and tail_rate give
    the Weibull-like tail exp(-tail_rate * u^tail_power); local_index is
    the smoothness index of the standardized process and
    structure_inverse the asymptotic inverse of its local structure
    function.
    """

    peak_time: float
    peak_std: float
    curvature: float
    tail_power: float
    tail_rate: float
    local_index: float
    pickands: float
    structure_inverse: Callable[[float], float]


@dataclass(frozen=True)
class NormalizingSeq:
    """Centering/scaling constants at sample size n.

    (mu_n, nu_n) are the generic Weibull-like versions; with the tail
    parameters of the supremum they coincide with (b_n, a_n) by
    construction (shared code path).
    """

    n: int
    b_n: float
    a_n: float
    e_n: float
    mu_n: float
    nu_n: float


def estimate_pickands(alpha: float, T: float = 64.0, n_points: int = 2 ** 14,
                      reps: int = 10 ** 5, rng: np.random.Generator | None = None,
                      method: str = "ratio") -> tuple[float, float]:
    """Monte Carlo estimate (value, std_error) of the Pickands constant.

    method "ratio" averages max_t exp(Z(t)) / integral exp(Z(t)) dt for
    Z(t) = sqrt(2) B_{alpha/2}(t) - |t|^alpha on a symmetric window; the
    per-sample statistic is bounded by 1/grid_step, so the estimator is
    usable at large windows.  method "direct" averages exp(sup Z)/T on
    [0, T]; its integrand is heavy-tailed and it is only trustworthy for
    small windows (kept as a cross-check).  Both carry negative grid bias.
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")
    if reps < 100:
        raise ValueError(f"reps must be at least 100, got {reps}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    if method not in ("ratio", "direct"):
        raise ValueError(f"unknown method: {method}")
    if n_points % 2:
        raise ValueError("n_points must be even")
    if rng is None:
        rng = stream(_PICKANDS_SEED)

    two_sided = method == "ratio"
    if two_sided:
        t = np.linspace(-T, T, n_points + 1)
        delta = 2.0 * T / n_points
    else:
        t = np.linspace(0.0, T, n_points + 1)
        delta = T / n_points
    drift = np.abs(t) ** alpha
    mid = n_points // 2

    hurst = alpha / 2.0
    sampler = None if alpha == 2.0 else get_sampler(hurst, n_points)

    sums = 0.0
    sumsq = 0.0
    done = 0
    chunk = max(1, min(reps, int(2 ** 24 / (n_points + 1))))
    while done < reps:
        b = min(chunk, reps - done)
        if alpha == 2.0:
            # Degenerate smooth case: B_1(t) = t * N for a single normal N.
            w = t[None, :] * rng.standard_normal((b, 1))
        else:
            horizon = 2.0 * T if two_sided else T
            w = sampler.sample_values(rng, b) * horizon ** hurst
            if two_sided:
                w = w - w[:, mid][:, None]
        z = math.sqrt(2.0) * w - drift
        zmax = z.max(axis=1, keepdims=True)
        if method == "ratio":
            if alpha == 1.0:
                # Brownian case: the within-cell process given the grid values
                # is a Brownian bridge (variance parameter 2), so the exact
                # continuous maximum of each cell can be sampled in closed
                # form.  This removes the O(sqrt(delta)) discrete-max bias.
                u = rng.random((b, n_points))
                incr = z[:, 1:] - z[:, :-1]
                cell_max = 0.5 * (z[:, 1:] + z[:, :-1]
                                  + np.sqrt(incr ** 2 - 4.0 * delta * np.log(u)))
                zmax = np.maximum(zmax[:, 0], cell_max.max(axis=1))[:, None]
            vals = 1.0 / (delta * np.exp(z - zmax).sum(axis=1))
        else:
            vals = np.exp(zmax[:, 0]) / T
        sums += vals.sum()
        sumsq += (vals ** 2).sum()
        done += b
    mean = sums / reps
    var = max(sumsq / reps - mean ** 2, 0.0)
    return float(mean), float(math.sqrt(var / reps))


def pickands_constant(alpha: float) -> float:
    """Pickands constant: exact where known, cached deterministic MC otherwise."""
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")
    if alpha in PICKANDS_EXACT:
        return PICKANDS_EXACT[alpha]
    if alpha not in _PICKANDS_CACHE:
        est, _ = estimate_pickands(alpha, T=32.0, n_points=2 ** 12, reps=20_000,
                                   rng=stream(_PICKANDS_SEED))
        _PICKANDS_CACHE[alpha] = est
    return _PICKANDS_CACHE[alpha]


def _effective_drift(model: ModelSpec) -> float:
    # sigma*X - c t^beta = sigma * (X - (c/sigma) t^beta): reduce to unit scale.
    return model.drifts.c / model.sigma


def compute_constants(model: ModelSpec, pickands: float | None = None) -> AsymptoticConstants:
    """All closed-form tail constants for the (unit-scale) supremum of one path."""
    h, b = model.hurst, model.beta
    c = _effective_drift(model)
    base = h / (c * (b - h))
    t0 = base ** (1.0 / b)
    peak_std = (b - h) / b * base ** (h / b)
    curvature = base ** (-(h + 2.0) / b) * h * b
    tail_power = 2.0 * (1.0 - h / b)
    tail_rate = 1.0 / (2.0 * peak_std ** 2)
    alpha = 2.0 * h
    if pickands is None:
        pickands = pickands_constant(alpha)

    def structure_inverse(s, _t0=t0, _h=h):
        # local structure K(t) = t0^{-H} t^H, hence inverse t0 * s^{1/H}
        return _t0 * s ** (1.0 / _h)

    return AsymptoticConstants(
        peak_time=t0, peak_std=peak_std, curvature=curvature,
        tail_power=tail_power, tail_rate=tail_rate, local_index=alpha,
        pickands=pickands, structure_inverse=structure_inverse,
    )


def tail_prefactor(u, consts: AsymptoticConstants):
    """Slowly-varying prefactor R(u) of the supremum tail."""
    if np.any(np.asarray(u) <= 0):
        raise ValueError("u must be positive")
    a, b_ = consts.peak_std, consts.curvature
    alpha = consts.local_index
    tau = consts.tail_power
    front = a ** (1.5 - 2.0 / alpha) * consts.pickands / (2.0 ** (1.0 / alpha) * np.sqrt(b_))
    return front * u ** (-tau) / consts.structure_inverse(u ** (-tau / 2.0))


def tail_approx(u: float, consts: AsymptoticConstants) -> float:
    """First-order approximation of P(sup_t(X_H(t) - c t^beta) > u), clamped below 1."""
    val = float(tail_prefactor(u, consts) * np.exp(-consts.tail_rate * u ** consts.tail_power))
    if val >= 1.0:
        warnings.warn(f"tail approximation {val:.3g} at u={u} clamped to 1",
                      TailClampWarning, stacklevel=2)
        return math.nextafter(1.0, 0.0)
    return val


def weibull_normalizers(n: int, rate: float, power: float,
                        log_prefactor: Callable | None = None) -> tuple[float, float]:
    """Centering mu_n and scaling nu_n for a Weibull-like tail rho(x)exp(-rate*x^power).

    log_prefactor is log rho; None means rho == 1.  Evaluated in extended
    precision: the correction term is easily swamped at large n.
    """
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    ld = np.longdouble
    lead = (np.log(ld(n)) / ld(rate)) ** (ld(1.0) / ld(power))
    tilt = (np.log(ld(n)) / ld(rate)) ** (ld(1.0) / ld(power) - 1.0)
    mu = lead
    if log_prefactor is not None:
        mu = mu + tilt / ld(power) * ld(log_prefactor(lead)) / ld(rate)
    nu = tilt / (ld(rate) * ld(power))
    return float(mu), float(nu)


def normalizers(n: int, consts: AsymptoticConstants, model: ModelSpec) -> NormalizingSeq:
    """The sequences b_n, a_n (centering/scaling) and e_n (common-factor scale)."""

    def log_r(u):
        return float(np.log(tail_prefactor(float(u), consts)))

    mu, nu = weibull_normalizers(n, consts.tail_rate, consts.tail_power, log_r)
    b_n = model.sigma * mu
    a_n = model.sigma * nu
    e_n = model.sigma0 * (consts.peak_time ** model.hurst0) * mu ** (model.hurst0 / model.beta)
    return NormalizingSeq(n=n, b_n=b_n, a_n=a_n, e_n=e_n, mu_n=mu, nu_n=nu)


def classify_regime(model: ModelSpec, tol: float = REGIME_TOL) -> Regime:
    """Trichotomy on beta vs 2*hurst - hurst0 deciding the limit law."""
    gap = model.beta - (2.0 * model.hurst - model.hurst0)
    if abs(gap) <= tol:
        coeff = model.sigma0 * model.drifts.c * model.beta / model.hurst
        return Regime(RegimeTag.MIXTURE_LIMIT, mixture_coeff=coeff)
    if gap > 0:
        return Regime(RegimeTag.NORMAL_LIMIT)
    return Regime(RegimeTag.ERLANG_LOG_LIMIT)


def check_abn_ratio(model: ModelSpec, n_values: Sequence[int],
                    consts: AsymptoticConstants | None = None) -> np.ndarray:
    """b_n^{hurst0/beta} / a_n over n_values; diverges, vanishes or converges
    to tail_power * tail_rate according to the regime."""
    if consts is None:
        consts = compute_constants(model)
    out = []
    for n in n_values:
        seq = normalizers(int(n), consts, model)
        out.append(seq.b_n ** (model.hurst0 / model.beta) / seq.a_n)
    return np.array(out)
