"""End-to-end scenario runs: replicated order statistics and exceedance
counts of the dependent suprema sequence, normalized per regime and
compared against the limit laws, with JSON/CSV persistence.

Replications are deterministic given (seed, replication, entity) streams,
so output bytes do not depend on the worker count.
"""

from __future__ import annotations

import concurrent.futures
import csv
import json
import math
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from . import rng as rngmod
from .asymptotics import (AsymptoticConstants, NormalizingSeq, Regime, RegimeTag,
                          classify_regime, compute_constants, normalizers)
from .limit_laws import (CountLaw, ErlangLogLaw, LimitLaw, MixedPoissonCountLaw,
                         MixtureLaw, NormalLaw, PoissonCountLaw)
from .process_sim import GridSpec, get_sampler
from .suprema import ModelSpec, DriftSequence, TopK, truncation_horizon

SCHEMA_VERSION = "1"
ENTITY_CHUNK = 256
DEFAULT_KMAX = 6


@dataclass(frozen=True)
class ExperimentPlan:
    model: ModelSpec
    n: int
    k: int
    reps: int
    n_points: int = 2 ** 12
    g_mult: float = 3.0
    levels: tuple[float, ...] = (0.0,)
    lambdas: tuple[float, ...] = (1.0, 2.0)
    seed: int = 0
    output_path: str | None = None
    retain_q: bool | None = None  # None: retain iff n <= 10_000
    threads: int = 1

    def __post_init__(self):
        if self.reps < 100:
            raise ValueError(f"reps must be at least 100, got {self.reps}")
        if self.n < 2 * self.k:
            raise ValueError(f"need n >= 2k, got n={self.n}, k={self.k}")
        if not all(math.isfinite(x) for x in self.levels):
            raise ValueError("all levels must be finite")

    @property
    def keep_q(self) -> bool:
        return self.n <= 10_000 if self.retain_q is None else self.retain_q


@dataclass
class ExperimentResult:
    normalized_stats: np.ndarray
    ks_distance: dict[int, float] = field(default_factory=dict)
    empirical_moments: dict[float, float] = field(default_factory=dict)
    limit_moments: dict[float, float] = field(default_factory=dict)
    moment_std_errs: dict[float, float] = field(default_factory=dict)
    exceed_counts: np.ndarray | None = None
    levels: tuple[float, ...] = ()
    tv_exceedance: dict[float, float] = field(default_factory=dict)
    regime: Regime | None = None
    normalizers_used: NormalizingSeq | None = None
    m_n: int | None = None
    plan: ExperimentPlan | None = None
    q_values: np.ndarray | None = None
    runtime_seconds: float = 0.0
    truncated: bool = False


def ks_statistic(samples: np.ndarray, cdf) -> float:
    """Sup-norm distance between the empirical CDF and cdf (both one-sided gaps)."""
    samples = np.sort(np.asarray(samples, dtype=float))
    m = samples.size
    if m == 0:
        raise ValueError("samples must be nonempty")
    f = np.asarray(cdf(samples), dtype=float)
    i = np.arange(1, m + 1, dtype=float)
    return float(max((i / m - f).max(), (f - (i - 1) / m).max()))


def limit_law_for(regime: Regime, order: int, iid_fallback: bool = False) -> LimitLaw:
    """The limiting distribution of the order-th normalized order statistic."""
    if iid_fallback:
        return ErlangLogLaw(order)
    if regime.tag is RegimeTag.NORMAL_LIMIT:
        return NormalLaw()
    if regime.tag is RegimeTag.ERLANG_LOG_LIMIT:
        return ErlangLogLaw(order)
    return MixtureLaw(order, regime.mixture_coeff)


def count_law_for(regime: Regime, x: float, iid_fallback: bool = False) -> CountLaw | None:
    if iid_fallback or regime.tag is RegimeTag.ERLANG_LOG_LIMIT:
        return PoissonCountLaw(x)
    if regime.tag is RegimeTag.MIXTURE_LIMIT:
        return MixedPoissonCountLaw(x, regime.mixture_coeff)
    return None  # no count law in the strongly-dependent scenario


def _run_replication(plan: ExperimentPlan, rep: int, horizon: float,
                     levels_abs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    """One replication: (k order statistics, exceedance counts, optional Q vector)."""
    model = plan.model
    grid = GridSpec(plan.n_points, horizon)
    idio_sampler = get_sampler(model.hurst, plan.n_points)
    t_beta = grid.times ** model.beta

    if model.sigma0 > 0:
        common_sampler = get_sampler(model.hurst0, plan.n_points)
        w = common_sampler.sample_normals(rngmod.stream(plan.seed, rep, rngmod.COMMON_ENTITY))
        base = model.sigma0 * horizon ** model.hurst0 * common_sampler.paths_from_normals(w)[0]
    else:
        base = np.zeros(plan.n_points + 1)

    coeffs = model.drifts.coefficients(plan.n)
    idio_scale = model.sigma * horizon ** model.hurst
    npp = idio_sampler.normals_per_path
    top = TopK(plan.k)
    counts = np.zeros(levels_abs.size, dtype=np.int64)
    kept = [] if plan.keep_q else None

    for start in range(0, plan.n, ENTITY_CHUNK):
        b = min(ENTITY_CHUNK, plan.n - start)
        normals = np.empty((b, npp))
        for j in range(b):
            normals[j] = rngmod.stream(plan.seed, rep, 1 + start + j).standard_normal(npp)
        vals = idio_sampler.paths_from_normals(normals)
        y = idio_scale * vals
        y += base
        y -= coeffs[start:start + b, None] * t_beta
        q = y.max(axis=1)
        top.push_many(q)
        counts += (q[:, None] > levels_abs[None, :]).sum(axis=0)
        if kept is not None:
            kept.append(q)

    qv = np.concatenate(kept) if kept is not None else None
    return top.stats(), counts, qv


def run_scenario(plan: ExperimentPlan) -> ExperimentResult:
    """Replicated simulation of the k-th order statistics and exceedance counts,
    normalized and tested against the regime's limit laws."""
    t_start = time.perf_counter()
    model = plan.model
    regime = classify_regime(model)
    iid_fallback = model.sigma0 == 0.0
    consts = compute_constants(model)
    m_n = model.drifts.n_minimal(plan.n)
    idx_n = m_n if model.drifts.p < 1.0 else plan.n
    seq = normalizers(idx_n, consts, model)
    center = seq.b_n
    if regime.tag is RegimeTag.NORMAL_LIMIT and not iid_fallback:
        scale = seq.e_n
    else:
        scale = seq.a_n
    horizon = truncation_horizon(model, seq.b_n, plan.g_mult)
    levels_abs = seq.b_n + seq.a_n * np.asarray(plan.levels, dtype=float)

    stats = np.empty((plan.reps, plan.k))
    counts = np.zeros((plan.reps, levels_abs.size), dtype=np.int64)
    q_all = [] if plan.keep_q else None
    done = 0
    truncated = False
    try:
        if plan.threads > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=plan.threads) as pool:
                futures = [pool.submit(_run_replication, plan, rep, horizon, levels_abs)
                           for rep in range(plan.reps)]
                for rep, fut in enumerate(futures):
                    stats[rep], counts[rep], qv = fut.result()
                    if q_all is not None:
                        q_all.append(qv)
                    done = rep + 1
        else:
            for rep in range(plan.reps):
                stats[rep], counts[rep], qv = _run_replication(plan, rep, horizon, levels_abs)
                if q_all is not None:
                    q_all.append(qv)
                done = rep + 1
    except KeyboardInterrupt:
        truncated = True
        stats = stats[:done]
        counts = counts[:done]

    normalized = (stats - center) / scale
    result = ExperimentResult(
        normalized_stats=normalized, exceed_counts=counts, levels=plan.levels,
        regime=regime, normalizers_used=seq, m_n=m_n, plan=plan,
        q_values=np.stack(q_all) if q_all else None, truncated=truncated,
    )
    if done:
        for j in range(1, plan.k + 1):
            law = limit_law_for(regime, j, iid_fallback)
            result.ks_distance[j] = ks_statistic(normalized[:, j - 1], law.cdf)
        head_law = limit_law_for(regime, plan.k, iid_fallback)
        for lam in plan.lambdas:
            vals = np.abs(normalized[:, plan.k - 1]) ** lam
            result.empirical_moments[lam] = float(vals.mean())
            result.moment_std_errs[lam] = float(vals.std(ddof=1) / math.sqrt(done))
            result.limit_moments[lam] = head_law.abs_moment(lam)
        for x in plan.levels:
            law = count_law_for(regime, x, iid_fallback)
            if law is not None:
                result.tv_exceedance[x] = exceedance_test(result, law, DEFAULT_KMAX)
    result.runtime_seconds = time.perf_counter() - t_start
    return result


def exceedance_test(result: ExperimentResult, law: CountLaw, k_max: int) -> float:
    """Total-variation distance between observed exceedance counts (truncated at
    k_max) and the count law's probabilities."""
    if k_max < 1:
        raise ValueError(f"k_max must be positive, got {k_max}")
    if result.exceed_counts is None or result.exceed_counts.size == 0:
        raise ValueError("result has no exceedance counts")
    try:
        col = list(result.levels).index(law.x)
    except ValueError:
        raise ValueError(f"level {law.x} was not recorded in this result") from None
    observed = np.minimum(result.exceed_counts[:, col], k_max)
    emp = np.bincount(observed, minlength=k_max + 1) / observed.size
    return float(0.5 * np.abs(emp - law.probabilities(k_max)).sum())


def moment_convergence_report(results: list[ExperimentResult], lam: float) -> dict:
    """Gap table |empirical - limit| over increasing n; flags non-monotone gaps."""
    if len(results) < 2:
        raise ValueError("need at least two results")
    models = {r.plan.model for r in results}
    if len(models) != 1:
        raise ValueError("results come from different models")
    ns = [r.plan.n for r in results]
    if ns != sorted(ns) or len(set(ns)) != len(ns):
        raise ValueError("results must have strictly increasing n")
    rows = []
    for r in results:
        if lam not in r.empirical_moments:
            raise ValueError(f"moment order {lam} missing from a result")
        gap = abs(r.empirical_moments[lam] - r.limit_moments[lam])
        rows.append({"n": r.plan.n, "empirical": r.empirical_moments[lam],
                     "limit": r.limit_moments[lam], "gap": gap,
                     "std_err": r.moment_std_errs.get(lam)})
    gaps = [row["gap"] for row in rows]
    return {"lambda": lam, "rows": rows,
            "monotone": all(g2 <= g1 for g1, g2 in zip(gaps, gaps[1:]))}


def _plan_dict(plan: ExperimentPlan) -> dict:
    d = asdict(plan)
    d["model"]["drifts"] = asdict(plan.model.drifts)
    d["levels"] = list(plan.levels)
    d["lambdas"] = list(plan.lambdas)
    # execution details, not part of the experiment identity: the same
    # seed must yield byte-identical documents at any worker count
    del d["threads"]
    del d["output_path"]
    return d


def result_document(result: ExperimentResult, include_runtime: bool = False) -> dict:
    """Schema-versioned JSON document (deterministic unless runtime included)."""
    seq = result.normalizers_used
    doc = {
        "schema_version": SCHEMA_VERSION,
        "plan": _plan_dict(result.plan) if result.plan else None,
        "regime": result.regime.tag.value if result.regime else None,
        "mixture_coeff": result.regime.mixture_coeff if result.regime else None,
        "normalizers": {"a_n": seq.a_n, "b_n": seq.b_n, "e_n": seq.e_n,
                        "m_n": result.m_n} if seq else None,
        "ks": {str(j): v for j, v in result.ks_distance.items()},
        "tv_exceedance": {repr(x): v for x, v in result.tv_exceedance.items()},
        "moments": [{"lambda": lam, "empirical": result.empirical_moments[lam],
                     "limit": result.limit_moments[lam],
                     "std_err": result.moment_std_errs.get(lam)}
                    for lam in result.empirical_moments],
        "truncated": result.truncated,
    }
    if include_runtime:
        # wall-clock is excluded by default so repeated runs are byte-identical
        doc["runtime_seconds"] = result.runtime_seconds
    return doc


def persist(result: ExperimentResult, path: str, format: str = "json",
            include_runtime: bool = False) -> None:
    """Write <path>.json plus matrix sidecars <path>_stats.csv, <path>_counts.csv."""
    if format not in ("json", "csv"):
        raise ValueError(f"format must be 'json' or 'csv', got {format!r}")
    try:
        if format == "json":
            with open(path + ".json", "w") as fh:
                json.dump(result_document(result, include_runtime), fh,
                          indent=2, sort_keys=True)
                fh.write("\n")
        with open(path + "_stats.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["replication", "order", "value"])
            for rep in range(result.normalized_stats.shape[0]):
                for j in range(result.normalized_stats.shape[1]):
                    w.writerow([rep, j + 1, repr(float(result.normalized_stats[rep, j]))])
        if result.exceed_counts is not None:
            with open(path + "_counts.csv", "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["replication", "level", "count"])
                for rep in range(result.exceed_counts.shape[0]):
                    for col, x in enumerate(result.levels):
                        w.writerow([rep, repr(float(x)), int(result.exceed_counts[rep, col])])
    except OSError as exc:
        raise OSError(f"failed writing results at {path!r}: {exc}") from exc


def load_stats_csv(path: str) -> np.ndarray:
    """Round-trip reader for the <path>_stats.csv sidecar."""
    rows = []
    with open(path) as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            rows.append((int(row["replication"]), int(row["order"]), float(row["value"])))
    reps = max(r for r, _, _ in rows) + 1
    k = max(j for _, j, _ in rows)
    out = np.empty((reps, k))
    for rep, j, v in rows:
        out[rep, j - 1] = v
    return out
