"""Extreme-value simulation lab for suprema of self-similar Gaussian
processes with trend: closed-form constants, exact path synthesis,
streaming order statistics, limit laws and scenario verification."""

from .asymptotics import (AsymptoticConstants, NormalizingSeq, Regime, RegimeTag,
                          check_abn_ratio, classify_regime, compute_constants,
                          estimate_pickands, normalizers, pickands_constant,
                          tail_approx, tail_prefactor, weibull_normalizers)
from .experiments import (ExperimentPlan, ExperimentResult, exceedance_test,
                          ks_statistic, moment_convergence_report, persist,
                          run_scenario)
from .iid_weibull import (WeibullLikeSpec, iid_order_statistic_experiment,
                          sample_weibull_like, thinned_experiment)
from .limit_laws import (ErlangLogLaw, MixedPoissonCountLaw, MixtureLaw,
                         NormalLaw, PoissonCountLaw, abs_moment, cdf, count_cdf,
                         sample)
from .process_sim import (FbmSampler, FgnCovariance, GridSpec, SamplePath,
                          SynthesisError, fgn_covariance, refine_path,
                          rescale_self_similar, sample_fbm_unit)
from .rng import stream
from .suprema import (DriftSequence, ModelSpec, SupremaBatch, TopK,
                      batch_order_statistics, kth_heap_vs_sort_oracle,
                      supremum_on_grid, truncation_horizon)

__version__ = "0.1.0"
