#!/usr/bin/env python3
"""Sweep sample size across the three dependence regimes.

For each scenario config this runs the replicated experiment at several
values of log10(n), prints the KS distance to the regime's limit law and
the absolute-moment gaps, and writes JSON/CSV results next to --out.

Example:
    python scripts/regime_sweep.py --out results/ --reps 500 --log-n 2.5 3.0 3.5
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from evtsup.cli import _load_config, _model_from_config  # noqa: E402
from evtsup.experiments import (ExperimentPlan, moment_convergence_report,
                                persist, run_scenario)  # noqa: E402

CONFIGS = ("brownian.toml", "weak_dependence.toml", "knife_edge.toml")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--log-n", type=float, nargs="+", default=[2.5, 3.0, 3.5])
    ap.add_argument("--grid", type=int, default=2 ** 12)
    ap.add_argument("--seed", type=int, default=20260823)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    os.makedirs(args.out, exist_ok=True)
    here = os.path.dirname(os.path.abspath(__file__))
    for name in CONFIGS:
        cfg = _load_config(os.path.join(here, name))
        model = _model_from_config(cfg)
        results = []
        for log_n in args.log_n:
            n = round(10.0 ** log_n)
            plan = ExperimentPlan(model=model, n=n, k=2, reps=args.reps,
                                  n_points=args.grid, levels=(0.0,),
                                  lambdas=(1.0, 2.0), seed=args.seed,
                                  threads=args.threads)
            res = run_scenario(plan)
            results.append(res)
            stem = os.path.join(args.out, f"{name.removesuffix('.toml')}_n{n}")
            persist(res, stem)
            tv = res.tv_exceedance.get(0.0)
            print(f"{name:22s} n={n:<7d} regime={res.regime.tag.value:17s} "
                  f"ks1={res.ks_distance[1]:.4f} ks2={res.ks_distance[2]:.4f} "
                  f"tv={'-' if tv is None else f'{tv:.4f}'} "
                  f"({res.runtime_seconds:.0f}s)", flush=True)
        if len(results) < 2:
            continue
        for lam in (1.0, 2.0):
            rep = moment_convergence_report(results, lam)
            gaps = ", ".join(f"n={r['n']}: {r['gap']:.3f}" for r in rep["rows"])
            flag = "" if rep["monotone"] else "  [non-monotone]"
            print(f"  moment lambda={lam:g}: {gaps}{flag}")


if __name__ == "__main__":
    main()
