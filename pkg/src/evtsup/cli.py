"""Command-line front end.

Subcommands:
  constants  print closed-form tail constants and normalizers for a model
  simulate   run a replicated scenario experiment and persist results
  check      run a named verification suite (exit 4 on any failed check)
  pickands   Monte Carlo estimate of the Pickands-type constant

Models and plans are described in a TOML config (see scripts/ for
examples).  Exit codes: 0 success, 2 invalid input, 3 I/O failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import acceptance
from .asymptotics import (classify_regime, compute_constants, estimate_pickands,
                          normalizers)
from .experiments import ExperimentPlan, persist, result_document, run_scenario
from .rng import stream
from .suprema import DriftSequence, ModelSpec

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_IO = 3
EXIT_CHECK_FAILED = 4


def _load_config(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read config {path!r}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ValueError(f"malformed TOML in {path!r}: {exc}") from exc


def _model_from_config(cfg: dict, p_override: float | None = None) -> ModelSpec:
    try:
        m = cfg["model"]
    except KeyError:
        raise ValueError("config is missing a [model] table") from None
    drifts = DriftSequence(
        c=float(m.get("c", 1.0)),
        p=float(p_override if p_override is not None else m.get("p", 1.0)),
        elevated_factor=float(m.get("elevated_factor", 1.5)),
    )
    return ModelSpec(
        hurst=float(m["hurst"]), hurst0=float(m.get("hurst0", m["hurst"])),
        beta=float(m["beta"]), sigma0=float(m.get("sigma0", 0.0)),
        drifts=drifts, sigma=float(m.get("sigma", 1.0)),
    )


def _resolve_threads(arg_value: int | None, cfg: dict) -> int:
    if arg_value is not None:
        return arg_value
    env = os.environ.get("EVT_SUPREMA_THREADS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"EVT_SUPREMA_THREADS must be an integer, got {env!r}") from None
    return int(cfg.get("plan", {}).get("threads", 1))


def _plan_from_config(cfg: dict, args) -> ExperimentPlan:
    plan_cfg = cfg.get("plan", {})
    model = _model_from_config(cfg, p_override=getattr(args, "p", None))
    n = plan_cfg.get("n")
    if getattr(args, "log_n", None) is not None:
        n = round(10.0 ** args.log_n)
    if n is None:
        raise ValueError("sample size n missing: set [plan].n or pass --log-n")
    seed = args.seed if args.seed is not None else int(plan_cfg.get("seed", 0))
    return ExperimentPlan(
        model=model, n=int(n), k=int(plan_cfg.get("k", 1)),
        reps=int(plan_cfg.get("reps", 1000)),
        n_points=int(plan_cfg.get("n_points", 2 ** 12)),
        g_mult=float(plan_cfg.get("g_mult", 3.0)),
        levels=tuple(float(x) for x in plan_cfg.get("levels", [0.0])),
        lambdas=tuple(float(x) for x in plan_cfg.get("lambdas", [1.0, 2.0])),
        seed=seed, threads=_resolve_threads(args.threads, cfg),
    )


def cmd_constants(args) -> int:
    cfg = _load_config(args.config)
    model = _model_from_config(cfg)
    consts = compute_constants(model)
    regime = classify_regime(model)
    doc = {
        "model": {"hurst": model.hurst, "hurst0": model.hurst0, "beta": model.beta,
                  "sigma": model.sigma, "sigma0": model.sigma0, "c": model.drifts.c},
        "peak_time": consts.peak_time, "peak_std": consts.peak_std,
        "curvature": consts.curvature, "tail_power": consts.tail_power,
        "tail_rate": consts.tail_rate, "local_index": consts.local_index,
        "pickands": consts.pickands,
        "regime": regime.tag.value, "mixture_coeff": regime.mixture_coeff,
    }
    if args.log_n is not None:
        n = round(10.0 ** args.log_n)
        seq = normalizers(n, consts, model)
        doc["normalizers"] = {"n": n, "b_n": seq.b_n, "a_n": seq.a_n, "e_n": seq.e_n}
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for key, val in doc.items():
            print(f"{key}: {val}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    plan = _plan_from_config(cfg, args)
    result = run_scenario(plan)
    if args.out:
        persist(result, args.out)
        print(f"wrote {args.out}.json and CSV sidecars", file=sys.stderr)
    doc = result_document(result, include_runtime=args.runtime)
    if args.json or not args.out:
        print(json.dumps(doc, indent=2, sort_keys=True))
    if result.truncated:
        print("warning: run interrupted, partial results only", file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    if args.suite == "all":
        names = sorted(acceptance.SUITES)
    else:
        names = [args.suite]
    results = []
    for name in names:
        results.extend(acceptance.run_suite(name))
    verdict = {
        "suites": names,
        "checks": [{"name": r.name, "value": r.value, "threshold": r.threshold,
                    "passed": r.passed, "detail": r.detail} for r in results],
        "passed": all(r.passed for r in results),
    }
    if args.json:
        print(json.dumps(verdict, indent=2, sort_keys=True))
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if verdict["passed"] else EXIT_CHECK_FAILED


def cmd_pickands(args) -> int:
    rng = stream(args.seed) if args.seed is not None else None
    est, se = estimate_pickands(args.alpha, T=args.window, n_points=args.grid,
                                reps=args.reps, rng=rng, method=args.method)
    doc = {"alpha": args.alpha, "window": args.window, "grid": args.grid,
           "reps": args.reps, "method": args.method,
           "estimate": est, "std_error": se}
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(f"H_{args.alpha:g} ~ {est:.6f} +/- {se:.2e} "
              f"(window {args.window:g}, {args.grid} points, {args.reps} reps)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evtsup",
        description="Extreme-value lab for suprema of self-similar Gaussian "
                    "processes with trend.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_const = sub.add_parser("constants", help="print closed-form tail constants")
    p_const.add_argument("--config", required=True, help="TOML model description")
    p_const.add_argument("--log-n", type=float, default=None,
                         help="also print normalizers at n = 10^LOG_N")
    p_const.add_argument("--json", action="store_true", help="machine-readable output")
    p_const.set_defaults(func=cmd_constants)

    p_sim = sub.add_parser("simulate", help="run a replicated scenario experiment")
    p_sim.add_argument("--config", required=True, help="TOML model/plan description")
    p_sim.add_argument("--seed", type=int, default=None, help="override [plan].seed")
    p_sim.add_argument("--threads", type=int, default=None,
                       help="worker processes (default: EVT_SUPREMA_THREADS or config)")
    p_sim.add_argument("--out", default=None, help="output stem for JSON/CSV files")
    p_sim.add_argument("--json", action="store_true",
                       help="print the result document even when --out is given")
    p_sim.add_argument("--log-n", type=float, default=None,
                       help="override sample size with n = 10^LOG_N")
    p_sim.add_argument("--p", type=float, default=None,
                       help="override the minimal-drift fraction for thinning")
    p_sim.add_argument("--runtime", action="store_true",
                       help="include wall-clock runtime in the JSON document")
    p_sim.set_defaults(func=cmd_simulate)

    p_check = sub.add_parser("check", help="run a verification suite")
    p_check.add_argument("suite", choices=sorted(acceptance.SUITES) + ["all"])
    p_check.add_argument("--json", action="store_true", help="machine-readable verdict")
    p_check.set_defaults(func=cmd_check)

    p_pick = sub.add_parser("pickands", help="estimate the Pickands-type constant")
    p_pick.add_argument("--alpha", type=float, required=True,
                        help="local smoothness index in (0, 2]")
    p_pick.add_argument("--window", "-T", type=float, default=64.0)
    p_pick.add_argument("--grid", type=int, default=2 ** 14,
                        help="number of grid steps across the window")
    p_pick.add_argument("--reps", type=int, default=10 ** 5)
    p_pick.add_argument("--seed", type=int, default=None)
    p_pick.add_argument("--method", choices=("ratio", "direct"), default="ratio")
    p_pick.add_argument("--json", action="store_true")
    p_pick.set_defaults(func=cmd_pickands)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
