"""Command-line surface: run / sweep / props / verify / constants.

Machine-readable output goes to stdout (JSON or CSV rows) or to files;
diagnostics go to stderr.  Exit code 0 means the operation completed and
every asserted invariant held; argparse usage errors exit 2.

KMEANSLAB_THREADS sets the default sweep thread count (overridable with
--threads).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import engine, oracles, props, sweep
from .errors import KmeansLabError
from .perturb import (
    load_instance,
    load_means,
    perturb as perturb_means,
    tail_probability_check,
)


def _default_threads() -> int:
    raw = os.environ.get("KMEANSLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _witness_json(w: props.Witness | None):
    if w is None:
        return None
    out = {"kind": w.kind, "point_indices": list(w.point_indices)}
    if w.hyperplane is not None:
        out["hyperplane"] = {
            "normal": [float(v) for v in w.hyperplane.normal],
            "offset": w.hyperplane.offset,
        }
    if w.interval is not None:
        out["interval"] = list(w.interval)
    if w.pairs is not None:
        out["pairs"] = [list(p) for p in w.pairs]
    if w.key_values is not None:
        out["key_values"] = [
            {"s": kv.s, "t": kv.t, "subset": list(kv.subset)} for kv in w.key_values
        ]
    if w.distance is not None:
        out["distance"] = w.distance
    return out


def _cmd_run(args) -> int:
    if args.points:
        instance = load_instance(args.points)
    else:
        if not (args.means and args.sigma is not None):
            print("run needs --points or --means with --sigma", file=sys.stderr)
            return 2
        means = load_means(args.means)
        instance = perturb_means(means, args.sigma, args.seed)
    init = engine.InitSpec(method=args.init, k=args.k, seed=args.init_seed)
    trace = engine.run(instance, init, max_iterations=args.max_iters)
    problems = engine.check_trace_invariants(instance, trace)
    if args.trace_out:
        engine.save_trace(trace, args.trace_out)
    summary = {
        "iterations": trace.iterations,
        "termination": trace.termination,
        "final_potential": trace.final_potential,
        "max_epoch_length": max(e.length for e in trace.epochs),
        "invariant_violations": problems,
    }
    print(json.dumps(summary))
    if problems:
        for p in problems:
            print(f"invariant violation: {p}", file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(args) -> int:
    config = sweep.load_config(args.config)
    if args.threads is not None:
        config.threads = args.threads
    result = sweep.run_sweep(config)
    result.save_csv(args.out)
    print(json.dumps({"rows": len(result.rows), "out": args.out}))
    return 0


def _cmd_props(args) -> int:
    instance = load_instance(args.points)
    if args.check == "separated":
        if args.eps is None:
            print("props --check separated needs --eps", file=sys.stderr)
            return 2
        verdict = props.check_eps_separated(instance, args.eps, args.subset_budget)
        threshold = args.eps
    elif args.check == "spreaded":
        if args.eps is None:
            print("props --check spreaded needs --eps", file=sys.stderr)
            return 2
        verdict = props.check_eps_spreaded(instance, args.eps)
        threshold = args.eps
    else:
        if args.delta is None:
            print("props --check sparse needs --delta", file=sys.stderr)
            return 2
        verdict = props.check_delta_sparse(
            instance, args.delta, args.s_cap, args.t_cap, args.size_cap
        )
        threshold = args.delta
    out = {
        "check": args.check,
        "status": verdict.status,
        "witness": _witness_json(verdict.witness),
        "note": verdict.note,
    }
    print(json.dumps(out))
    if verdict.status == props.VIOLATED and not props.revalidate_witness(
        instance, verdict, threshold
    ):
        print("witness failed re-validation", file=sys.stderr)
        return 1
    return 0


def _verify_row(lemma: str, params: dict, empirical: float, bound: float,
                margin: float, passed: bool) -> str:
    param_txt = ";".join(f"{key}={value}" for key, value in sorted(params.items()))
    verdict = "pass" if passed else "fail"
    return ",".join(
        [lemma, param_txt, repr(float(empirical)), repr(float(bound)),
         repr(float(margin)), verdict]
    )


def _cmd_verify(args) -> int:
    print("lemma,params,empirical,bound,margin,verdict")
    if args.lemma == "tail":
        check = tail_probability_check(
            args.sigma, args.t, args.mu, args.trials, args.seed
        )
        row = _verify_row(
            "tail",
            {"sigma": args.sigma, "t": args.t, "mu": args.mu},
            check.empirical, check.bound, 3.0 * check.sampling_error, check.passed,
        )
        print(row)
        return 0 if check.passed else 1
    if args.lemma == "spreaded-prob":
        result = oracles.mc_spreaded_bound(
            args.n, args.sigma, args.eps, args.trials, args.seed
        )
    elif args.lemma == "separation-prob":
        result = oracles.mc_separation_bound(
            args.n, args.d, args.sigma, args.eps, args.trials, args.seed
        )
    elif args.lemma == "delta-bound":
        result = oracles.mc_delta_bound(
            args.n, args.d, args.k, args.sigma, args.delta, args.trials, args.seed
        )
    else:
        result = oracles.mc_single_point_bisector(
            args.ell, args.sigma, args.delta, args.eps, args.trials, args.seed,
            n=args.n,
            origin=json.loads(args.origin),
            partner=json.loads(args.partner),
        )
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(_verify_row(result.lemma, result.params, result.empirical,
                      result.bound, result.margin, result.passed))
    return 0 if result.passed else 1


def _cmd_constants(args) -> int:
    constants = props.structure_constants(
        args.n, args.d, args.k, args.a, args.sigma,
        kappa=args.kappa, cube_radius=args.D,
    )
    out = {
        "W_log": constants.log_iteration_bound,
        "eps_log": constants.log_crossing_margin,
        "D": constants.cube_radius,
        "D_clamped": constants.cube_radius_clamped,
        "kappa": constants.kappa,
        "a": constants.a,
    }
    context = {
        "n": args.n, "d": args.d, "k": args.k, "a": args.a,
        "cube_radius": constants.cube_radius,
        "eps": args.eps, "delta": args.delta, "min_center_gap": args.min_gap,
    }
    names = []
    if args.delta is not None:
        names.append("sparse_drop")
    if args.eps is not None:
        names.extend(["separated_drop", "spreaded_drop"])
        if args.min_gap is not None:
            names.append("min_gap_drop")
    if names:
        bounds = props.drop_lower_bounds(context, names)
        out["drop_bounds"] = {
            name: {"log_value": b.log_value, "value": b.value}
            for name, b in bounds.items()
        }
    print(json.dumps(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kmeanslab",
        description="Instrumented k-means laboratory under Gaussian perturbation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the iteration on one instance")
    p_run.add_argument("--points", help="instance file with realized coordinates")
    p_run.add_argument("--means", help="means file (perturbed before running)")
    p_run.add_argument("--sigma", type=float)
    p_run.add_argument("--seed", type=int, default=0, help="perturbation seed")
    p_run.add_argument("--k", type=int, required=True)
    p_run.add_argument("--init", default="uniform-points", choices=engine.INIT_METHODS[:2])
    p_run.add_argument("--init-seed", type=int, default=0)
    p_run.add_argument("--max-iters", type=int, default=engine.DEFAULT_MAX_ITERATIONS)
    p_run.add_argument("--trace-out", help="write the run trace to this file")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--threads", type=int, default=_default_threads())
    p_sweep.set_defaults(func=_cmd_sweep)

    p_props = sub.add_parser("props", help="check a structural property")
    p_props.add_argument("--points", required=True)
    p_props.add_argument("--check", required=True,
                         choices=["separated", "sparse", "spreaded"])
    p_props.add_argument("--eps", type=float)
    p_props.add_argument("--delta", type=float)
    p_props.add_argument("--s-cap", type=int, default=4)
    p_props.add_argument("--t-cap", type=int, default=3)
    p_props.add_argument("--size-cap", type=int, default=2)
    p_props.add_argument("--subset-budget", type=int, default=100_000)
    p_props.set_defaults(func=_cmd_props)

    p_verify = sub.add_parser("verify", help="Monte Carlo check of a probability bound")
    p_verify.add_argument("--lemma", required=True,
                          choices=["tail", "spreaded-prob", "separation-prob",
                                   "delta-bound", "single-point"])
    p_verify.add_argument("--trials", type=int, default=10_000)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--n", type=int, default=10)
    p_verify.add_argument("--d", type=int, default=1)
    p_verify.add_argument("--k", type=int, default=2)
    p_verify.add_argument("--sigma", type=float, default=0.5)
    p_verify.add_argument("--eps", type=float, default=1e-3)
    p_verify.add_argument("--delta", type=float, default=1e-6)
    p_verify.add_argument("--t", type=float, default=1.0)
    p_verify.add_argument("--mu", type=float, default=0.0)
    p_verify.add_argument("--ell", type=int, default=0)
    p_verify.add_argument("--origin", default="[0.0, 0.0]", help="JSON point")
    p_verify.add_argument("--partner", default="[0.0, 1.0]", help="JSON point")
    p_verify.set_defaults(func=_cmd_verify)

    p_const = sub.add_parser("constants", help="print the model constants")
    p_const.add_argument("--n", type=int, required=True)
    p_const.add_argument("--d", type=int, required=True)
    p_const.add_argument("--k", type=int, required=True)
    p_const.add_argument("--a", type=int, default=1)
    p_const.add_argument("--sigma", type=float, required=True)
    p_const.add_argument("--kappa", type=float, default=1.0)
    p_const.add_argument("--D", type=float, help="override the hypercube radius")
    p_const.add_argument("--eps", type=float)
    p_const.add_argument("--delta", type=float)
    p_const.add_argument("--min-gap", type=float)
    p_const.set_defaults(func=_cmd_constants)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KmeansLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
