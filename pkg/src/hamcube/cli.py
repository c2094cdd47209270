"""Command-line interface.

Subcommands: gen, plan, embed, estimate, verify, bench.  Exit codes
follow one contract everywhere: 0 success, 1 failed check or I/O
problem, 2 usage error, 3 infeasible plan.  Plans travel between
commands as explicit JSON files so every later stage is reproducible
from artifacts alone.
"""

import argparse
import dataclasses
import json
import math
import os
import sys

from .complexity import greedy_net, localized_width
from .config import load_config
from .data import (
    GeneratorSpec,
    generate,
    read_codes,
    read_points,
    write_codes,
    write_points,
    write_report,
)
from .operators import build_double_circulant, build_gaussian
from .quantize import (
    EmbeddingPlan,
    PlanInfeasibleError,
    dither_scale_and_net_scale,
    embed_points,
    estimate_distance,
    hamming,
    make_dither,
    plan_parameters,
)
from .suites import run_suite
from .verify import bench_rows_to_csv, bench_scaling

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


def _fail(message, code):
    print(f"error: {message}", file=sys.stderr)
    return code


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _figure_path(out_path):
    stem, _ = os.path.splitext(out_path)
    return stem + ".png"


def cmd_gen(args, config):
    try:
        spec = GeneratorSpec(
            kind=args.kind, count=args.count, n=args.n, seed=args.seed,
            r=args.r, d=args.d, clusters=args.clusters, spread=args.spread,
        )
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        write_points(args.out, generate(spec))
    except OSError as exc:
        return _fail(str(exc), EXIT_FAIL)
    return EXIT_OK


def cmd_plan(args, config):
    try:
        T = read_points(args.points)
    except (OSError, ValueError) as exc:
        return _fail(str(exc), EXIT_FAIL)
    radius = T.radius()
    delta = args.delta
    if not 0 < delta <= radius / 2:
        return _fail(
            f"infeasible plan: requires 0 < delta < R/2 (delta={delta}, R={radius:.6g})",
            EXIT_INFEASIBLE,
        )
    constants = config.constants()
    try:
        _, theta = dither_scale_and_net_scale(radius, delta, constants)
        if args.theta is not None:
            theta = args.theta
        net = greedy_net(T, theta)
        width = localized_width(T, theta, trials=config.trials, seed=config.seed)
        plan = plan_parameters(
            radius, delta,
            net_size=math.log(net.count),
            local_width_sq=width.value,
            constants=constants,
            **({"kappa": config.kappa} if config.kappa else {}),
        )
    except PlanInfeasibleError as exc:
        return _fail(f"infeasible plan: {exc}", EXIT_INFEASIBLE)
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    if args.theta is not None:
        plan = dataclasses.replace(plan, theta=args.theta)
    doc = plan.to_dict()
    doc["measured"] = {
        "R": radius,
        "theta": theta,
        "net_count": net.count,
        "local_width_sq": width.value,
        "local_width_sq_error": width.std_error,
        "width_trials": width.trials,
        "seed": config.seed,
    }
    _write_text(args.out, json.dumps(doc, sort_keys=True) + "\n")
    return EXIT_OK


def _load_plan(path):
    with open(path, "r", encoding="utf-8") as fh:
        return EmbeddingPlan.from_dict(json.load(fh))


def cmd_embed(args, config):
    try:
        T = read_points(args.points)
        plan = _load_plan(args.plan)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(str(exc), EXIT_FAIL)
    try:
        if args.operator == "dc":
            op = build_double_circulant(T.n, plan.m, mode=args.index_mode, seed=args.seed)
            if args.index_mode == "selectors":
                print(f"realized rows |I| = {op.rows} (nominal m = {plan.m})",
                      file=sys.stderr)
        else:
            op = build_gaussian(T.n, plan.m, seed=args.seed)
    except (ValueError, RuntimeError) as exc:
        return _fail(f"plan/point dimension mismatch: {exc}", EXIT_USAGE)
    tau = make_dither(op.rows, plan.lam, seed=args.seed)
    try:
        write_codes(args.out, embed_points(op, tau, T.points))
    except OSError as exc:
        return _fail(str(exc), EXIT_FAIL)
    return EXIT_OK


def _parse_pairs(spec_text, count):
    if spec_text == "all":
        return [(i, j) for i in range(count) for j in range(i + 1, count)]
    pairs = []
    for token in spec_text.split(","):
        left, sep, right = token.partition(":")
        if not sep:
            raise ValueError(f"bad pair {token!r}, expected i:j")
        i, j = int(left), int(right)
        if not (0 <= i < count and 0 <= j < count):
            raise ValueError(f"pair {token!r} out of range for {count} codes")
        pairs.append((i, j))
    return pairs


def cmd_estimate(args, config):
    try:
        codes = read_codes(args.codes)
        plan = _load_plan(args.plan)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(str(exc), EXIT_FAIL)
    m = codes[0].m
    if not plan.m / 2 <= m <= 3 * plan.m / 2:
        return _fail(
            f"code length {m} inconsistent with plan m={plan.m} "
            "(beyond the selector-mode row band)",
            EXIT_USAGE,
        )
    try:
        pairs = _parse_pairs(args.pairs, len(codes))
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    lines = ["i,j,d_hamming,estimate"]
    for i, j in pairs:
        d_h = hamming(codes[i], codes[j])
        est = estimate_distance(codes[i], codes[j], plan)
        lines.append(f"{i},{j},{d_h},{est!r}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args, config):
    if config.threads:
        os.environ["HC_THREADS"] = str(config.threads)
    acceptance = None
    if config.acceptance:
        from .config import load_acceptance

        acceptance = load_acceptance(config.acceptance)
    report = run_suite(args.suite, seeds=args.seeds, base_seed=config.seed,
                       acceptance=acceptance)
    if args.out:
        try:
            write_report(args.out, report)
        except OSError as exc:
            return _fail(str(exc), EXIT_FAIL)
        if not args.no_plot:
            from .figures import render_report_figure

            render_report_figure(report, _figure_path(args.out))
    else:
        from .data import report_to_json

        sys.stdout.write(report_to_json(report) + "\n")
    for check in report.checks:
        if not check.passed:
            print(f"FAILED {check.name}: observed {check.observed!r} vs "
                  f"threshold {check.threshold!r}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_bench(args, config):
    try:
        n_list = [int(tok) for tok in args.n_list.split(",") if tok]
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    if not n_list:
        return _fail("empty n-list", EXIT_USAGE)
    for n in n_list:
        if n < 2 or n & (n - 1):
            return _fail(f"n={n} is not a power of two", EXIT_USAGE)
    if args.reps < 1:
        return _fail("reps must be >= 1", EXIT_USAGE)
    if any(args.m > n for n in n_list):
        return _fail(f"m={args.m} exceeds the smallest n", EXIT_USAGE)
    rows = bench_scaling(n_list, args.m, args.reps, seed=config.seed)
    _write_text(args.out, bench_rows_to_csv(rows))
    if args.out and args.out != "-" and not args.no_plot:
        from .figures import render_bench_figure

        render_bench_figure(rows, _figure_path(args.out))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hamcube",
        description="Fast binary embeddings of Euclidean point sets.",
    )
    parser.add_argument("--config", help="key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic point set")
    p.add_argument("--kind", required=True,
                   choices=["sphere", "sparse", "subspace", "clusters", "grid"])
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=int, help="nonzeros per point (sparse)")
    p.add_argument("--d", type=int, help="subspace dimension (subspace)")
    p.add_argument("--clusters", type=int, help="cluster count (clusters)")
    p.add_argument("--spread", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("plan", help="derive embedding parameters for a point set")
    p.add_argument("points")
    p.add_argument("--delta", type=float, required=True,
                   help="additive distance accuracy")
    p.add_argument("--theta", type=float,
                   help="override the derived net resolution")
    for name in ("c0", "c1", "c2", "c3", "kappa"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--trials", type=int, help="width Monte Carlo trials")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="plan JSON path (default stdout)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("embed", help="embed points into binary codes")
    p.add_argument("points")
    p.add_argument("plan")
    p.add_argument("--operator", choices=["dc", "gauss"], default="dc")
    p.add_argument("--index-mode", choices=["fixed", "selectors"], default="fixed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("estimate", help="estimate distances from codes")
    p.add_argument("codes")
    p.add_argument("plan")
    p.add_argument("--pairs", default="all",
                   help='"all" or comma-separated i:j pairs')
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True,
                   choices=["spectral", "operator", "l1", "spread",
                            "regularity", "distortion", "all"])
    p.add_argument("--seeds", type=int, default=100,
                   help="trials for replicated probabilistic checks")
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--out", help="report JSON path (default stdout)")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the figure next to the report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time operator applies across sizes")
    p.add_argument("--n-list", default="16384,32768,65536,131072",
                   help="comma-separated powers of two")
    p.add_argument("--m", type=int, default=256)
    p.add_argument("--reps", type=int, default=25)
    p.add_argument("--seed", type=int, help="operator seed")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the figure next to the CSV")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    overrides = {}
    for key in ("c0", "c1", "c2", "c3", "kappa", "trials", "seed"):
        if getattr(args, key, None) is not None:
            overrides[key] = getattr(args, key)
    try:
        config = load_config(args.config, overrides)
    except (OSError, ValueError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    return args.func(args, config)


if __name__ == "__main__":
    sys.exit(main())
