"""Command line front end.

avglab run --config FILE [--out DIR] [--seed U64] [--threads K]
    Run one registered experiment from a TOML config.  Writes the
    per-sample trace CSV and the summary JSON into the output
    directory, prints the summary path, and exits 0 when the
    experiment's predicate passed, 2 when it failed, 1 on any config
    or runtime error.  AVGLAB_PRECISION_BUDGET_MB caps orbit memory.

avglab list
    One line per registered experiment, stable order.

avglab orbit --alpha SPEC --x VALUE --n COUNT
    Print the certified fractional orbit as CSV on stdout.
"""

from __future__ import annotations

import argparse
import os
import sys

from .experiments import (
    ConfigError,
    EXPERIMENTS,
    parse_config,
    run_experiment,
    write_summary,
    write_trace,
)
from .orbits import Multiplier, SeedPoint, generate_orbit


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="avglab",
        description="averaging experiments along exponential orbits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment from a TOML config")
    run.add_argument("--config", required=True, help="path to the TOML config")
    run.add_argument("--out", default=".",
                     help="directory for the trace CSV and summary JSON")
    run.add_argument("--seed", type=int, default=None,
                     help="override sampling.seed")
    run.add_argument("--threads", type=int, default=None,
                     help="worker threads; results are identical for any value")

    sub.add_parser("list", help="list the registered experiments")

    orbit = sub.add_parser("orbit", help="print one certified orbit as CSV")
    orbit.add_argument("--alpha", required=True,
                       help="multiplier spec, e.g. 2, 3/2, golden, 1+sqrt(2)")
    orbit.add_argument("--x", required=True,
                       help="seed value, e.g. 1, 0.3, 7/5")
    orbit.add_argument("--n", required=True, type=int, help="orbit length")
    return parser


def _budget_from_env():
    raw = os.environ.get("AVGLAB_PRECISION_BUDGET_MB")
    if raw is None:
        return None
    try:
        budget = float(raw)
    except ValueError:
        raise ConfigError("AVGLAB_PRECISION_BUDGET_MB",
                          f"not a number: {raw!r}")
    if not budget > 0:
        raise ConfigError("AVGLAB_PRECISION_BUDGET_MB",
                          f"must be positive, got {budget}")
    return budget


def _output_names(cfg):
    out = cfg.get("output", {})
    if not isinstance(out, dict):
        raise ConfigError("output", f"expected a table, got {out!r}")
    trace = out.get("trace", "trace.csv")
    summary = out.get("summary", "summary.json")
    for key, val in (("output.trace", trace), ("output.summary", summary)):
        if not isinstance(val, str) or not val:
            raise ConfigError(key, f"expected a file name, got {val!r}")
    return trace, summary


def _cmd_run(args):
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
    except OSError as e:
        print(f"avglab: cannot read config: {e}", file=sys.stderr)
        return 1
    trace_name, summary_name = _output_names(cfg)
    budget = _budget_from_env()
    result = run_experiment(cfg, seed=args.seed, threads=args.threads,
                            budget_mb=budget)
    os.makedirs(args.out, exist_ok=True)
    trace_path = os.path.join(args.out, trace_name)
    summary_path = os.path.join(args.out, summary_name)
    with open(trace_path, "w", encoding="utf-8", newline="") as fh:
        write_trace(result.rows, fh)
    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        write_summary(result.summary, fh)
    status = "pass" if result.passed else "FAIL"
    print(f"{result.summary['experiment']}: {status}")
    print(f"trace:   {trace_path}")
    print(f"summary: {summary_path}")
    return 0 if result.passed else 2


def _cmd_list(_args):
    for name in EXPERIMENTS:
        print(f"{name}: {EXPERIMENTS[name].statement}")
    return 0


def _cmd_orbit(args):
    multiplier = Multiplier.parse(args.alpha)
    seed = SeedPoint.exact(args.x)
    orbit = generate_orbit(multiplier, seed, args.n)
    print("n,frac")
    for i, v in enumerate(orbit.values(), start=1):
        print(f"{i},{format(v, '.17g')}")
    print(f"# guaranteed_abs_error = {orbit.guaranteed_abs_error:.3e}",
          file=sys.stderr)
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "list": _cmd_list, "orbit": _cmd_orbit}
    try:
        return handler[args.command](args)
    except ConfigError as e:
        print(f"avglab: config error: {e}", file=sys.stderr)
        return 1
    except (ValueError, TypeError, ArithmeticError, MemoryError, OSError) as e:
        print(f"avglab: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
