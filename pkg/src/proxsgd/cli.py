"""Command-line entry point.

Subcommands:
  run <config.toml>   execute a benchmark suite (CSV traces + summary)
  summarize <dir>     pretty-print a previous run's summary.csv
  selftest            run the built-in invariant checks

Exit codes: 0 success, 1 configuration error, 2 a run hit a numeric failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .bench import load_config, run_suite, summarize
from .core import ConfigError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proxsgd",
        description="Stochastic proximal gradient benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute the runs in a TOML config")
    p_run.add_argument("config", help="path to the TOML config file")
    p_run.add_argument("--output", "-o", default=None,
                       help="output directory (default: [suite].output_dir or bench_out)")
    p_run.add_argument("--jobs", type=int, default=None,
                       help="worker processes (default: [suite].jobs or 1)")
    p_run.add_argument("--seed", type=int, default=None,
                       help="override every run's seed")
    p_run.add_argument("--max-iters", type=int, default=None,
                       help="override every run's max_iters")

    p_sum = sub.add_parser("summarize", help="print the summary table of an output dir")
    p_sum.add_argument("output_dir")

    sub.add_parser("selftest", help="run built-in invariant checks")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "selftest":
        from .selftest import selftest
        return 0 if selftest() else 1

    try:
        if args.command == "summarize":
            print(summarize(args.output_dir))
            return 0

        configs, suite = load_config(args.config)
        if args.seed is not None:
            configs = [dataclasses.replace(c, seed=args.seed) for c in configs]
        if args.max_iters is not None:
            configs = [dataclasses.replace(c, max_iters=args.max_iters) for c in configs]
        output = args.output or suite.get("output_dir", "bench_out")
        jobs = args.jobs if args.jobs is not None else int(suite.get("jobs", 1))
        results, _ = run_suite(configs, output, jobs=jobs)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1

    failures = [r for r in results if r.outcome == "numeric_failure"]
    for r in failures:
        print(f"numeric failure in {r.trace_file}: {r.error}", file=sys.stderr)
    return 2 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
