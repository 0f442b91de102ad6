"""Command line front end.

    subexp run <config.json> [--seed-override K] [--out DIR] [--jobs J]
    subexp check-axioms [--trials N] [--seed S]
    subexp inequality-grid <config.json> [--out DIR] [--jobs J]

Exit status 0 means every verdict passed; 1 means a verdict failed; 2 means
the run could not be executed (bad config or an unsatisfiable mode).
"""

from __future__ import annotations

import argparse
import sys

from .axioms import run_axiom_suite
from .config import parse_config
from .errors import SchemaError, SubexpError
from .runner import run


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subexp",
        description="Sub-linear expectation laboratory: experiments, axiom checks, bound grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a configured experiment")
    p_run.add_argument("config", help="path to a JSON run configuration")
    p_run.add_argument("--seed-override", type=int, default=None, metavar="K",
                       help="replace the config seed list with the single seed K")
    p_run.add_argument("--out", default=None, metavar="DIR",
                       help="output directory (default: config output_dir)")
    p_run.add_argument("--jobs", type=int, default=1, metavar="J",
                       help="worker threads for independent trials")

    p_ax = sub.add_parser("check-axioms", help="randomized axiom property suite")
    p_ax.add_argument("--trials", type=int, default=1000)
    p_ax.add_argument("--seed", type=int, default=20240)

    p_grid = sub.add_parser("inequality-grid", help="exact DP vs closed-form bound grid")
    p_grid.add_argument("config", help="path to a JSON config with experiment inequality_grid")
    p_grid.add_argument("--out", default=None, metavar="DIR")
    p_grid.add_argument("--jobs", type=int, default=1, metavar="J")

    return parser


def _load(path: str):
    with open(path) as fh:
        return parse_config(fh.read())


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "check-axioms":
        report = run_axiom_suite(trials=args.trials, seed=args.seed)
        for check in report.checks:
            status = "PASS" if check.ok else "FAIL"
            print(
                f"{status} {check.name}: trials={check.trials} "
                f"failures={check.failures} worst_gap={check.worst_gap:.3e}"
            )
        return 0 if report.ok else 1

    try:
        config = _load(args.config)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "inequality-grid" and config.experiment != "inequality_grid":
        print(
            f"error: config experiment is {config.experiment!r}, expected 'inequality_grid'",
            file=sys.stderr,
        )
        return 2

    try:
        seed_override = getattr(args, "seed_override", None)
        return run(config, out=args.out, seed_override=seed_override, jobs=args.jobs)
    except SubexpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
