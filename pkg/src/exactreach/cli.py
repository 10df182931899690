"""Command line entry point: ``exactreach check`` and ``exactreach bench``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ExactReachError
from .modelfile import read_model
from .pipeline import ResultStatus, RunOptions, benchmark, result_to_json, result_to_text, run, write_csv


def _common(p, bench=False):
    p.add_argument("--objective", choices=["max", "min"], required=True)
    p.add_argument("--target", required=True, help="label naming the target states")
    both = ["both"] if bench else []
    if bench:
        p.add_argument("--epsilon", default="1e-6",
                       help="value-iteration threshold; a comma-separated list sweeps several")
    else:
        p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--simplex", choices=["dual", "primal", *both], default="both" if bench else "dual")
    p.add_argument("--start-basis", choices=["scheduler", "default", *both],
                   default="both" if bench else "scheduler")
    p.add_argument("--repair-apt", action="store_true",
                   help="retry with targets-first tie breaking if the scheduler is not apt")
    p.add_argument("--iteration-limit", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exactreach",
                                     description="Exact reachability probabilities for MDPs.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="model check one file")
    check.add_argument("file", type=Path)
    _common(check)
    check.add_argument("--format", choices=["text", "json"], default="text")
    check.add_argument("--pivot-log", action="store_true", help="print one line per pivot to stderr")
    check.add_argument("--no-timings", action="store_true",
                       help="report zero timings so the output is reproducible byte for byte")

    bench = sub.add_parser("bench", help="benchmark every .mdp file in a directory")
    bench.add_argument("dir", type=Path)
    _common(bench, bench=True)
    bench.add_argument("--csv", type=Path, required=True, help="output CSV file ('-' for stdout)")
    return parser


def _check(args) -> int:
    model = read_model(args.file)
    if args.target not in model.labels:
        print(f"exactreach: unknown label {args.target!r}", file=sys.stderr)
        return 2
    opts = RunOptions(epsilon=args.epsilon, simplex=args.simplex, start_basis=args.start_basis,
                      repair_apt=args.repair_apt, iteration_limit=args.iteration_limit)
    result = run(model, args.objective, args.target, opts)
    if args.format == "json":
        print(result_to_json(result, include_timings=not args.no_timings))
    else:
        sys.stdout.write(result_to_text(result, include_timings=not args.no_timings))
    if args.pivot_log:
        sys.stderr.write(result.pivot_log)
    return 0 if result.status is ResultStatus.EXACT else 1


def _bench(args) -> int:
    files = sorted(args.dir.glob("*.mdp")) if args.dir.is_dir() else [args.dir]

    def models():
        for f in files:
            try:
                yield f.name, read_model(f)
            except (OSError, ExactReachError) as exc:
                print(f"exactreach: skipping {f}: {exc}", file=sys.stderr)

    split = lambda v: ["dual", "primal"] if v == "both" else [v]
    bases = ["scheduler", "default"] if args.start_basis == "both" else [args.start_basis]
    epsilons = [float(e) for e in args.epsilon.split(",") if e.strip()]
    rows = benchmark(models(), args.objective, args.target, epsilons, split(args.simplex), bases,
                     RunOptions(repair_apt=args.repair_apt, iteration_limit=args.iteration_limit))
    if str(args.csv) == "-":
        write_csv(rows, sys.stdout)
    else:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            write_csv(rows, fh)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _check(args) if args.command == "check" else _bench(args)
    except (OSError, ExactReachError, ValueError) as exc:
        print(f"exactreach: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
