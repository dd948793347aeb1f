"""Command-line front end: build an ExperimentSpec from flags (and/or a JSON
config), run the grid, and write/print the regret records."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .harness import ExperimentSpec, format_summary, run_experiment, summarize


def build_parser():
    p = argparse.ArgumentParser(
        prog="zipftree",
        description="Run hierarchical-partitioning optimizer experiments and "
                    "emit simple-regret records as CSV.")
    p.add_argument("--config", metavar="PATH",
                   help="JSON file with ExperimentSpec fields; "
                        "flags below override it")
    p.add_argument("--algo", action="append", metavar="NAME",
                   help="algorithm to run: sequool, stroquool, soo, uniform, "
                        "or doo:NU:RHO (repeatable)")
    p.add_argument("--objective", metavar="NAME",
                   help="benchmark objective: garland or wrapped-sine")
    p.add_argument("--budget", action="append", metavar="N",
                   help="evaluation budget(s); repeatable, commas allowed "
                        "(e.g. --budget 100,1000)")
    p.add_argument("--noise-b", action="append", metavar="B",
                   help="noise half-range(s) b >= 0; repeatable, commas allowed")
    p.add_argument("--seeds", type=int, metavar="COUNT",
                   help="number of repeats per grid point (default 20)")
    p.add_argument("--delta", type=float, metavar="D",
                   help="confidence parameter in (0, 1) (default 0.05)")
    p.add_argument("--branching", type=int, metavar="K",
                   help="children per split (default 3)")
    p.add_argument("--out", metavar="PATH",
                   help="CSV output path (default: print records to stdout)")
    p.add_argument("--master-seed", type=int, metavar="SEED",
                   help="root seed for the per-run seed derivation (default 0)")
    p.add_argument("--jobs", type=int, default=1, metavar="J",
                   help="parallel worker processes (default 1)")
    p.add_argument("--summary", action="store_true",
                   help="print a median-regret table after the run")
    return p


def _split_multi(values):
    """["100,1000", "250"] -> ["100", "1000", "250"]"""
    out = []
    for v in values:
        out.extend(tok for tok in str(v).split(",") if tok)
    return out


def spec_from_args(args) -> ExperimentSpec:
    fields = {}
    if args.config:
        with open(args.config) as fh:
            fields = json.load(fh)
    if args.algo:
        fields["algorithms"] = _split_multi(args.algo)
    if args.objective:
        fields["objective"] = args.objective
    if args.budget:
        fields["budgets"] = [int(v) for v in _split_multi(args.budget)]
    if args.noise_b:
        fields["noise_b"] = [float(v) for v in _split_multi(args.noise_b)]
    for flag, key in (("seeds", "seeds"), ("delta", "delta"),
                      ("branching", "branching"), ("out", "out"),
                      ("master_seed", "master_seed")):
        value = getattr(args, flag)
        if value is not None:
            fields[key] = value
    missing = [k for k in ("algorithms", "objective", "budgets")
               if not fields.get(k)]
    if missing:
        raise ValueError("missing required settings: " + ", ".join(missing)
                         + " (pass --algo/--objective/--budget or --config)")
    return ExperimentSpec(**fields)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = spec_from_args(args)
        to_stdout = spec.out is None
        if to_stdout:
            # run_experiment streams CSV to spec.out; use a temp file, then echo
            tmp = tempfile.NamedTemporaryFile(
                mode="w", suffix=".csv", delete=False)
            tmp.close()
            spec.out = tmp.name
        records = run_experiment(spec, jobs=args.jobs)
        if to_stdout:
            with open(spec.out) as fh:
                sys.stdout.write(fh.read())
            os.unlink(spec.out)
        if args.summary:
            print(format_summary(summarize(records)))
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
