"""Command-line entry point: ``topohog {ingest,extract,benchmark,analyze-betti}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import ml, pipeline


def _default_path(name):
    return os.path.join(pipeline.default_cache_dir(), name)


def cmd_ingest(args):
    entries = pipeline.ingest(args.manifest, args.images)
    out = args.out or _default_path("index.csv")
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    pipeline.write_index(entries, out)
    counts = pipeline.class_counts(entries, "five") if entries else {}
    print(f"{len(entries)} samples -> {out}")
    for grade, n in counts.items():
        print(f"  grade {grade}: {n}")


def cmd_extract(args):
    entries = pipeline.read_index(args.index)
    out = args.out or _default_path(f"{args.kind}_features.csv")
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    summary = pipeline.extract(entries, args.kind, out, n_jobs=args.jobs)
    print(f"{summary['written']} written, {summary['skipped']} already present, "
          f"{summary['failed']} failed -> {summary['path']}")
    return 1 if summary["failed"] else 0


def cmd_benchmark(args):
    models = args.models or list(ml.MODEL_KINDS)
    pipeline.run_benchmark(args.features, args.task, models, args.seed, args.out,
                           folds=args.folds, n_jobs=args.jobs, svg=args.svg)
    with open(os.path.join(args.out, "summary.txt")) as fh:
        sys.stdout.write(fh.read())


def cmd_analyze(args):
    bands = pipeline.analyze_betti(args.features, args.task, args.coverage, args.out, svg=args.svg)
    print(f"{len(bands)} bands -> {os.path.join(args.out, 'betti_bands.csv')}")


def build_parser():
    parser = argparse.ArgumentParser(prog="topohog", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="index a labelled image folder")
    p.add_argument("manifest", help="CSV with id_code and diagnosis columns")
    p.add_argument("images", help="directory holding <id>.png / .jpg files")
    p.add_argument("-o", "--out", help=f"index CSV (default: ${pipeline.CACHE_ENV}/index.csv)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("extract", help="compute a feature file from an index")
    p.add_argument("index", help="index CSV written by 'ingest'")
    p.add_argument("--kind", choices=("tda", "hog"), required=True)
    p.add_argument("-o", "--out", help="feature CSV (default: cache dir)")
    p.add_argument("-j", "--jobs", type=int, default=0, help="worker processes (0 = all CPUs)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("benchmark", help="cross-validate classifiers on a feature file")
    p.add_argument("features")
    p.add_argument("--task", choices=pipeline.TASKS, required=True)
    p.add_argument("--models", nargs="+", choices=ml.MODEL_KINDS, metavar="MODEL",
                   help=f"subset of: {' '.join(ml.MODEL_KINDS)} (default: all)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("-o", "--out", default="benchmark")
    p.add_argument("-j", "--jobs", type=int, default=0, help="worker processes (0 = all CPUs)")
    p.add_argument("--svg", action="store_true", help="also write roc.svg")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("analyze-betti", help="class median Betti curves with bands")
    p.add_argument("features", help="tda feature file")
    p.add_argument("--task", choices=pipeline.TASKS, default="binary")
    p.add_argument("--coverage", type=float, default=0.4)
    p.add_argument("-o", "--out", default="betti")
    p.add_argument("--svg", action="store_true", help="also write one SVG per channel and dim")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args) or 0
    except (ValueError, FileNotFoundError) as exc:
        print(f"topohog {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
