"""Command line front end.

Each subcommand loads a YAML config (optional), applies flag overrides,
runs one experiment driver, and prints its JSON summary to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

from .experiments import (
    ExperimentConfig,
    run_baire_example,
    run_bound_audit,
    run_ensemble,
    run_kahane_from_config,
    run_profile,
    run_sharpness,
)

_RUNNERS = {
    "profile": run_profile,
    "sharpness": run_sharpness,
    "ensemble": run_ensemble,
    "bound-audit": run_bound_audit,
    "baire": run_baire_example,
    "kahane": run_kahane_from_config,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--out", help="output directory for CSV/JSON artifacts")
    p.add_argument("--seed", type=int)
    p.add_argument("--kmax", type=int, help="number of decades of s to sweep")
    p.add_argument("--trials", type=int)
    p.add_argument("--eta", help="gap-statistic thresholds, comma separated")
    p.add_argument("--delta", type=float)
    p.add_argument("--sequence", help="coefficient family label")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wvlab",
        description="growth statistics of random power series in the unit disk",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "profile": "deterministic radius sweep of growth statistics",
        "sharpness": "ratio against the universal half-power ceiling",
        "ensemble": "Monte Carlo rotations, gap statistics, exceptional sets",
        "bound-audit": "index-moment and G ceilings along the grid",
        "baire": "two-sided ratio for the stretched-exponential family",
        "kahane": "alignment search for a cosine sum on a short interval",
    }
    for name, text in helps.items():
        _add_common(sub.add_parser(name, help=text))
    return ap


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.from_yaml(args.config)
    else:
        cfg = ExperimentConfig()
    if args.out is not None:
        cfg.out = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    if args.kmax is not None:
        cfg.grid = dict(cfg.grid, k_max=args.kmax)
    if args.trials is not None:
        cfg.trials = args.trials
    if args.eta:
        cfg.eta = [float(v) for v in args.eta.split(",") if v.strip()]
    if args.delta is not None:
        cfg.delta = args.delta
    if args.sequence is not None:
        cfg.sequence = dict(cfg.sequence, label=args.sequence)
    cfg.raw = cfg.to_dict()
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    summary = _RUNNERS[args.command](cfg)
    json.dump(summary, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
