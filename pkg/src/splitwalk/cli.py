"""Command-line entry point.

    splitwalk run        --config cfg.json [--seed S] [--out DIR] [--parallelism K]
    splitwalk histogram  --config cfg.json [...same flags]
    splitwalk reference  --config cfg.json [...same flags]

The config file is one JSON document mirroring ExperimentConfig; the flags
override its values.  Exit codes: 0 success, 2 config error, 3 runtime
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, SplitwalkError
from .experiment import (
    ExperimentConfig,
    run_experiment,
    run_histogram,
    run_reference,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitwalk",
        description=(
            "Rare-event probability estimation by increasing random walks"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "replicated estimation runs (rows.csv + summary.json)"),
        ("histogram", "per-batch count histograms with theoretical overlays"),
        ("reference", "crude Monte Carlo reference values"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="override seed")
        p.add_argument("--out", default=None, help="override output directory")
        p.add_argument(
            "--parallelism", type=int, default=None, help="override worker count"
        )
    return parser


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    try:
        raw = json.loads(Path(args.config).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    cfg = ExperimentConfig.from_dict(raw)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.parallelism is not None:
        overrides["parallelism"] = args.parallelism
    if overrides:
        cfg = cfg.replace(**overrides)
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        if args.command == "run":
            run_experiment(cfg)
        elif args.command == "histogram":
            run_histogram(cfg)
        else:
            run_reference(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SplitwalkError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
