"""Command-line experiment runner.

    bornlab <experiment> [--config cfg.json] [--out DIR] [--format csv|json]
                         [--seed N] [--setup doc.txt] [--no-figures]

Experiments: algebra-check, born-sweep, entropy-run, observable-demo,
amplitude-eval (the last one requires --setup).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .experiments import EXPERIMENT_NAMES, run_experiment
from .setupdoc import SetupDocumentError

__all__ = ["main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bornlab",
        description="lattice quantum laboratory: setup algebra, Born-rule "
                    "convergence, array entropy, complex detectors",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENT_NAMES:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=Path, default=None, help="JSON config file")
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="table format (default from config)")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for randomized inputs (overrides config)")
        p.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering")
        if name == "amplitude-eval":
            p.add_argument("--setup", type=Path, required=True,
                           help="setup document to evaluate")
        else:
            p.add_argument("--setup", type=Path, default=None, help=argparse.SUPPRESS)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = int(args.seed)
        if args.no_figures:
            cfg.figures = False
        setup_text = args.setup.read_text() if args.setup is not None else None
        manifest = run_experiment(
            args.experiment, cfg,
            out_dir=args.out, fmt=args.format, setup_text=setup_text,
        )
    except (ConfigError, SetupDocumentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out_dir = args.out if args.out is not None else Path(cfg.output_path)
    for kind in ("table", "figure", "manifest"):
        if kind in manifest["outputs"]:
            print(f"{kind}: {Path(out_dir) / manifest['outputs'][kind]}")
    for key, value in sorted(manifest["summary"].items()):
        print(f"  {key} = {value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
