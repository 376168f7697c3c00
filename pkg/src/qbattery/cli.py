"""Command-line entry point: qbattery <experiment> --config file.toml"""
from __future__ import annotations

import argparse
import sys

from .config import EXPERIMENTS, ConfigError, load_config, validate
from .errors import BranchViolationError, MemoryGuardError
from .runner import run

try:
    from tomllib import TOMLDecodeError
except ImportError:
    from tomli import TOMLDecodeError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GUARD = 3
EXIT_IO = 4


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbattery",
        description="Stroboscopic charging experiments for a driven spin-chain battery.")
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", required=True, help="TOML experiment file")
    parser.add_argument("--out", help="CSV output path (overrides the config)")
    parser.add_argument("--workers", type=int,
                        help="worker processes; default = available parallelism")
    parser.add_argument("--seedless", action="store_true",
                        help="accepted for interface parity; every computation here "
                             "is deterministic and no RNG is used anywhere")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except (TOMLDecodeError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if cfg.experiment and cfg.experiment != args.experiment:
        print(f"config error: config is for {cfg.experiment!r}, "
              f"command line says {args.experiment!r}", file=sys.stderr)
        return EXIT_CONFIG
    cfg.experiment = args.experiment

    violations = validate(cfg)
    if violations:
        for item in violations:
            print(f"config error: {item}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        csv_path, json_path = run(cfg, out=args.out, workers=args.workers)
    except (MemoryGuardError, BranchViolationError) as exc:
        print(f"guard tripped: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
