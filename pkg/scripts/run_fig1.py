#!/usr/bin/env python3
"""Frequency sweep of stored energy at n = 100 (resonance structure)."""
import argparse
from pathlib import Path

from qbattery.config import load_config, validate
from qbattery.runner import run

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "fig1_sweep.toml"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(CONFIG))
    ap.add_argument("--out")
    ap.add_argument("--workers", type=int)
    args = ap.parse_args()
    cfg = load_config(args.config)
    problems = validate(cfg)
    if problems:
        raise SystemExit("\n".join(problems))
    csv_path, json_path = run(cfg, out=args.out, workers=args.workers)
    print(f"wrote {csv_path}")
    print(f"summary in {json_path}")


if __name__ == "__main__":
    main()
