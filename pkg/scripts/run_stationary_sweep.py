#!/usr/bin/env python3
"""Stationary-target accuracy sweep: CS solvers vs the IDFT baseline.

Reproduces the stationary benchmark (N = 70 pulses on a 100-point range
grid, K = 5 targets) across a range of SNRs and writes accuracy.csv plus a
manifest to the output directory.

Usage:
    python3 scripts/run_stationary_sweep.py [--out results/stationary] [--trials 100]
"""

import argparse
import json
import sys
from pathlib import Path

from sfrcs.cli import main as cli_main


def run(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/stationary")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    config = {
        "preset": "stationary-paper",
        "sweep": {
            "detectors": ["dantzig", "bpdn", "omp", "idft"],
            "pulse_counts": [70],
            "snr_db": ["noiseless", 0.0, 5.0, 10.0, 15.0, 20.0],
            "n_trials": args.trials,
        },
        "master_seed": args.seed,
    }
    cfg_path = out / "config.json"
    cfg_path.write_text(json.dumps(config, indent=2))
    return cli_main(["sweep", "--config", str(cfg_path), "--out", str(out),
                     "--threads", str(args.threads)])


if __name__ == "__main__":
    sys.exit(run())
