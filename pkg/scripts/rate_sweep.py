"""Ergodic rate curves for the reference link, with a summary of the orderings at 12 dB.

    python scripts/rate_sweep.py --out results/rate_sweep.csv [--trials 500] [--workers 4]
"""
import argparse
import math
from pathlib import Path

import yaml

from densemimo import io
from densemimo.experiment import ExperimentConfig, run_sweep

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "rate_sweep.yaml"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/rate_sweep.csv")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    values = yaml.safe_load(CONFIG.read_text())
    if args.trials:
        values["trials"] = args.trials
    values["workers"] = args.workers
    points = run_sweep(ExperimentConfig.from_mapping(values))

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    io.emit(points, "csv", out)
    print(f"wrote {len(points)} rows to {out}")

    at = {(p.scheme, p.dt): p for p in points if p.snr_db == 12.0}
    if not at:
        return
    print("normalized rate at 12 dB (nats per 2 min(Lt, Lr)):")
    for (scheme, dt), p in sorted(at.items()):
        print(f"  {scheme:8s} dt={dt:<6} {p.normalized_rate:.4f} +- {p.stderr:.4f}")
    for hi, lo in [(("gaussian", 0.5), ("gaussian", 0.25)), (("qpsk", 0.25), ("qpsk", 0.5)), (("qam16", 0.5), ("qpsk", 0.25))]:
        m = at[hi].normalized_rate - at[lo].normalized_rate
        s = math.hypot(at[hi].stderr, at[lo].stderr)
        print(f"  {hi} - {lo}: {m:+.4f} ({m / s:.1f} se)")


if __name__ == "__main__":
    main()
