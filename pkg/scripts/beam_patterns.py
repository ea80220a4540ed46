"""Beam pattern tables for L = 4 at critical (1/2) and dense (1/4) spacing.

    python scripts/beam_patterns.py --k 1 --k-dense 1 --outdir results
"""
import argparse
import math
from pathlib import Path

import numpy as np

from densemimo import io
from densemimo.array_geometry import ArrayConfig, beam_pattern


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--length", type=float, default=4.0)
    ap.add_argument("--k", type=int, default=1, help="beam index for the critical array")
    ap.add_argument("--k-dense", type=int, default=1, help="beam index for the dense array")
    ap.add_argument("--points", type=int, default=720)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    phi = 2 * math.pi * np.arange(args.points) / args.points
    for sep, k in ((0.5, args.k), (0.25, args.k_dense)):
        rows = [{"phi": a, "magnitude": m} for a, m in beam_pattern(ArrayConfig(args.length, sep), k, phi)]
        target = outdir / f"pattern_L{args.length:g}_d{sep:g}_k{k}.csv"
        io.emit(rows, "csv", target, columns=io.PATTERN_COLUMNS)
        peak = max(rows, key=lambda r: r["magnitude"])
        print(f"{target}: peak {peak['magnitude']:.3f} at phi={peak['phi']:.3f}")


if __name__ == "__main__":
    main()
