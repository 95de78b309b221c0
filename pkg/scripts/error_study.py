#!/usr/bin/env python3
"""Ensemble study of statistical-information loss under repeated halving.

Generates a seeded ensemble of overlapping-disk images, decimates each with
all three methods, and records the global descriptor error and the
coarseness trace per step.  Writes CSVs (and PNG plots with --plot) into the
output directory.

Example:
    python3 scripts/error_study.py --size 1024 --seeds 5 --max-step 6 --plot
"""
from __future__ import annotations

import argparse
import csv
from pathlib import Path

import numpy as np

from decimstat import (
    DecimationMethod,
    DiskMaterialSpec,
    characterize,
    correlation_length,
    ladder_report,
    optimal_steps,
    place_disks,
)

METHODS = ("random", "bilinear", "bicubic")


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=1024)
    parser.add_argument("--seeds", type=int, default=5, help="number of realizations")
    parser.add_argument("--max-step", type=int, default=6)
    parser.add_argument("--disks", type=int, default=507)
    parser.add_argument("--rmax", type=int, default=50)
    parser.add_argument("--mu", type=float, default=20.0)
    parser.add_argument("--sigma", type=float, default=7.5)
    parser.add_argument("--out", type=Path, default=Path("out/error_study"))
    parser.add_argument("--plot", action="store_true", help="also write PNG figures")
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    steps = np.arange(args.max_step + 1)
    errors = {kind: [] for kind in METHODS}
    coarseness = []
    optimal = []
    for seed in range(args.seeds):
        spec = DiskMaterialSpec(variant="overlapping", disk_count=args.disks,
                                r_min=1, r_max=args.rmax, mu=args.mu,
                                sigma=args.sigma, side=args.size, seed=seed)
        img, _ = place_disks(spec)
        ell = min(correlation_length(c).length
                  for c in characterize(img).curves.values())
        optimal.append(optimal_steps(ell, img.rows, img.cols))
        for kind in METHODS:
            method = DecimationMethod(kind, seed=seed if kind == "random" else None)
            report = ladder_report(img, method, args.max_step)
            errors[kind].append(report.errors())
            if kind == METHODS[0]:
                coarseness.append([p.value for p in report.coarseness])
        print(f"seed {seed}: correlation length {ell:g}, optimal step {optimal[-1]}")

    for kind in METHODS:
        data = np.array(errors[kind])
        with (args.out / f"global_error_{kind}.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "mean", "std"])
            for k in steps:
                writer.writerow([k, f"{data[:, k].mean():.12g}", f"{data[:, k].std():.12g}"])
    coarse = np.array(coarseness)
    with (args.out / "coarseness.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "mean", "std"])
        for k in steps:
            writer.writerow([k, f"{coarse[:, k].mean():.12g}", f"{coarse[:, k].std():.12g}"])
    print(f"optimal steps per seed: {optimal}")
    print(f"wrote CSVs to {args.out}")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
        for kind in METHODS:
            data = np.array(errors[kind])
            ax1.errorbar(steps[1:], data.mean(axis=0)[1:], yerr=data.std(axis=0)[1:],
                         marker="o", capsize=3, label=kind)
        ax1.axvline(np.mean(optimal), color="gray", ls="--", label="mean optimal step")
        ax1.set(xlabel="decimation step k", ylabel="global descriptor error", yscale="log")
        ax1.legend()
        ax2.errorbar(steps, coarse.mean(axis=0), yerr=coarse.std(axis=0),
                     marker="s", capsize=3, color="tab:green")
        ax2.axhline(0.9, color="gray", ls="--")
        ax2.set(xlabel="decimation step k", ylabel="coarseness")
        fig.tight_layout()
        fig.savefig(args.out / "error_study.png", dpi=150)
        print(f"wrote {args.out / 'error_study.png'}")


if __name__ == "__main__":
    main()
