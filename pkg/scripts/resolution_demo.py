#!/usr/bin/env python3
"""Single-image demo: generate, measure correlation lengths, auto-decimate.

Builds a disk packing whose structures span tens of pixels, picks the
largest number of halvings that keeps at least three samples per
correlation length, and prints the per-step descriptor errors.

Example:
    python3 scripts/resolution_demo.py --size 768 --method bilinear --plot
"""
from __future__ import annotations

import argparse
from pathlib import Path

from decimstat import (
    DESCRIPTOR_NAMES,
    DecimationMethod,
    DiskMaterialSpec,
    auto_decimate,
    place_disks,
    save,
)


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=768)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--method", choices=["random", "bilinear", "bicubic"],
                        default="bilinear")
    parser.add_argument("--disks", type=int, default=1122)
    parser.add_argument("--rmax", type=int, default=25)
    parser.add_argument("--mu", type=float, default=10.0)
    parser.add_argument("--sigma", type=float, default=4.0)
    parser.add_argument("--out", type=Path, default=Path("out/resolution_demo"))
    parser.add_argument("--plot", action="store_true")
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    spec = DiskMaterialSpec(variant="overlapping", disk_count=args.disks, r_min=1,
                            r_max=args.rmax, mu=args.mu, sigma=args.sigma,
                            side=args.size, seed=args.seed)
    img, records = place_disks(spec)
    print(f"generated {img.rows}x{img.cols} image with {len(records)} disks")

    method = DecimationMethod(args.method,
                              seed=args.seed if args.method == "random" else None)
    result = auto_decimate(img, method)
    for (kind, phase), cl in sorted(result.correlation_lengths.items()):
        flag = "" if cl.converged else "  [not converged]"
        print(f"  {DESCRIPTOR_NAMES[kind]} phase {phase}: length {cl.length:g}{flag}")
    print(f"characteristic length {result.characteristic_length:g} "
          f"-> {result.optimal_step} halvings "
          f"-> {result.image.rows}x{result.image.cols}")
    for step in result.report.steps:
        print(f"  step {step.step}: {step.rows}x{step.cols}, "
              f"global error {step.error:.3e}")

    save(img, args.out / "original.pbm")
    save(result.image, args.out / "decimated.pbm")
    print(f"wrote images to {args.out}")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, axes = plt.subplots(1, 2, figsize=(9, 4.5))
        axes[0].imshow(img.pixels, cmap="gray", interpolation="nearest")
        axes[0].set_title(f"original {img.rows}²")
        axes[1].imshow(result.image.pixels, cmap="gray", interpolation="nearest")
        axes[1].set_title(f"after {result.optimal_step} halvings "
                          f"({result.image.rows}²)")
        for ax in axes:
            ax.set_xticks([])
            ax.set_yticks([])
        fig.tight_layout()
        fig.savefig(args.out / "comparison.png", dpi=150)
        print(f"wrote {args.out / 'comparison.png'}")


if __name__ == "__main__":
    main()
