"""Command-line interface: generate / characterize / decimate / autodecimate / experiment."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, analysis, decimation, descriptors, generators, image

log = logging.getLogger("decimstat")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

BASE_SIDE = 4096
DISK_PRESETS = {"id": ("impenetrable", 491), "od": ("overlapping", 640)}
LOG_THRESHOLDS = {"logk1": 127.50, "logk2": 127.00, "logk3": 126.75}
LOG_KERNEL_SIZE = 75
DISK_DEFAULTS = {"rmin": 1, "rmax": 250, "mu": 50.0, "sigma": 60.0}


def _out_dir() -> Path:
    return Path(os.environ.get("DECIMSTAT_OUT", "."))


def _resolve_out(path: str) -> Path:
    p = Path(path)
    return p if p.is_absolute() else _out_dir() / p


def _write_manifest(path: Path, subcommand: str, config: dict, inputs: list[str],
                    outputs: list[Path], summary: dict) -> None:
    manifest = {
        "subcommand": subcommand,
        "config": config,
        "tool_version": __version__,
        "inputs": inputs,
        "outputs": [str(p) for p in outputs],
        "summary": summary,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    log.info("wrote manifest %s", path)


def _load_input(args: argparse.Namespace) -> image.BinaryImage:
    return image.load(args.input, fmt=args.format, threshold=args.threshold)


def _scaled_disk_count(base_count: int, size: int) -> int:
    return max(1, round(base_count * (size / BASE_SIDE) ** 2))


def _material_image(material: str, size: int, seed: int) -> image.BinaryImage:
    if material in DISK_PRESETS:
        variant, base_count = DISK_PRESETS[material]
        spec = generators.DiskMaterialSpec(
            variant=variant, disk_count=_scaled_disk_count(base_count, size),
            r_min=DISK_DEFAULTS["rmin"], r_max=DISK_DEFAULTS["rmax"],
            mu=DISK_DEFAULTS["mu"], sigma=DISK_DEFAULTS["sigma"], side=size, seed=seed)
        return generators.place_disks(spec)[0]
    spec = generators.LoGMaterialSpec(kernel_size=LOG_KERNEL_SIZE,
                                      threshold=LOG_THRESHOLDS[material],
                                      side=size, seed=seed)
    return generators.generate_log(spec)


def _method(kind: str, seed: int | None) -> decimation.DecimationMethod:
    if kind != "random" and seed is not None:
        log.warning("--seed is ignored by the deterministic %s method", kind)
        seed = None
    if kind == "random" and seed is None:
        raise image.FormatError("random decimation requires --seed")
    return decimation.DecimationMethod(kind=kind, seed=seed)


def _boundary_flag(boundary: str | None) -> bool | None:
    if boundary is None:
        return None
    return boundary == "periodic"


def _curve_rows(desc: descriptors.ImageDescriptors):
    for (kind, phase), curve in sorted(desc.curves.items()):
        for r, v in zip(curve.distances, curve.values):
            yield [f"{r:g}", kind, phase, curve.step, f"{v:.12g}"]


def _write_long_descriptor_csv(path: Path, descriptor_sets) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "beta", "phase", "k", "value"])
        for desc in descriptor_sets:
            writer.writerows(_curve_rows(desc))


# --- subcommands ------------------------------------------------------------


def _cmd_generate(args: argparse.Namespace) -> int:
    out = _resolve_out(args.out)
    summary: dict = {}
    records = None
    if args.type in ("id", "od"):
        variant = "impenetrable" if args.type == "id" else "overlapping"
        count = args.disks if args.disks is not None else _scaled_disk_count(
            DISK_PRESETS[args.type][1], args.size)
        spec = generators.DiskMaterialSpec(
            variant=variant, disk_count=count, r_min=args.rmin, r_max=args.rmax,
            mu=args.mu, sigma=args.sigma, side=args.size, seed=args.seed)
        img, records = generators.place_disks(spec)
        summary["disk_count"] = len(records)
    else:
        spec = generators.LoGMaterialSpec(kernel_size=args.kernel, threshold=args.threshold,
                                          side=args.size, seed=args.seed)
        img = generators.generate_log(spec)
    out.parent.mkdir(parents=True, exist_ok=True)
    image.save(img, out)
    summary["phi0"] = image.surface_fraction(img, 0)
    summary["phi1"] = image.surface_fraction(img, 1)
    config = dataclasses.asdict(spec)
    if records is not None:
        config["disk_records"] = [dataclasses.asdict(r) for r in records]
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "generate",
                    config, [], [out], summary)
    return EXIT_OK


def _cmd_characterize(args: argparse.Namespace) -> int:
    img = _load_input(args)
    desc = descriptors.characterize(img, _boundary_flag(args.boundary))
    prefix = _resolve_out(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    outputs = []
    for kind, name in descriptors.DESCRIPTOR_NAMES.items():
        path = Path(f"{prefix}_{name}.csv")
        c0 = desc.curves[(kind, 0)]
        c1 = desc.curves[(kind, 1)]
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["r", "phase0", "phase1"])
            for r, v0, v1 in zip(c0.distances, c0.values, c1.values):
                writer.writerow([f"{r:g}", f"{v0:.12g}", f"{v1:.12g}"])
        outputs.append(path)
    sidecar = Path(f"{prefix}_summary.json")
    sidecar.write_text(json.dumps({
        "phi": list(desc.phi),
        "s": desc.interface_area,
        "s_over_phi": [desc.curves[(1, j)].s_over_phi for j in (0, 1)],
        "n_max": desc.max_index,
        "k": desc.step,
        "pixel_size": desc.pixel_size,
        "boundary": "periodic" if desc.periodic else "nonperiodic",
    }, indent=2) + "\n")
    outputs.append(sidecar)
    _write_manifest(Path(f"{prefix}_manifest.json"), "characterize",
                    {k: v for k, v in vars(args).items() if k != "func"},
                    [args.input], outputs, {"phi0": desc.phi[0], "phi1": desc.phi[1]})
    return EXIT_OK


def _cmd_decimate(args: argparse.Namespace) -> int:
    img = _load_input(args)
    method = _method(args.method, args.seed)
    ladder = decimation.build_ladder(img, method, args.steps, crop=args.crop)
    prefix = _resolve_out(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    outputs = []
    for k, im in enumerate(ladder.images):
        path = Path(f"{prefix}_k{k}.pbm")
        image.save(im, path)
        outputs.append(path)
    summary = {"sizes": [[im.rows, im.cols] for im in ladder.images]}
    if ladder.cropped_from:
        summary["cropped_from"] = list(ladder.cropped_from)
    _write_manifest(Path(f"{prefix}_manifest.json"), "decimate",
                    {k: v for k, v in vars(args).items() if k != "func"},
                    [args.input], outputs, summary)
    return EXIT_OK


def _report_json(result: analysis.AutoDecimateResult) -> dict:
    name = descriptors.DESCRIPTOR_NAMES
    return {
        "correlation_lengths": {
            f"{name[kind]}_phase{phase}": {"length": cl.length, "converged": cl.converged}
            for (kind, phase), cl in sorted(result.correlation_lengths.items())},
        "characteristic_length": result.characteristic_length,
        "Z": result.optimal_step,
        "notice": result.notice,
        "steps": [{
            "k": s.step, "rows": s.rows, "cols": s.cols,
            "phi": list(s.phi), "s_over_phi": list(s.s_over_phi),
            "deviations": {f"{name[kind]}_phase{phase}": e
                           for (kind, phase), e in sorted(s.deviations.items())},
            "global_error": s.error,
        } for s in result.report.steps],
        "coarseness": [{"window": p.window_side, "value": p.value}
                       for p in result.report.coarseness],
    }


def _cmd_autodecimate(args: argparse.Namespace) -> int:
    img = _load_input(args)
    method = _method(args.method, args.seed)
    result = analysis.auto_decimate(img, method, periodic=_boundary_flag(args.boundary))
    if result.notice:
        log.warning("%s", result.notice)
    prefix = _resolve_out(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    img_path = Path(f"{prefix}_decimated.pbm")
    image.save(result.image, img_path)
    report_path = Path(f"{prefix}_report.json")
    report_path.write_text(json.dumps(_report_json(result), indent=2) + "\n")
    curves_path = Path(f"{prefix}_descriptors.csv")
    _write_long_descriptor_csv(curves_path, result.report.descriptors)
    _write_manifest(Path(f"{prefix}_manifest.json"), "autodecimate",
                    {k: v for k, v in vars(args).items() if k != "func"},
                    [args.input], [img_path, report_path, curves_path],
                    {"Z": result.optimal_step,
                     "characteristic_length": result.characteristic_length})
    return EXIT_OK


def _cmd_experiment(args: argparse.Namespace) -> int:
    methods = (["random", "bilinear", "bicubic"] if args.methods == "all"
               else args.methods.split(","))
    for kind in methods:
        if kind not in decimation.METHOD_KINDS:
            raise image.FormatError(f"unknown decimation method {kind!r}")
    out_dir = _resolve_out(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    seeds = [args.seed + w for w in range(args.realizations)]
    log.info("generating %d realizations of %s at %d^2", args.realizations,
             args.material, args.size)
    images = [_material_image(args.material, args.size, s) for s in seeds]
    method_objs = [decimation.DecimationMethod(kind, seed=args.seed if kind == "random" else None)
                   for kind in methods]
    report = analysis.run_ensemble(images, method_objs, args.maxk)
    outputs = []
    for kind in methods:
        path = out_dir / f"global_error_{kind}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "mean", "std"])
            for k in range(args.maxk + 1):
                writer.writerow([k, f"{report.mean_error[kind][k]:.12g}",
                                 f"{report.std_error[kind][k]:.12g}"])
        outputs.append(path)
    curves_path = out_dir / "mean_descriptors.csv"
    with curves_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "beta", "phase", "k", "value"])
        for (kind, phase), curve in sorted(report.mean_curves.items()):
            for r, v in zip(curve.distances, curve.values):
                writer.writerow([f"{r:g}", kind, phase, 0, f"{v:.12g}"])
    outputs.append(curves_path)
    coarse_path = out_dir / "coarseness.csv"
    with coarse_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "mean", "std"])
        for k in range(args.maxk + 1):
            writer.writerow([k, f"{report.coarseness_mean[k]:.12g}",
                             f"{report.coarseness_std[k]:.12g}"])
    outputs.append(coarse_path)
    lengths_path = out_dir / "correlation_lengths.json"
    name = descriptors.DESCRIPTOR_NAMES
    lengths_path.write_text(json.dumps({
        "lengths": {f"{name[kind]}_phase{phase}": cl.length
                    for (kind, phase), cl in sorted(report.correlation_lengths.items())},
        "characteristic_length": report.characteristic_length,
        "Z": report.optimal_step_stats(args.size, args.size),
    }, indent=2) + "\n")
    outputs.append(lengths_path)
    _write_manifest(out_dir / "manifest.json", "experiment",
                    {k: v for k, v in vars(args).items() if k != "func"},
                    [], outputs, {"seeds": seeds})
    return EXIT_OK


# --- argument parsing -------------------------------------------------------


def _add_input_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("input", help="input image (PBM/PGM/CSV)")
    sub.add_argument("--format", choices=image.FORMATS, default=None,
                     help="override format inferred from the suffix")
    sub.add_argument("--threshold", type=float, default=None,
                     help="binarization threshold, required for PGM inputs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decimstat",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--quiet", action="store_true", help="errors only")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    gen = subs.add_parser("generate", help="generate a synthetic two-phase image")
    gen.add_argument("--type", choices=["id", "od", "logk"], required=True)
    gen.add_argument("--size", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--disks", type=int, default=None,
                     help="disk count (default: Table value scaled by area)")
    gen.add_argument("--rmin", type=int, default=DISK_DEFAULTS["rmin"])
    gen.add_argument("--rmax", type=int, default=DISK_DEFAULTS["rmax"])
    gen.add_argument("--mu", type=float, default=DISK_DEFAULTS["mu"])
    gen.add_argument("--sigma", type=float, default=DISK_DEFAULTS["sigma"])
    gen.add_argument("--kernel", type=int, default=LOG_KERNEL_SIZE,
                     help="LoG kernel side (logk only)")
    gen.add_argument("--threshold", type=float, default=LOG_THRESHOLDS["logk1"],
                     help="level-cut threshold (logk only)")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_generate)

    cha = subs.add_parser("characterize", help="compute normalized descriptors")
    _add_input_options(cha)
    cha.add_argument("--boundary", choices=["periodic", "nonperiodic"], default=None,
                     help="default: nonperiodic for loaded images")
    cha.add_argument("--out", required=True, help="output file prefix")
    cha.set_defaults(func=_cmd_characterize)

    dec = subs.add_parser("decimate", help="apply a fixed number of halving steps")
    _add_input_options(dec)
    dec.add_argument("--method", choices=decimation.METHOD_KINDS, required=True)
    dec.add_argument("--steps", type=int, required=True)
    dec.add_argument("--seed", type=int, default=None)
    dec.add_argument("--crop", action="store_true",
                     help="trim to the largest dimensions divisible by 2**steps")
    dec.add_argument("--out", required=True, help="output file prefix")
    dec.set_defaults(func=_cmd_decimate)

    auto = subs.add_parser("autodecimate",
                           help="decimate to the optimal step from the image's descriptors")
    _add_input_options(auto)
    auto.add_argument("--method", choices=decimation.METHOD_KINDS, required=True)
    auto.add_argument("--seed", type=int, default=None)
    auto.add_argument("--boundary", choices=["periodic", "nonperiodic"], default=None)
    auto.add_argument("--out", required=True, help="output file prefix")
    auto.set_defaults(func=_cmd_autodecimate)

    exp = subs.add_parser("experiment", help="ensemble error/coarseness study")
    exp.add_argument("--material", choices=["id", "od", "logk1", "logk2", "logk3"],
                     required=True)
    exp.add_argument("--size", type=int, required=True)
    exp.add_argument("--realizations", type=int, required=True)
    exp.add_argument("--methods", default="all",
                     help="'all' or comma-separated subset of random,bilinear,bicubic")
    exp.add_argument("--maxk", type=int, default=8)
    exp.add_argument("--seed", type=int, default=0, help="base seed; member w uses seed + w")
    exp.add_argument("--out", required=True, help="output directory")
    exp.set_defaults(func=_cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.ERROR if args.quiet else (logging.DEBUG if args.verbose else logging.INFO)
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (image.FormatError, decimation.DivisibilityError,
            generators.PlacementError, FileNotFoundError) as exc:
        log.error("%s", exc)
        return EXIT_DATA
    except image.SinglePhaseError as exc:
        log.error("%s", exc)
        return EXIT_NUMERIC
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
