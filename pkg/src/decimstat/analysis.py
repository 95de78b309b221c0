"""Information-loss analysis along a decimation ladder.

Quantifies how far each decimated image's normalized descriptors drift
from the full-resolution reference, extracts correlation lengths, and
derives the optimal number of halvings that keeps at least three samples
per correlation length.
"""
from __future__ import annotations

import dataclasses

import numpy as np

from .decimation import DecimationLadder, DecimationMethod, build_ladder, crop_for_steps
from .descriptors import (
    CoarsenessPoint,
    DescriptorCurve,
    ImageDescriptors,
    characterize,
    coarseness,
)
from .image import BinaryImage

CORRELATION_BAND = 0.02  # fraction of the normalized maximum

DESCRIPTOR_KEYS = tuple((kind, phase) for kind in (1, 2, 3) for phase in (0, 1))


def deviation(ref: DescriptorCurve, dec: DescriptorCurve) -> float:
    """Mean squared gap between the curves at the decimated grid's distances.

    The decimated grid is a stride of the reference grid, so reference
    values are direct lookups; the r = 0 point is excluded.  Grid points
    past a curve's support count the missing side as 0.
    """
    if (ref.kind, ref.phase) != (dec.kind, dec.phase):
        raise ValueError("curves describe different descriptors or phases")
    if dec.pixel_size % ref.pixel_size:
        raise ValueError(
            f"decimated spacing {dec.pixel_size} is not a multiple of reference spacing {ref.pixel_size}")
    stride = dec.pixel_size // ref.pixel_size
    n = dec.max_index
    total = 0.0
    for l in range(1, n + 1):
        ref_idx = stride * l
        ref_val = ref.values[ref_idx] if ref_idx <= ref.max_index else 0.0
        total += (ref_val - dec.values[l]) ** 2
    return total / n


def deviation_table(ref: ImageDescriptors, dec: ImageDescriptors) -> dict[tuple[int, int], float]:
    return {key: deviation(ref.curves[key], dec.curves[key]) for key in DESCRIPTOR_KEYS}


def global_error(entries: dict[tuple[int, int], float]) -> float:
    """Six-term sum of the per-descriptor, per-phase deviations."""
    return sum(entries[key] for key in DESCRIPTOR_KEYS)


def ensemble_stats(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-column ensemble mean and population standard deviation."""
    values = np.atleast_2d(np.asarray(values, dtype=float))
    mean = values.mean(axis=0)
    spread = np.sqrt(np.maximum((values * values).mean(axis=0) - mean * mean, 0.0))
    return mean, spread


@dataclasses.dataclass(frozen=True)
class CorrelationLength:
    """First distance where a normalized descriptor enters the +/- band.

    ``converged`` is False when the curve never enters the band within the
    stored range; the length then saturates at the largest stored distance
    and callers should warn that the domain is small relative to the
    structure.
    """

    length: float
    converged: bool


def correlation_length(curve: DescriptorCurve, band: float = CORRELATION_BAND) -> CorrelationLength:
    inside = np.flatnonzero(np.abs(curve.values) <= band)
    if inside.size == 0:
        return CorrelationLength(length=float(curve.distances[-1]), converged=False)
    return CorrelationLength(length=float(curve.distances[inside[0]]), converged=True)


def optimal_steps(length: float, rows0: int, cols0: int) -> int:
    """Halvings that keep the decimated sampling below length/3 pixels.

    Target dimensions are ceil(3 * side / length); the step count is the
    floored log2 of the feasible shrink ratio, computed in exact integer
    arithmetic and clamped at zero (structures finer than 3 pixels admit
    no decimation).
    """
    if length < 1:
        raise ValueError("correlation length must be at least 1 pixel")
    best = None
    for side in (rows0, cols0):
        target = -(-3 * side // length) if float(length).is_integer() else int(np.ceil(3 * side / length))
        target = int(target)
        z = 0
        while target << (z + 1) <= side:
            z += 1
        best = z if best is None else min(best, z)
    return best


def coarseness_trace(img: BinaryImage, max_step: int) -> list[CoarsenessPoint]:
    """Normalized coarseness at the tile sizes 2**k for k = 0..max_step.

    For each k the image is cropped (bottom/right) to the largest
    dimensions divisible by 2**k, matching the ladder's crop rule.
    """
    points = []
    for k in range(max_step + 1):
        points.append(coarseness(crop_for_steps(img, k), k))
    return points


@dataclasses.dataclass(frozen=True)
class StepSummary:
    step: int
    rows: int
    cols: int
    phi: tuple[float, float]
    s_over_phi: tuple[float, float]
    deviations: dict[tuple[int, int], float]
    error: float


@dataclasses.dataclass(frozen=True)
class LadderReport:
    ladder: DecimationLadder
    reference: ImageDescriptors
    descriptors: tuple[ImageDescriptors, ...]
    steps: tuple[StepSummary, ...]
    coarseness: tuple[CoarsenessPoint, ...]

    def errors(self) -> np.ndarray:
        return np.array([s.error for s in self.steps])


def _step_summary(ref: ImageDescriptors, dec: ImageDescriptors,
                  img: BinaryImage) -> StepSummary:
    devs = deviation_table(ref, dec)
    s = dec.interface_area
    return StepSummary(
        step=img.step, rows=img.rows, cols=img.cols, phi=dec.phi,
        s_over_phi=tuple(s / (img.pixel_size * p) if p > 0 else float("inf") for p in dec.phi),
        deviations=devs, error=global_error(devs))


def ladder_report(img: BinaryImage, method: DecimationMethod, steps: int,
                  crop: bool = False, periodic: bool | None = None) -> LadderReport:
    """Build the ladder and score every step against the full-resolution image."""
    ladder = build_ladder(img, method, steps, crop=crop)
    descriptors = tuple(characterize(im, periodic) for im in ladder.images)
    ref = descriptors[0]
    summaries = tuple(_step_summary(ref, dec, im)
                      for dec, im in zip(descriptors, ladder.images))
    trace = tuple(coarseness_trace(ladder.images[0], steps))
    return LadderReport(ladder=ladder, reference=ref, descriptors=descriptors,
                        steps=summaries, coarseness=trace)


@dataclasses.dataclass(frozen=True)
class AutoDecimateResult:
    image: BinaryImage
    correlation_lengths: dict[tuple[int, int], CorrelationLength]
    characteristic_length: float
    optimal_step: int
    report: LadderReport
    notice: str | None = None


def auto_decimate(img: BinaryImage, method: DecimationMethod,
                  band: float = CORRELATION_BAND,
                  periodic: bool | None = None) -> AutoDecimateResult:
    """Decimate as far as the image's own descriptors allow.

    Sequence: characterize the full-resolution image, read off the six
    correlation lengths, take their minimum as the characteristic length,
    convert it to the optimal step count, then apply that many ladder
    steps of the chosen method.
    """
    ref = characterize(img, periodic)
    lengths = {key: correlation_length(curve, band) for key, curve in ref.curves.items()}
    ell = min(cl.length for cl in lengths.values())
    z = optimal_steps(ell, img.rows, img.cols)
    max_feasible = 0
    while img.rows % (2 ** (max_feasible + 1)) == 0 and img.cols % (2 ** (max_feasible + 1)) == 0 \
            and min(img.rows, img.cols) >> (max_feasible + 1) >= 2:
        max_feasible += 1
    notice = None
    if z == 0:
        notice = "structure finer than 3 full-resolution pixels; image returned unchanged"
    elif z > max_feasible:
        notice = f"optimal step {z} limited to {max_feasible} by image divisibility"
        z = max_feasible
    report = ladder_report(img, method, z, periodic=periodic)
    return AutoDecimateResult(image=report.ladder[z], correlation_lengths=lengths,
                              characteristic_length=ell, optimal_step=z,
                              report=report, notice=notice)


# --- ensemble experiments ---------------------------------------------------


@dataclasses.dataclass(frozen=True)
class EnsembleReport:
    """Per-material aggregation over seeds and decimation methods."""

    members: int
    max_step: int
    mean_error: dict[str, np.ndarray]
    std_error: dict[str, np.ndarray]
    member_errors: dict[str, np.ndarray]
    mean_curves: dict[tuple[int, int], DescriptorCurve]
    correlation_lengths: dict[tuple[int, int], CorrelationLength]
    coarseness_mean: np.ndarray
    coarseness_std: np.ndarray

    @property
    def characteristic_length(self) -> float:
        return min(cl.length for cl in self.correlation_lengths.values())

    def optimal_step_stats(self, rows0: int, cols0: int) -> dict[str, int]:
        lengths = [cl.length for cl in self.correlation_lengths.values()]
        return {
            "min": optimal_steps(min(lengths), rows0, cols0),
            "mean": optimal_steps(float(np.mean(lengths)), rows0, cols0),
            "max": optimal_steps(max(lengths), rows0, cols0),
        }


def _mean_curve(curves: list[DescriptorCurve]) -> DescriptorCurve:
    values = np.mean([c.values for c in curves], axis=0)
    first = curves[0]
    return dataclasses.replace(
        first, values=values,
        phi=float(np.mean([c.phi for c in curves])),
        s_over_phi=float(np.mean([c.s_over_phi for c in curves])))


def run_ensemble(images: list[BinaryImage], methods: list[DecimationMethod],
                 max_step: int, periodic: bool | None = None) -> EnsembleReport:
    """Characterize an ensemble and score every (member, method) ladder."""
    if not images:
        raise ValueError("ensemble needs at least one member")
    member_errors: dict[str, list[np.ndarray]] = {m.kind: [] for m in methods}
    ref_curves: dict[tuple[int, int], list[DescriptorCurve]] = {k: [] for k in DESCRIPTOR_KEYS}
    traces = []
    for img in images:
        ref = characterize(img, periodic)
        for key in DESCRIPTOR_KEYS:
            ref_curves[key].append(ref.curves[key])
        traces.append([p.value for p in coarseness_trace(img, max_step)])
        for method in methods:
            ladder = build_ladder(img, method, max_step)
            errors = [0.0]
            for im in ladder.images[1:]:
                dec = characterize(im, periodic)
                errors.append(global_error(deviation_table(ref, dec)))
            member_errors[method.kind].append(np.array(errors))
    mean_error, std_error, raw = {}, {}, {}
    for kind, rows in member_errors.items():
        arr = np.array(rows)
        raw[kind] = arr
        mean_error[kind], std_error[kind] = ensemble_stats(arr)
    mean_curves = {key: _mean_curve(curves) for key, curves in ref_curves.items()}
    lengths = {key: correlation_length(curve) for key, curve in mean_curves.items()}
    c_mean, c_std = ensemble_stats(np.array(traces))
    return EnsembleReport(members=len(images), max_step=max_step,
                          mean_error=mean_error, std_error=std_error, member_errors=raw,
                          mean_curves=mean_curves, correlation_lengths=lengths,
                          coarseness_mean=c_mean, coarseness_std=c_std)
