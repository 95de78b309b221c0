"""Seeded synthetic two-phase images: disk packings and level-cut random media.

All randomness flows through numpy's PCG64 generator seeded from the spec's
integer seed, so a (spec, seed) pair reproduces an image bit-exactly.
"""
from __future__ import annotations

import dataclasses
import math

import numpy as np

from .image import BinaryImage


class PlacementError(RuntimeError):
    """Disk placement exhausted its rejection-sampling budget."""


ATTEMPT_BUDGET = 1_000_000  # candidate centers per disk before giving up


@dataclasses.dataclass(frozen=True)
class DiskMaterialSpec:
    variant: str  # "impenetrable" | "overlapping"
    disk_count: int
    r_min: int
    r_max: int
    mu: float
    sigma: float
    side: int
    seed: int

    def __post_init__(self) -> None:
        if self.variant not in ("impenetrable", "overlapping"):
            raise ValueError(f"unknown disk variant {self.variant!r}")
        if self.disk_count < 1:
            raise ValueError("disk_count must be positive")
        if not (0 < self.r_min <= self.r_max):
            raise ValueError("need 0 < r_min <= r_max")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.side < 1:
            raise ValueError("side must be positive")


@dataclasses.dataclass(frozen=True)
class LoGMaterialSpec:
    kernel_size: int
    threshold: float
    side: int
    seed: int

    def __post_init__(self) -> None:
        if self.kernel_size < 1 or self.kernel_size % 2 == 0:
            raise ValueError("kernel_size must be an odd positive integer")
        if not 0.0 <= self.threshold <= 255.0:
            raise ValueError("threshold must lie in [0, 255]")
        if self.side < 1:
            raise ValueError("side must be positive")
        if self.kernel_size > self.side:
            raise ValueError("kernel_size must not exceed the image side")


@dataclasses.dataclass(frozen=True)
class DiskRecord:
    x: float
    y: float
    radius: int


def _radius_weights(spec: DiskMaterialSpec) -> np.ndarray:
    """Unrounded folded-normal weights over the radius bins r_min..r_max."""
    r = np.arange(spec.r_min, spec.r_max + 1, dtype=float)
    s2 = spec.sigma * spec.sigma
    # exp(-(r^2+mu^2)/(2s^2)) * cosh(r*mu/s^2) expanded into its two
    # Gaussian branches; the product form overflows for mu >> sigma
    branches = np.exp(-((r - spec.mu) ** 2) / (2 * s2)) + np.exp(-((r + spec.mu) ** 2) / (2 * s2))
    return np.sqrt(2.0 / (math.pi * s2)) * 0.5 * branches


def sample_radius_histogram(spec: DiskMaterialSpec) -> np.ndarray:
    """Per-bin disk counts: round-half-to-even of disk_count times the bin weight."""
    return np.rint(spec.disk_count * _radius_weights(spec)).astype(np.int64)


def _radius_multiset(spec: DiskMaterialSpec, rng: np.random.Generator) -> np.ndarray:
    """Radii to place, shuffled.

    The rounded histogram fixes the bulk of the multiset; when rounding
    leaves fewer than disk_count radii (small ensembles round every bin to
    zero) the deficit is drawn from the normalized bin weights.
    """
    counts = sample_radius_histogram(spec)
    radii = np.repeat(np.arange(spec.r_min, spec.r_max + 1), counts)
    deficit = spec.disk_count - len(radii)
    if deficit > 0:
        weights = _radius_weights(spec)
        extra = rng.choice(np.arange(spec.r_min, spec.r_max + 1), size=deficit,
                           p=weights / weights.sum())
        radii = np.concatenate([radii, extra])
    rng.shuffle(radii)
    return radii


def _min_image_distance(x0: float, y0: float, xs: np.ndarray, ys: np.ndarray, side: int) -> np.ndarray:
    dx = np.abs(xs - x0)
    dy = np.abs(ys - y0)
    dx = np.minimum(dx, side - dx)
    dy = np.minimum(dy, side - dy)
    return np.hypot(dx, dy)


def _rasterize_disk(canvas: np.ndarray, x: float, y: float, radius: float, side: int) -> None:
    """Set pixels whose centers (n + 1/2, m + 1/2) lie within the disk, with wrap."""
    diameter_cells = int(2 * radius) + 2
    if diameter_cells >= side:
        # disk wraps onto itself: test every pixel with minimum-image offsets
        mm, nn = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
        dx = np.abs(nn + 0.5 - x)
        dy = np.abs(mm + 0.5 - y)
        dx = np.minimum(dx, side - dx)
        dy = np.minimum(dy, side - dy)
        canvas[dx * dx + dy * dy <= radius * radius] = 1
        return
    m_lo = math.ceil(y - radius - 0.5)
    m_hi = math.floor(y + radius - 0.5)
    n_lo = math.ceil(x - radius - 0.5)
    n_hi = math.floor(x + radius - 0.5)
    rows = np.arange(m_lo, m_hi + 1)
    cols = np.arange(n_lo, n_hi + 1)
    dy = rows + 0.5 - y
    dx = cols + 0.5 - x
    inside = dy[:, None] ** 2 + dx[None, :] ** 2 <= radius * radius
    sub = canvas[np.ix_(rows % side, cols % side)]
    canvas[np.ix_(rows % side, cols % side)] = sub | inside


def place_disks(spec: DiskMaterialSpec) -> tuple[BinaryImage, list[DiskRecord]]:
    """Place the radii multiset with the variant's periodic distance constraint.

    Impenetrable: center distance >= r_h + r_i against every placed disk.
    Overlapping:  center distance >  |r_h - r_i| (partial overlap allowed).
    Distances use the minimum-image convention, matching the periodic
    rasterization.  Phase 1 is the disk interior.
    """
    rng = np.random.default_rng(spec.seed)
    radii = _radius_multiset(spec, rng)
    canvas = np.zeros((spec.side, spec.side), dtype=np.uint8)
    xs = np.empty(len(radii))
    ys = np.empty(len(radii))
    records: list[DiskRecord] = []
    for i, radius in enumerate(radii):
        placed = False
        for _ in range(ATTEMPT_BUDGET):
            x, y = rng.uniform(0.0, spec.side, size=2)
            if i:
                d = _min_image_distance(x, y, xs[:i], ys[:i], spec.side)
                prior = radii[:i]
                if spec.variant == "impenetrable":
                    ok = bool((d >= prior + radius).all())
                else:
                    ok = bool((d > np.abs(prior - radius)).all())
                if not ok:
                    continue
            placed = True
            break
        if not placed:
            raise PlacementError(
                f"placed {i} of {len(radii)} disks before exhausting "
                f"{ATTEMPT_BUDGET} attempts (seed {spec.seed})")
        xs[i], ys[i] = x, y
        records.append(DiskRecord(x=x, y=y, radius=int(radius)))
        _rasterize_disk(canvas, x, y, float(radius), spec.side)
    return BinaryImage(canvas, step=0, pixel_size=1, periodic=True), records


def log_kernel(size: int) -> np.ndarray:
    """Normalized Laplacian-of-Gaussian stencil of odd side ``size``.

    Weights are (1 - q/(2c^2)) * exp(-q/(2c^2)) with q = h^2 + i^2 and
    c = size // 2; within the stencil q <= 2c^2, so no weight is negative.
    A size-1 stencil is the identity.
    """
    half = size // 2
    if half == 0:
        return np.ones((1, 1))
    offsets = np.arange(-half, half + 1)
    q = offsets[:, None] ** 2 + offsets[None, :] ** 2
    scaled = q / (2.0 * half * half)
    weights = (1.0 - scaled) * np.exp(-scaled)
    return weights / weights.sum()


def generate_log(spec: LoGMaterialSpec) -> BinaryImage:
    """Level-cut of LoG-smoothed uniform byte noise (value >= threshold -> 1)."""
    rng = np.random.default_rng(spec.seed)
    noise = rng.integers(0, 256, size=(spec.side, spec.side)).astype(np.float64)
    kernel = log_kernel(spec.kernel_size)
    if kernel.shape == (1, 1):
        blurred = noise
    else:
        # circular convolution via FFT; the kernel is embedded centered at
        # the origin with wrap-around
        half = spec.kernel_size // 2
        embedded = np.zeros_like(noise)
        embedded[: half + 1, : half + 1] = kernel[half:, half:]
        embedded[: half + 1, -half:] = kernel[half:, :half]
        embedded[-half:, : half + 1] = kernel[:half, half:]
        embedded[-half:, -half:] = kernel[:half, :half]
        blurred = np.fft.irfft2(np.fft.rfft2(noise) * np.fft.rfft2(embedded), s=noise.shape)
    pixels = (blurred >= spec.threshold).astype(np.uint8)
    return BinaryImage(pixels, step=0, pixel_size=1, periodic=True)
