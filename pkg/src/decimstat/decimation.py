"""Size-halving decimation operators and the progressive ladder."""
from __future__ import annotations

import dataclasses

import numpy as np

from .image import BinaryImage

METHOD_KINDS = ("random", "bilinear", "bicubic")


class DivisibilityError(ValueError):
    """Image dimensions do not support the requested halving."""


@dataclasses.dataclass(frozen=True)
class DecimationMethod:
    kind: str
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in METHOD_KINDS:
            raise ValueError(f"unknown decimation method {self.kind!r}")
        if self.kind == "random" and self.seed is None:
            raise ValueError("random decimation requires a seed")


def _random_step(pixels: np.ndarray, seed: int, step: int) -> np.ndarray:
    """Pick one pixel of each 2x2 block, chosen by a uniform draw in [0, 3].

    The draw stream is seeded by (ladder seed, step) and indexed in
    row-major order of the output image, so each step reproduces
    independently of how earlier steps were computed.
    """
    half_rows, half_cols = pixels.shape[0] // 2, pixels.shape[1] // 2
    rng = np.random.default_rng((seed, step))
    pick = rng.integers(0, 4, size=(half_rows, half_cols))
    row_off = pick // 2
    col_off = pick - 2 * row_off
    rows = 2 * np.arange(half_rows)[:, None] + row_off
    cols = 2 * np.arange(half_cols)[None, :] + col_off
    return pixels[rows, cols]


def _bilinear_step(pixels: np.ndarray) -> np.ndarray:
    """2x2 block average thresholded at 1/2, ties rounding up (sum >= 2)."""
    half_rows, half_cols = pixels.shape[0] // 2, pixels.shape[1] // 2
    blocks = pixels.reshape(half_rows, 2, half_cols, 2).astype(np.int64)
    return (blocks.sum(axis=(1, 3)) >= 2).astype(np.uint8)


def _bicubic_step(pixels: np.ndarray) -> np.ndarray:
    """Separable (-1, 9, 9, -1)/16 stencil over the 4x4 neighborhood of each block.

    Out-of-range neighbor rows/columns are clamped to the nearest valid
    index.  The interpolated value is kept in exact 1/256 units, so the
    >= 1/2 comparison has no floating-point tie ambiguity.
    """
    rows, cols = pixels.shape
    half_rows, half_cols = rows // 2, cols // 2
    p = pixels.astype(np.int64)

    base_c = 2 * np.arange(half_cols)
    c_idx = [np.clip(base_c + off, 0, cols - 1) for off in (-1, 0, 1, 2)]
    by_col = -p[:, c_idx[0]] + 9 * p[:, c_idx[1]] + 9 * p[:, c_idx[2]] - p[:, c_idx[3]]

    base_r = 2 * np.arange(half_rows)
    r_idx = [np.clip(base_r + off, 0, rows - 1) for off in (-1, 0, 1, 2)]
    alpha256 = -by_col[r_idx[0]] + 9 * by_col[r_idx[1]] + 9 * by_col[r_idx[2]] - by_col[r_idx[3]]
    return (alpha256 >= 128).astype(np.uint8)


def decimate_step(img: BinaryImage, method: DecimationMethod) -> BinaryImage:
    """One halving step; the output step counter and pixel size track the ladder."""
    for axis, size in (("rows", img.rows), ("columns", img.cols)):
        if size % 2:
            raise DivisibilityError(f"cannot halve: {axis} dimension {size} is odd")
    if method.kind == "random":
        out = _random_step(img.pixels, method.seed, img.step + 1)
    elif method.kind == "bilinear":
        out = _bilinear_step(img.pixels)
    else:
        out = _bicubic_step(img.pixels)
    return BinaryImage(out, step=img.step + 1, pixel_size=2 * img.pixel_size,
                       periodic=img.periodic)


@dataclasses.dataclass(frozen=True)
class DecimationLadder:
    """Progressive sequence of images, index k holding the k-step image."""

    images: tuple[BinaryImage, ...]
    method: DecimationMethod
    cropped_from: tuple[int, int] | None = None

    @property
    def steps(self) -> int:
        return len(self.images) - 1

    def __getitem__(self, k: int) -> BinaryImage:
        return self.images[k]


def crop_for_steps(img: BinaryImage, steps: int) -> BinaryImage:
    """Trim bottom/right to the largest dimensions divisible by 2**steps."""
    factor = 2 ** steps
    rows = (img.rows // factor) * factor
    cols = (img.cols // factor) * factor
    if rows == 0 or cols == 0:
        raise DivisibilityError(
            f"image {img.rows}x{img.cols} too small for {steps} halvings even after cropping")
    if (rows, cols) == (img.rows, img.cols):
        return img
    return dataclasses.replace(img, pixels=img.pixels[:rows, :cols])


def build_ladder(img: BinaryImage, method: DecimationMethod, steps: int,
                 crop: bool = False) -> DecimationLadder:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    factor = 2 ** steps
    cropped_from = None
    if img.rows % factor or img.cols % factor:
        if not crop:
            raise DivisibilityError(
                f"dimensions {img.rows}x{img.cols} not divisible by 2**{steps}; "
                "pass crop=True to trim")
        cropped_from = (img.rows, img.cols)
        img = crop_for_steps(img, steps)
    images = [img]
    for _ in range(steps):
        images.append(decimate_step(images[-1], method))
    return DecimationLadder(images=tuple(images), method=method, cropped_from=cropped_from)
