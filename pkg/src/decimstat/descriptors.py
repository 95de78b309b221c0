"""Discrete statistical descriptors of a two-phase binary image.

Distances are measured axially (along rows and columns) in units of the
image's own pixels and reported in full-resolution pixels through the
image's ``pixel_size``.  All estimators exist in a periodic (wrap-around)
and a non-periodic (border-truncated) variant; the image's ``periodic``
flag supplies the default.
"""
from __future__ import annotations

import dataclasses

import numpy as np
from scipy import ndimage

from .image import BinaryImage, SinglePhaseError, surface_fraction

AUTOCOVARIANCE = 1
LINEAL_PATH = 2
PORE_SIZE = 3
DESCRIPTOR_NAMES = {AUTOCOVARIANCE: "autocovariance", LINEAL_PATH: "lineal_path", PORE_SIZE: "pore_size"}


@dataclasses.dataclass(frozen=True)
class DescriptorCurve:
    """One normalized descriptor sampled on the image's integer distance grid.

    ``distances`` are in full-resolution pixels (spacing = ``pixel_size``)
    and include the r = 0 point; ``values`` are the normalized descriptor.
    """

    kind: int
    phase: int
    step: int
    pixel_size: int
    distances: np.ndarray
    values: np.ndarray
    phi: float
    s_over_phi: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "distances", np.asarray(self.distances, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.distances.shape != self.values.shape:
            raise ValueError("distances and values must have equal length")

    @property
    def max_index(self) -> int:
        """Number of nonzero-distance samples (half the decimated side)."""
        return len(self.values) - 1


@dataclasses.dataclass(frozen=True)
class CoarsenessPoint:
    window_side: int
    value: float


def _max_offset(img: BinaryImage) -> int:
    # Half the (smaller) side, to stay clear of periodic images' self-overlap
    # and of small-sample noise near the domain size.
    return min(img.rows, img.cols) // 2


def _resolve_periodic(img: BinaryImage, periodic: bool | None) -> bool:
    return img.periodic if periodic is None else periodic


def _axial_pair_counts(mask: np.ndarray, n_max: int, periodic: bool) -> tuple[np.ndarray, np.ndarray]:
    """Same-phase ordered pair counts at offsets 0..n_max along rows and columns.

    Uses FFT autocorrelation per line; counts are integers, so the float
    results are rounded back exactly.
    """
    m = mask.astype(np.float64)
    rows, cols = m.shape
    out = []
    for axis, length in ((1, cols), (0, rows)):
        size = length if periodic else 2 * length
        spec = np.fft.rfft(m, n=size, axis=axis)
        corr = np.fft.irfft(spec * spec.conj(), n=size, axis=axis)
        counts = corr.sum(axis=1 - axis)[: n_max + 1]
        out.append(np.rint(counts).astype(np.int64))
    return out[0], out[1]


def _pair_normalization(rows: int, cols: int, n_max: int, periodic: bool) -> np.ndarray:
    r = np.arange(n_max + 1)
    if periodic:
        return np.full(n_max + 1, 2 * rows * cols, dtype=np.int64)
    return rows * (cols - r) + cols * (rows - r)


def two_point_correlation(img: BinaryImage, phase: int, periodic: bool | None = None,
                          n_max: int | None = None) -> np.ndarray:
    """Axial two-point probability S2(r) for r = 0..n_max; S2(0) equals phi."""
    periodic = _resolve_periodic(img, periodic)
    if n_max is None:
        n_max = _max_offset(img)
    row_counts, col_counts = _axial_pair_counts(img.phase_mask(phase), n_max, periodic)
    return (row_counts + col_counts) / _pair_normalization(img.rows, img.cols, n_max, periodic)


def _line_segment_counts(lines: np.ndarray, n_max: int, periodic: bool) -> np.ndarray:
    """Number of all-True segments of r+1 consecutive cells, per offset r.

    ``lines`` is a (L, N) boolean array of independent lines.  A run of n
    True cells holds n - r segment starts; a fully True periodic line holds
    N starts at every r.  Computed from a run-length histogram in O(L*N).
    """
    lines = np.ascontiguousarray(lines, dtype=bool)
    nlines, length = lines.shape
    full = lines.all(axis=1)
    n_full = int(full.sum())
    work = lines[~full] if n_full else lines

    hist = np.zeros(length + 1, dtype=np.int64)
    if work.size:
        padded = np.zeros((work.shape[0], length + 2), dtype=np.int8)
        padded[:, 1:-1] = work
        d = np.diff(padded.ravel())
        starts = np.flatnonzero(d == 1)
        ends = np.flatnonzero(d == -1)
        np.add.at(hist, ends - starts, 1)
        if periodic:
            # merge the wrap-around run of lines that are True at both ends
            wrap = work[:, 0] & work[:, -1]
            if wrap.any():
                first_len = np.argmin(work[wrap], axis=1)
                last_len = np.argmin(work[wrap][:, ::-1], axis=1)
                np.add.at(hist, first_len, -1)
                np.add.at(hist, last_len, -1)
                np.add.at(hist, first_len + last_len, 1)

    # counts[r] = sum_n hist[n] * max(0, n - r), via a reversed double cumsum
    tail = np.cumsum(hist[::-1])[::-1]          # tail[x] = number of runs of length >= x
    counts = np.cumsum(tail[1:][::-1])[::-1]    # counts[r] = sum_{x > r} tail[x]
    counts = np.concatenate([counts, np.zeros(1, dtype=np.int64)])[: n_max + 1]
    if len(counts) < n_max + 1:
        counts = np.pad(counts, (0, n_max + 1 - len(counts)))
    if n_full:
        if periodic:
            counts = counts + n_full * length
        else:
            counts = counts + n_full * (length - np.arange(n_max + 1))
    return counts


def lineal_path(img: BinaryImage, phase: int, periodic: bool | None = None,
                n_max: int | None = None) -> np.ndarray:
    """Axial lineal-path probability L(r): r+1 consecutive same-phase pixels."""
    periodic = _resolve_periodic(img, periodic)
    if n_max is None:
        n_max = _max_offset(img)
    mask = img.phase_mask(phase)
    counts = _line_segment_counts(mask, n_max, periodic) + _line_segment_counts(mask.T, n_max, periodic)
    return counts / _pair_normalization(img.rows, img.cols, n_max, periodic)


def pore_distances(img: BinaryImage, phase: int, periodic: bool | None = None) -> np.ndarray:
    """Euclidean distance from every pixel of ``phase`` to the nearest opposite pixel."""
    periodic = _resolve_periodic(img, periodic)
    mask = img.phase_mask(phase)
    if mask.all() or not mask.any():
        raise SinglePhaseError("pore-size distances need both phases present")
    if periodic:
        pad_r, pad_c = img.rows // 2, img.cols // 2
        padded = np.pad(mask, ((pad_r, pad_r), (pad_c, pad_c)), mode="wrap")
        edt = ndimage.distance_transform_edt(padded)
        edt = edt[pad_r : pad_r + img.rows, pad_c : pad_c + img.cols]
    else:
        edt = ndimage.distance_transform_edt(mask)
    return edt[mask]


def pore_size_histogram(img: BinaryImage, phase: int, periodic: bool | None = None,
                        n_max: int | None = None) -> np.ndarray:
    """Density over unit bins of the distance beyond the first neighbor shell.

    The nearest opposite-phase pixel of an interface-adjacent pixel sits at
    distance 1, so distances are shifted by -1 before binning; bin l then
    covers [l, l+1) and the l = 0 bin is populated for every two-phase
    image.  Normalized by the phase pixel count (bins past n_max are
    dropped, not re-normalized).
    """
    if n_max is None:
        n_max = _max_offset(img)
    d = pore_distances(img, phase, periodic) - 1.0
    idx = np.floor(d + 1e-12).astype(np.int64)
    counts = np.bincount(idx[idx <= n_max], minlength=n_max + 1)[: n_max + 1]
    return counts / d.size


def specific_interface_area(img: BinaryImage, periodic: bool | None = None) -> float:
    """Differing 4-connected pixel adjacencies per unit area."""
    periodic = _resolve_periodic(img, periodic)
    px = img.pixels
    if periodic:
        count = int((px != np.roll(px, -1, axis=1)).sum() + (px != np.roll(px, -1, axis=0)).sum())
    else:
        count = int((px[:, 1:] != px[:, :-1]).sum() + (px[1:] != px[:-1]).sum())
    return count / (img.rows * img.cols)


def _curve(img: BinaryImage, kind: int, phase: int, values: np.ndarray,
           periodic: bool) -> DescriptorCurve:
    phi = surface_fraction(img, phase)
    s = specific_interface_area(img, periodic)
    spacing = img.pixel_size
    distances = spacing * np.arange(len(values))
    # s is measured in the image's own pixel units; dividing by the pixel
    # size expresses it per full-resolution pixel.
    return DescriptorCurve(kind=kind, phase=phase, step=img.step, pixel_size=spacing,
                           distances=distances, values=values, phi=phi,
                           s_over_phi=s / (spacing * phi) if phi > 0 else float("inf"))


def autocovariance_curve(img: BinaryImage, phase: int, periodic: bool | None = None,
                         n_max: int | None = None) -> DescriptorCurve:
    """Normalized autocovariance: (S2 - phi^2) scaled to start at exactly 1."""
    periodic_flag = _resolve_periodic(img, periodic)
    s2 = two_point_correlation(img, phase, periodic_flag, n_max)
    phi = surface_fraction(img, phase)
    if phi in (0.0, 1.0):
        raise SinglePhaseError("autocovariance normalization undefined for a single-phase image")
    cov = s2 - phi * phi
    # cov[0] = phi - phi^2 = phi*(1 - phi); dividing by the stored zero-lag
    # value keeps the r = 0 point exactly 1 in floating point.
    return _curve(img, AUTOCOVARIANCE, phase, cov / cov[0], periodic_flag)


def lineal_path_curve(img: BinaryImage, phase: int, periodic: bool | None = None,
                      n_max: int | None = None) -> DescriptorCurve:
    periodic_flag = _resolve_periodic(img, periodic)
    raw = lineal_path(img, phase, periodic_flag, n_max)
    phi = surface_fraction(img, phase)
    if phi == 0.0:
        raise SinglePhaseError("lineal-path normalization undefined for an absent phase")
    return _curve(img, LINEAL_PATH, phase, raw / raw[0] if raw[0] else raw, periodic_flag)


def pore_size_curve(img: BinaryImage, phase: int, periodic: bool | None = None,
                    n_max: int | None = None) -> DescriptorCurve:
    """Pore-size density normalized by its first bin, so the curve starts at 1."""
    periodic_flag = _resolve_periodic(img, periodic)
    hist = pore_size_histogram(img, phase, periodic_flag, n_max)
    return _curve(img, PORE_SIZE, phase, hist / hist[0], periodic_flag)


_CURVE_BUILDERS = {
    AUTOCOVARIANCE: autocovariance_curve,
    LINEAL_PATH: lineal_path_curve,
    PORE_SIZE: pore_size_curve,
}


@dataclasses.dataclass(frozen=True)
class ImageDescriptors:
    """The six normalized curves of one image plus its scalar summary."""

    phi: tuple[float, float]
    interface_area: float
    curves: dict[tuple[int, int], DescriptorCurve]
    step: int
    pixel_size: int
    periodic: bool

    @property
    def max_index(self) -> int:
        return next(iter(self.curves.values())).max_index


def characterize(img: BinaryImage, periodic: bool | None = None,
                 n_max: int | None = None) -> ImageDescriptors:
    periodic_flag = _resolve_periodic(img, periodic)
    curves = {
        (kind, phase): builder(img, phase, periodic_flag, n_max)
        for kind, builder in _CURVE_BUILDERS.items()
        for phase in (0, 1)
    }
    return ImageDescriptors(
        phi=(surface_fraction(img, 0), surface_fraction(img, 1)),
        interface_area=specific_interface_area(img, periodic_flag),
        curves=curves,
        step=img.step,
        pixel_size=img.pixel_size,
        periodic=periodic_flag,
    )


def coarseness(img: BinaryImage, window_exponent: int) -> CoarsenessPoint:
    """Normalized local volume-fraction spread over 2**k x 2**k tiles.

    The tiles are the footprints that pixels of a k-step decimated image
    cover on the full-resolution image.  The value is 1 at k = 0 and 0
    when one tile spans the whole image.
    """
    side = 2 ** window_exponent
    if img.rows % side or img.cols % side:
        raise ValueError(f"image dimensions {img.rows}x{img.cols} not divisible by window {side}")
    px = img.pixels.astype(np.float64)
    tiles = px.reshape(img.rows // side, side, img.cols // side, side)
    tau = tiles.mean(axis=(1, 3))
    phi1 = px.mean()
    if phi1 in (0.0, 1.0):
        raise SinglePhaseError("coarseness undefined for a single-phase image")
    variance = float((tau * tau).mean() - phi1 * phi1)
    # phi0*phi1 written as phi1 - phi1*phi1: bitwise identical to the k = 0
    # variance, so the full-resolution point is exactly 1.
    denom = phi1 - phi1 * phi1
    value = float(np.sqrt(max(variance, 0.0) / denom))
    return CoarsenessPoint(window_side=side, value=value)
