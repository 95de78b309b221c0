"""Binary raster type and bit-exact file I/O for two-phase images."""
from __future__ import annotations

import dataclasses
import io
from pathlib import Path

import numpy as np

VOID = 0
SOLID = 1
PHASES = (VOID, SOLID)


class FormatError(ValueError):
    """Malformed header or unsupported image file content."""


class SinglePhaseError(ValueError):
    """Operation undefined when only one phase is present."""


@dataclasses.dataclass(frozen=True)
class BinaryImage:
    """Two-phase raster with decimation provenance.

    ``pixels`` holds one byte per pixel with values in {0, 1}; packed bit
    formats exist only at the file boundary.  ``step`` counts decimation
    steps applied and ``pixel_size`` is the number of full-resolution
    pixels a current pixel spans along each axis (2**step for
    ladder-produced images).  ``periodic`` records whether the material is
    periodic by construction; it selects the default boundary handling of
    the descriptors (generated images are periodic, loaded ones are not).
    """

    pixels: np.ndarray
    step: int = 0
    pixel_size: int = 1
    periodic: bool = True

    def __post_init__(self) -> None:
        px = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        if px.ndim != 2 or px.size == 0:
            raise ValueError("pixels must be a non-empty 2-D array")
        if px.max() > 1:
            raise ValueError("pixel values must lie in {0, 1}")
        if self.step < 0:
            raise ValueError("step must be non-negative")
        if self.pixel_size < 1:
            raise ValueError("pixel_size must be positive")
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    def phase_mask(self, phase: int) -> np.ndarray:
        if phase not in PHASES:
            raise ValueError(f"phase must be 0 or 1, got {phase!r}")
        return self.pixels == phase

    def complement(self) -> "BinaryImage":
        return dataclasses.replace(self, pixels=1 - self.pixels)


def surface_fraction(img: BinaryImage, phase: int) -> float:
    """Fraction of pixels occupied by ``phase`` (2-D volume fraction)."""
    count = int(img.phase_mask(phase).sum())
    return count / (img.rows * img.cols)


def phase_counts(img: BinaryImage) -> tuple[int, int]:
    ones = int(img.pixels.sum())
    return img.rows * img.cols - ones, ones


def is_single_phase(img: BinaryImage) -> bool:
    c0, c1 = phase_counts(img)
    return c0 == 0 or c1 == 0


# --- file I/O ---------------------------------------------------------------

FORMATS = ("pbm-ascii", "pbm-binary", "pgm", "csv")


def infer_format(path: Path | str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".pbm":
        return "pbm-binary"
    if suffix == ".pgm":
        return "pgm"
    if suffix in (".csv", ".txt"):
        return "csv"
    raise FormatError(f"cannot infer image format from suffix {suffix!r}")


def _read_pnm_tokens(data: bytes, count: int, start: int) -> tuple[list[int], int]:
    """Read ``count`` whitespace-separated integer tokens, honoring '#' comments."""
    tokens: list[int] = []
    pos = start
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos] != 0x0A:
                pos += 1
            continue
        if pos >= n:
            raise FormatError("unexpected end of file in PNM header")
        end = pos
        while end < n and not data[end : end + 1].isspace() and data[end : end + 1] != b"#":
            end += 1
        try:
            tokens.append(int(data[pos:end]))
        except ValueError as exc:
            raise FormatError(f"bad PNM header token {data[pos:end]!r}") from exc
        pos = end
    return tokens, pos


def _load_pnm(data: bytes, threshold: float | None) -> np.ndarray:
    magic = data[:2]
    if magic not in (b"P1", b"P4", b"P2", b"P5"):
        raise FormatError(f"unsupported PNM magic {magic!r}")
    is_pbm = magic in (b"P1", b"P4")
    header_count = 2 if is_pbm else 3
    header, pos = _read_pnm_tokens(data, header_count, 2)
    width, height = header[0], header[1]
    if width <= 0 or height <= 0:
        raise FormatError("non-positive PNM dimensions")
    if is_pbm:
        if magic == b"P1":
            flat = np.array(_read_pnm_tokens(data, width * height, pos)[0], dtype=np.uint8)
            if flat.max(initial=0) > 1:
                raise FormatError("PBM ascii pixel outside {0, 1}")
            return flat.reshape(height, width)
        # P4: one byte of whitespace after the header, then packed rows
        pos += 1
        row_bytes = (width + 7) // 8
        payload = data[pos : pos + row_bytes * height]
        if len(payload) < row_bytes * height:
            raise FormatError("truncated PBM binary payload")
        packed = np.frombuffer(payload, dtype=np.uint8).reshape(height, row_bytes)
        return np.unpackbits(packed, axis=1)[:, :width]
    # PGM
    if threshold is None:
        raise FormatError("PGM input requires an explicit binarization threshold")
    maxval = header[2]
    if maxval <= 0:
        raise FormatError("non-positive PGM maxval")
    if magic == b"P2":
        gray = np.array(_read_pnm_tokens(data, width * height, pos)[0])
    else:
        pos += 1
        dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
        need = width * height * dtype.itemsize if maxval >= 256 else width * height
        payload = data[pos : pos + need]
        if len(payload) < need:
            raise FormatError("truncated PGM binary payload")
        gray = np.frombuffer(payload, dtype=dtype).astype(np.int64)
    if gray.max(initial=0) > maxval:
        raise FormatError("PGM pixel exceeds maxval")
    return (np.asarray(gray).reshape(height, width) >= threshold).astype(np.uint8)


def _load_csv(text: str) -> np.ndarray:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([int(cell) for cell in line.split(",")])
        except ValueError as exc:
            raise FormatError(f"non-integer CSV cell in line {line!r}") from exc
    if not rows:
        raise FormatError("empty CSV matrix")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise FormatError("ragged CSV matrix")
    arr = np.array(rows, dtype=np.int64)
    if arr.min() < 0 or arr.max() > 1:
        raise FormatError("CSV pixel outside {0, 1}")
    return arr.astype(np.uint8)


def load(path: Path | str, fmt: str | None = None, threshold: float | None = None) -> BinaryImage:
    """Load a binary image; PGM inputs are thresholded (value >= threshold -> 1).

    Loaded images start at step 0 with unit pixel size and are treated as
    non-periodic (real micrograph crops carry no wrap-around structure).
    """
    path = Path(path)
    if fmt is None:
        fmt = infer_format(path)
    if fmt not in FORMATS:
        raise FormatError(f"unknown format {fmt!r}")
    data = path.read_bytes()
    if fmt in ("pbm-ascii", "pbm-binary", "pgm"):
        pixels = _load_pnm(data, threshold)
    else:
        pixels = _load_csv(data.decode("ascii"))
    return BinaryImage(pixels, step=0, pixel_size=1, periodic=False)


def save(img: BinaryImage, path: Path | str, fmt: str | None = None) -> None:
    """Write ``img`` so that a round-trip load reproduces the pixels exactly."""
    path = Path(path)
    if fmt is None:
        fmt = infer_format(path)
    if fmt == "pbm-ascii":
        buf = io.StringIO()
        buf.write(f"P1\n{img.cols} {img.rows}\n")
        for row in img.pixels:
            buf.write(" ".join(str(int(v)) for v in row))
            buf.write("\n")
        path.write_text(buf.getvalue())
    elif fmt == "pbm-binary":
        packed = np.packbits(img.pixels, axis=1)
        path.write_bytes(f"P4\n{img.cols} {img.rows}\n".encode("ascii") + packed.tobytes())
    elif fmt == "csv":
        lines = "\n".join(",".join(str(int(v)) for v in row) for row in img.pixels)
        path.write_text(lines + "\n", newline="\n")
    else:
        raise FormatError(f"unsupported save format {fmt!r}")
