import numpy as np
import pytest

from decimstat import BinaryImage


def random_image(seed: int, rows: int = 16, cols: int = 16, p: float = 0.5,
                 periodic: bool = True) -> BinaryImage:
    rng = np.random.default_rng(seed)
    pixels = (rng.random((rows, cols)) < p).astype(np.uint8)
    return BinaryImage(pixels, periodic=periodic)


def two_phase_image(seed: int, rows: int = 16, cols: int = 16, p: float = 0.5,
                    periodic: bool = True) -> BinaryImage:
    """Random image guaranteed to contain both phases."""
    img = random_image(seed, rows, cols, p, periodic)
    px = img.pixels.copy()
    px.flags.writeable = True
    px[0, 0] = 0
    px[-1, -1] = 1
    return BinaryImage(px, periodic=periodic)


@pytest.fixture
def checkerboard():
    return BinaryImage((np.indices((4, 4)).sum(axis=0) % 2).astype(np.uint8))
