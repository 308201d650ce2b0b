import numpy as np
import pytest

from curvesmith.preprocess import resize_bicubic


def smooth_image(rng, size=64):
    """Natural-looking synthetic image: low-frequency noise upsampled bicubically."""
    base = (rng.random((8, 8, 3)) * 255).astype(np.uint8)
    return resize_bicubic(base, size, size)


def random_curve(rng):
    """A valid 51-point sampled curve with random shape."""
    values = np.sort(rng.random(51))
    values = np.clip(np.maximum.accumulate(values), 0.0, 1.0)
    values[-1] = 1.0
    return values


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
