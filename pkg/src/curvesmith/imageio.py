"""PNG (and general raster) read/write via Pillow.

Reads always yield (H, W, 3) uint8 RGB: alpha is dropped with a warning,
grayscale and palette images are expanded.
"""

import logging

import numpy as np
from PIL import Image

from .errors import InvalidInputError

log = logging.getLogger(__name__)


def read_image(path):
    with Image.open(path) as im:
        if im.mode in ("RGBA", "LA", "PA"):
            log.warning("dropping alpha channel while reading %s", path)
        rgb = im.convert("RGB")
        arr = np.asarray(rgb, dtype=np.uint8)
    if arr.size == 0:
        raise InvalidInputError(f"empty image: {path}")
    return arr


def write_image(img, path):
    img = np.asarray(img)
    if img.dtype != np.uint8 or img.ndim != 3 or img.shape[2] != 3:
        raise InvalidInputError("expected (H, W, 3) uint8 image")
    Image.fromarray(img, mode="RGB").save(path, format="PNG")
