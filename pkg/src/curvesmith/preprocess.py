"""Dataset ingestion: long-edge bicubic resize and raw/target pairing."""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyDatasetError, InvalidInputError

log = logging.getLogger(__name__)

IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff"}

# Catmull-Rom bicubic, kernel parameter a = -0.5
_A = -0.5


@dataclass(frozen=True)
class DatasetPair:
    raw_path: Path
    target_path: Path
    stem: str


def _cubic_weights(t):
    """Catmull-Rom weights for the 4 taps around a sample at fractional offset t."""
    x = np.stack([t + 1.0, t, 1.0 - t, 2.0 - t])
    ax = np.abs(x)
    w_near = (_A + 2.0) * ax ** 3 - (_A + 3.0) * ax ** 2 + 1.0
    w_far = _A * ax ** 3 - 5.0 * _A * ax ** 2 + 8.0 * _A * ax - 4.0 * _A
    return np.where(ax <= 1.0, w_near, w_far)


def _resample_axis(data, out_len):
    """Bicubic 4-tap resample along axis 0; edge pixels are clamped."""
    in_len = data.shape[0]
    scale = in_len / out_len
    src = (np.arange(out_len) + 0.5) * scale - 0.5
    base = np.floor(src).astype(np.int64)
    frac = src - base
    weights = _cubic_weights(frac)  # (4, out_len)
    out = np.zeros((out_len,) + data.shape[1:], dtype=np.float64)
    for tap in range(4):
        idx = np.clip(base - 1 + tap, 0, in_len - 1)
        out += weights[tap].reshape((-1,) + (1,) * (data.ndim - 1)) * data[idx]
    return out


def resize_bicubic(img, out_width, out_height):
    """Resize to an exact width x height with the Catmull-Rom kernel.

    Aspect ratio is NOT preserved; callers wanting long-edge semantics use
    resize_long_edge.
    """
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[0] < 1 or img.shape[1] < 1:
        raise InvalidInputError("empty image")
    if out_width < 1 or out_height < 1:
        raise InvalidInputError("output dimensions must be >= 1")
    work = img.astype(np.float64)
    work = _resample_axis(work, out_height)
    work = _resample_axis(work.transpose(1, 0, 2), out_width).transpose(1, 0, 2)
    return np.clip(np.floor(work + 0.5), 0, 255).astype(np.uint8)


def resize_long_edge(img, target_long):
    """Resize so the long edge equals target_long, preserving aspect ratio.

    Short edge is round-half-away-from-zero of target_long * short / long,
    floored at 1 pixel.
    """
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[0] < 1 or img.shape[1] < 1:
        raise InvalidInputError("empty image")
    if target_long < 1:
        raise InvalidInputError("target long edge must be >= 1")
    h, w = img.shape[:2]
    long_in, short_in = (w, h) if w >= h else (h, w)
    short_out = max(1, int(np.floor(target_long * short_in / long_in + 0.5)))
    if w >= h:
        return resize_bicubic(img, target_long, short_out)
    return resize_bicubic(img, short_out, target_long)


def _scan_images(directory):
    directory = Path(directory)
    if not directory.is_dir():
        raise InvalidInputError(f"not a directory: {directory}")
    return {
        p.stem: p
        for p in sorted(directory.iterdir())
        if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS
    }


def pair_dataset(raw_dir, target_dir):
    """Pair images in two directories by filename stem.

    Returns pairs sorted by stem. Unmatched files on either side are logged
    as warnings; zero pairs raises EmptyDatasetError listing them.
    """
    raw = _scan_images(raw_dir)
    target = _scan_images(target_dir)
    common = sorted(raw.keys() & target.keys())
    unmatched_raw = sorted(raw.keys() - target.keys())
    unmatched_target = sorted(target.keys() - raw.keys())
    for stem in unmatched_raw:
        log.warning("unmatched raw image: %s", raw[stem])
    for stem in unmatched_target:
        log.warning("unmatched target image: %s", target[stem])
    if not common:
        raise EmptyDatasetError(
            "no raw/target pairs found; unmatched raw: "
            f"{[str(raw[s]) for s in unmatched_raw]}, unmatched target: "
            f"{[str(target[s]) for s in unmatched_target]}",
            unmatched_raw=[raw[s] for s in unmatched_raw],
            unmatched_target=[target[s] for s in unmatched_target],
        )
    return [DatasetPair(raw[s], target[s], s) for s in common]
