"""End-to-end helpers shared by the CLI subcommands and the demos."""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import color, curves, gpr
from .errors import EmptyDatasetError, InvalidInputError
from .imageio import read_image

log = logging.getLogger(__name__)


def image_curve(rgb, space="srgb"):
    """Sampled 51-point luminance CDF of an RGB image."""
    lab = color.rgb_to_lab(rgb, space)
    return curves.sample_curve(curves.empirical_cdf(lab))


def _map_images(paths, fn, jobs):
    if jobs <= 1:
        return [fn(p) for p in paths]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, paths))


def curves_for_pairs(pairs, space="srgb", jobs=1):
    """Decode each pair and build the (X, Y) curve matrices.

    Decode failures are collected; the run aborts if more than 10% of the
    pairs fail.
    """
    def load_pair(pair):
        try:
            raw = image_curve(read_image(pair.raw_path), space)
            target = image_curve(read_image(pair.target_path), space)
            return pair.stem, raw, target, None
        except Exception as exc:  # noqa: BLE001 - decode errors are reported per file
            return pair.stem, None, None, exc

    results = _map_images(pairs, load_pair, jobs)
    failures = [(stem, exc) for stem, _, _, exc in results if exc is not None]
    for stem, exc in failures:
        log.warning("failed to decode pair %s: %s", stem, exc)
    if len(failures) > 0.10 * len(pairs):
        raise InvalidInputError(
            f"{len(failures)} of {len(pairs)} pairs failed to decode: "
            + ", ".join(stem for stem, _ in failures)
        )
    good = [(x, y) for _, x, y, exc in results if exc is None]
    if not good:
        raise EmptyDatasetError("no decodable pairs")
    X = np.array([x for x, _ in good])
    Y = np.array([y for _, y in good])
    return X, Y


def apply_model(model, rgb, space="srgb"):
    """Retouch one image: predict the artist curve and remap luminance."""
    lab = color.rgb_to_lab(rgb, space)
    observed = curves.sample_curve(curves.empirical_cdf(lab))
    predicted = curves.monotone_project(gpr.predict(model, observed))
    remapped = curves.remap_luminance(lab, predicted)
    return color.lab_to_rgb(remapped, space)
