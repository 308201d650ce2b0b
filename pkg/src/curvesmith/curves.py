"""Luminance CDFs, 51-point curve sampling, and histogram remapping.

A sampled curve is a length-51 float64 vector: the luminance CDF evaluated
at levels 0, 2, 4, ..., 100.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

CURVE_LEN = 51
LEVELS = np.arange(CURVE_LEN, dtype=np.float64) * 2.0  # 0, 2, ..., 100


@dataclass(frozen=True)
class EmpiricalCdf:
    """Step CDF of an image's luminance: distinct L values and cumulative proportions."""

    support: np.ndarray  # sorted distinct L values
    cum: np.ndarray      # cumulative proportions, strictly increasing, ends at 1


def _luminance(img):
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 3:
        img = img[..., 0]
    if img.size == 0:
        raise InvalidInputError("empty image")
    return img.ravel()


def empirical_cdf(img):
    """Empirical CDF of the L channel: cum[k] = P(L <= support[k])."""
    lum = _luminance(img)
    support, counts = np.unique(lum, return_counts=True)
    cum = np.cumsum(counts) / lum.size
    cum[-1] = 1.0
    return EmpiricalCdf(support, cum)


def sample_curve(cdf):
    """Evaluate the step CDF at the 51 levels 0, 2, ..., 100.

    The result is non-decreasing and ends at exactly 1.
    """
    idx = np.searchsorted(cdf.support, LEVELS, side="right")
    values = np.where(idx > 0, cdf.cum[idx - 1], 0.0)
    values[-1] = 1.0
    return values


def validate_curve(values):
    """Raise unless `values` is a valid 51-point sampled curve."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (CURVE_LEN,):
        raise InvalidInputError(f"curve must have {CURVE_LEN} values, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("curve contains non-finite values")
    if np.any(np.diff(values) < 0):
        raise InvalidInputError("curve is not non-decreasing")
    if np.any(values < 0) or np.any(values > 1):
        raise InvalidInputError("curve values outside [0, 1]")
    if values[-1] != 1.0:
        raise InvalidInputError("curve must end at 1")
    return values


def monotone_project(raw):
    """Project 51 raw values onto the valid-curve set.

    Running maximum, clamp to [0, 1], final value forced to 1. Idempotent.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.shape != (CURVE_LEN,):
        raise InvalidInputError(f"expected {CURVE_LEN} values, got shape {raw.shape}")
    if not np.all(np.isfinite(raw)):
        raise InvalidInputError("non-finite input")
    values = np.clip(np.maximum.accumulate(raw), 0.0, 1.0)
    values[-1] = 1.0
    return values


def curve_quantile(curve, p):
    """Pseudo-inverse of the piecewise-linear interpolation of a sampled curve.

    G_inv(p) = inf{level : G(level) >= p}; flat segments resolve to their
    left endpoint. `p` may be scalar or array.
    """
    curve = np.asarray(curve, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    j = np.searchsorted(curve, p, side="left")
    j = np.clip(j, 0, CURVE_LEN - 1)
    lo = np.clip(j - 1, 0, CURVE_LEN - 1)
    g_lo = curve[lo]
    g_hi = curve[j]
    span = g_hi - g_lo
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(span > 0, (p - g_lo) / span, 0.0)
    levels = LEVELS[lo] + 2.0 * np.clip(frac, 0.0, 1.0)
    return np.where(j == 0, 0.0, levels)


def remap_luminance(img, target):
    """Histogram-match the L channel toward a target sampled curve.

    Each pixel's L becomes G_inv(F(L)) where F is the image's full empirical
    CDF and G_inv is curve_quantile of `target`. The a and b channels pass
    through untouched.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3 or img.shape[0] < 1 or img.shape[1] < 1:
        raise InvalidInputError("expected non-empty (H, W, 3) Lab image")
    target = validate_curve(target)
    lum = img[..., 0].ravel()
    support, inverse = np.unique(lum, return_inverse=True)
    counts = np.bincount(inverse)
    cum = np.cumsum(counts) / lum.size
    cum[-1] = 1.0
    mapped = np.clip(curve_quantile(target, cum), 0.0, 100.0)
    out = img.copy()
    out[..., 0] = mapped[inverse].reshape(img.shape[:2])
    return out
