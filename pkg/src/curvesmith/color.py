"""RGB <-> CIELAB conversion with L* on the native 0-100 scale.

Images are numpy arrays: RGB is (H, W, 3) uint8, Lab is (H, W, 3) float64
with channels (L, a, b). Conversions run in double precision; quantization
to 8 bits happens only in lab_to_rgb, with round-half-away-from-zero.
"""

import numpy as np

from .errors import InvalidInputError

# D65 reference white (2 degree observer)
_WHITE_D65 = np.array([0.95047, 1.0, 1.08883])

# linear-RGB -> XYZ, D65
_SRGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
_ADOBE_TO_XYZ = np.array([
    [0.5767309, 0.1855540, 0.1881852],
    [0.2973769, 0.6273491, 0.0752741],
    [0.0270343, 0.0706872, 0.9911085],
])

# Adobe RGB (1998) gamma is exactly 563/256
_ADOBE_GAMMA = 563.0 / 256.0

SPACES = ("srgb", "adobe")


def _check_space(space):
    if space not in SPACES:
        raise InvalidInputError(f"unknown color space {space!r}, expected one of {SPACES}")


def _check_rgb(img):
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise InvalidInputError(f"expected (H, W, 3) RGB array, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise InvalidInputError("empty image")
    return img


def _check_lab(img):
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise InvalidInputError(f"expected (H, W, 3) Lab array, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise InvalidInputError("empty image")
    if not np.all(np.isfinite(img)):
        raise InvalidInputError("non-finite channel value in Lab image")
    return img


def _expand_gamma(rgb01, space):
    if space == "srgb":
        lo = rgb01 / 12.92
        hi = ((rgb01 + 0.055) / 1.055) ** 2.4
        return np.where(rgb01 <= 0.04045, lo, hi)
    return rgb01 ** _ADOBE_GAMMA


def _compress_gamma(lin, space):
    lin = np.clip(lin, 0.0, None)
    if space == "srgb":
        lo = lin * 12.92
        hi = 1.055 * lin ** (1.0 / 2.4) - 0.055
        return np.where(lin <= 0.0031308, lo, hi)
    return lin ** (1.0 / _ADOBE_GAMMA)


def _f_lab(t):
    d = 6.0 / 29.0
    return np.where(t > d ** 3, np.cbrt(t), t / (3 * d * d) + 4.0 / 29.0)


def _f_lab_inv(u):
    d = 6.0 / 29.0
    return np.where(u > d, u ** 3, 3 * d * d * (u - 4.0 / 29.0))


def rgb_to_lab(img, space="srgb"):
    """Convert an (H, W, 3) uint8 RGB image to (H, W, 3) float64 Lab.

    L is clamped to [0, 100]; a and b are left on their natural scale.
    """
    _check_space(space)
    img = _check_rgb(img)
    rgb01 = img.astype(np.float64) / 255.0
    lin = _expand_gamma(rgb01, space)
    matrix = _SRGB_TO_XYZ if space == "srgb" else _ADOBE_TO_XYZ
    xyz = lin @ matrix.T
    fxyz = _f_lab(xyz / _WHITE_D65)
    lab = np.empty_like(fxyz)
    lab[..., 0] = np.clip(116.0 * fxyz[..., 1] - 16.0, 0.0, 100.0)
    lab[..., 1] = 500.0 * (fxyz[..., 0] - fxyz[..., 1])
    lab[..., 2] = 200.0 * (fxyz[..., 1] - fxyz[..., 2])
    return lab


def lab_to_rgb(img, space="srgb"):
    """Convert an (H, W, 3) float64 Lab image back to uint8 RGB.

    Out-of-gamut values are clamped to [0, 255] after rounding
    (half away from zero).
    """
    _check_space(space)
    lab = _check_lab(img)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    xyz = np.stack([_f_lab_inv(fx), _f_lab_inv(fy), _f_lab_inv(fz)], axis=-1) * _WHITE_D65
    matrix = _SRGB_TO_XYZ if space == "srgb" else _ADOBE_TO_XYZ
    lin = xyz @ np.linalg.inv(matrix).T
    rgb01 = _compress_gamma(np.clip(lin, 0.0, None), space)
    scaled = np.clip(rgb01 * 255.0, 0.0, 255.0)
    # all values >= 0 here, so floor(x + 0.5) rounds half away from zero
    return np.floor(scaled + 0.5).astype(np.uint8)
