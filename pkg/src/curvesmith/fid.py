"""Frechet distance between Gaussian fits of feature sets.

Includes a deterministic 768-d tiny feature extractor (16x16 bicubic
thumbnail, channels scaled to [0,1]) and the FEAT binary interchange
format for feature matrices.
"""

import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, InsufficientSamplesError, InvalidInputError
from .preprocess import resize_bicubic

TINY_DIM = 768

_MAGIC = b"FEAT"
_VERSION = 1


@dataclass(frozen=True)
class FeatureSet:
    rows: np.ndarray           # (N, dim)
    source_tag: str = ""

    @property
    def dim(self):
        return self.rows.shape[1]


@dataclass(frozen=True)
class GaussianStats:
    mean: np.ndarray  # (d,)
    cov: np.ndarray   # (d, d) symmetric


def make_feature_set(rows, source_tag=""):
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise InvalidInputError(f"features must be 2-D, got shape {rows.shape}")
    if not np.all(np.isfinite(rows)):
        raise InvalidInputError("features contain non-finite values")
    if rows.shape[0] < 2:
        raise InsufficientSamplesError("need at least 2 feature rows")
    return FeatureSet(rows, source_tag)


def fit_gaussian(fs):
    """Column means and unbiased (N-1) covariance, symmetrized."""
    rows = fs.rows
    if rows.shape[0] < 2:
        raise InsufficientSamplesError("covariance needs at least 2 samples")
    mean = rows.mean(axis=0)
    cov = np.cov(rows, rowvar=False, ddof=1)
    cov = np.atleast_2d(cov)
    return GaussianStats(mean, (cov + cov.T) / 2.0)


def sqrtm_psd(M):
    """Symmetric PSD square root via eigendecomposition.

    Negative eigenvalues (numerical noise) are clipped to zero.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError(f"expected square matrix, got shape {M.shape}")
    if np.max(np.abs(M - M.T)) > 1e-6:
        raise InvalidInputError("matrix is not symmetric within 1e-6")
    vals, vecs = np.linalg.eigh((M + M.T) / 2.0)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def _regularize(c1, c2):
    """Add eps*I to both covariances when either is near rank-deficient."""
    d = c1.shape[0]
    eps = 0.0
    for c in (c1, c2):
        vals = np.linalg.eigvalsh(c)
        if vals[0] < 1e-10 * max(vals[-1], 0.0):
            eps = max(eps, 1e-10 * np.trace(c) / d)
    if eps > 0:
        eye = eps * np.eye(d)
        return c1 + eye, c2 + eye
    return c1, c2


def frechet_distance(s1, s2):
    """Squared Frechet (Wasserstein-2) distance between two Gaussians.

    ||mu1 - mu2||^2 + Tr(C1 + C2 - 2 sqrt(C1 C2)), with the cross term
    computed through the symmetric product sqrt(C1)^T C2 sqrt(C1) so only
    PSD square roots are ever taken. Rounding negatives clip to 0.
    """
    if s1.mean.shape != s2.mean.shape or s1.cov.shape != s2.cov.shape:
        raise InvalidInputError("dimension mismatch between the two Gaussians")
    c1, c2 = _regularize(s1.cov, s2.cov)
    root1 = sqrtm_psd(c1)
    middle = root1 @ c2 @ root1
    cross = np.trace(sqrtm_psd((middle + middle.T) / 2.0))
    diff = s1.mean - s2.mean
    d2 = float(diff @ diff + np.trace(c1) + np.trace(c2) - 2.0 * cross)
    return max(d2, 0.0)


def tiny_image_features(img):
    """Deterministic 768-d embedding: 16x16 bicubic thumbnail, scaled to [0,1].

    Flattened row-major with R,G,B interleaved per pixel.
    """
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[0] < 1 or img.shape[1] < 1:
        raise InvalidInputError("empty image")
    thumb = resize_bicubic(img, 16, 16)
    return thumb.astype(np.float64).ravel() / 255.0


def write_features(fs, path):
    """Write the FEAT binary format: header, f32 payload, CRC32 trailer."""
    rows = np.ascontiguousarray(fs.rows, dtype="<f4")
    payload = rows.tobytes()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IIQ", _VERSION, fs.dim, rows.shape[0]))
        fh.write(payload)
        fh.write(struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF))


def read_features(path, source_tag=None):
    """Read and validate a FEAT file; bit-exact inverse of write_features."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != _MAGIC:
        raise FormatError(f"bad magic {data[:4]!r} at offset 0", offset=0)
    if len(data) < 20:
        raise FormatError("truncated header", offset=len(data))
    version, dim, count = struct.unpack_from("<IIQ", data, 4)
    if version != _VERSION:
        raise FormatError(f"unsupported version {version}", offset=4)
    if dim == 0 or count == 0:
        raise FormatError("zero dim or count", offset=8)
    n_values = dim * count
    if n_values > (len(data) // 4) + 1:
        raise FormatError(f"dim*count={n_values} overflows file size", offset=8)
    payload_end = 20 + 4 * n_values
    if len(data) < payload_end + 4:
        raise FormatError(f"payload truncated at offset {len(data)}", offset=len(data))
    payload = data[20:payload_end]
    (crc,) = struct.unpack_from("<I", data, payload_end)
    actual = zlib.crc32(payload) & 0xFFFFFFFF
    if crc != actual:
        raise FormatError(
            f"CRC mismatch at offset {payload_end}: stored {crc:#010x}, computed {actual:#010x}",
            offset=payload_end,
        )
    rows = np.frombuffer(payload, dtype="<f4").reshape(count, dim).astype(np.float64)
    tag = source_tag if source_tag is not None else str(path)
    return make_feature_set(rows, tag)
