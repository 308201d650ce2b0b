"""Multi-output Gaussian process regression on 51-point curves.

One isotropic RBF kernel (unit signal variance) and one Cholesky factor
shared by all 51 output columns. The default noise term is exp(-20).
"""

import struct
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, cholesky
from scipy.spatial.distance import cdist

from .curves import CURVE_LEN
from .errors import FormatError, IllConditionedError, InvalidInputError

DEFAULT_ALPHA = float(np.exp(-20.0))
DEFAULT_GRID = (0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0)
DEFAULT_FOLDS = 5

_MAGIC = b"GPRM"
_VERSION = 1


@dataclass(frozen=True)
class RbfKernel:
    length_scale: float

    def __post_init__(self):
        if not (self.length_scale > 0):
            raise InvalidInputError("length_scale must be positive")

    def __call__(self, a, b):
        sq = cdist(np.atleast_2d(a), np.atleast_2d(b), "sqeuclidean")
        return np.exp(-sq / (2.0 * self.length_scale ** 2))


@dataclass(frozen=True)
class GprModel:
    X_train: np.ndarray   # (N, 51)
    alpha: float
    kernel: RbfKernel
    chol: np.ndarray      # (N, N) lower triangular
    dual: np.ndarray      # (N, 51), (K + alpha I)^-1 Y
    cv_seed: int = 0


def _check_matrix(name, m, cols=CURVE_LEN):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[1] != cols:
        raise InvalidInputError(f"{name} must be (N, {cols}), got shape {m.shape}")
    if m.shape[0] < 1:
        raise InvalidInputError(f"{name} needs at least one row")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} contains non-finite values")
    return m


def fit(X, Y, kernel, alpha=DEFAULT_ALPHA, cv_seed=0):
    """Fit the regressor: Cholesky of K + alpha*I and dual weights per output."""
    X = _check_matrix("X", X)
    Y = _check_matrix("Y", Y)
    if X.shape[0] != Y.shape[0]:
        raise InvalidInputError("X and Y must have the same number of rows")
    if alpha < 0:
        raise InvalidInputError("alpha must be non-negative")
    n = X.shape[0]
    K = kernel(X, X)
    K = (K + K.T) / 2.0
    try:
        chol = cholesky(K + alpha * np.eye(n), lower=True)
    except np.linalg.LinAlgError:
        raise IllConditionedError(
            f"kernel matrix not positive definite at alpha={alpha:g}; "
            f"minimum working alpha is {_min_working_alpha(K, alpha):g}",
            min_alpha=_min_working_alpha(K, alpha),
        ) from None
    dual = cho_solve((chol, True), Y)
    return GprModel(X, float(alpha), kernel, chol, dual, int(cv_seed))


def _min_working_alpha(K, alpha):
    """Smallest alpha (found by doubling) at which the Cholesky succeeds."""
    n = K.shape[0]
    candidate = alpha if alpha > 0 else np.finfo(np.float64).eps
    for _ in range(200):
        try:
            cholesky(K + candidate * np.eye(n), lower=True)
            return candidate
        except np.linalg.LinAlgError:
            candidate *= 2.0
    return candidate


def predict(model, x):
    """Posterior mean at query curve(s) x: k(x, X_train) @ dual.

    Accepts a single 51-vector or an (M, 51) batch; output shape matches.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    x2 = np.atleast_2d(x)
    if x2.shape[1] != CURVE_LEN or not np.all(np.isfinite(x2)):
        raise InvalidInputError(f"query must be finite with {CURVE_LEN} components")
    k_star = model.kernel(x2, model.X_train)
    out = k_star @ model.dual
    return out[0] if single else out


def cross_validate(X, Y, grid=DEFAULT_GRID, folds=DEFAULT_FOLDS, alpha=DEFAULT_ALPHA, seed=0):
    """Select the RBF length scale by K-fold cross-validation.

    Rows are shuffled once with the given seed, split into contiguous folds,
    and each grid candidate is scored by mean held-out RMSE. Ties (within
    1e-12) go to the larger length scale. Returns (RbfKernel, rmse_by_candidate).
    """
    X = _check_matrix("X", X)
    Y = _check_matrix("Y", Y)
    n = X.shape[0]
    if folds < 2 or n < folds:
        raise InvalidInputError(f"need N >= folds >= 2, got N={n}, folds={folds}")
    if not grid:
        raise InvalidInputError("empty length-scale grid")
    perm = np.random.default_rng(seed).permutation(n)
    fold_idx = np.array_split(perm, folds)
    rmse = {}
    for ls in grid:
        kernel = RbfKernel(float(ls))
        fold_scores = []
        for held in fold_idx:
            mask = np.ones(n, dtype=bool)
            mask[held] = False
            model = fit(X[mask], Y[mask], kernel, alpha)
            pred = predict(model, X[held])
            fold_scores.append(np.sqrt(np.mean((pred - Y[held]) ** 2)))
        rmse[float(ls)] = float(np.mean(fold_scores))
    best_score = min(rmse.values())
    best_ls = max(ls for ls, r in rmse.items() if r <= best_score + 1e-12)
    return RbfKernel(best_ls), rmse


def save_model(model, path):
    """Write the binary model file (little-endian, magic GPRM)."""
    n = model.X_train.shape[0]
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IIIIddQ", _VERSION, n, CURVE_LEN, CURVE_LEN,
                             model.alpha, model.kernel.length_scale, model.cv_seed))
        fh.write(np.ascontiguousarray(model.X_train, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.dual, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.chol, dtype="<f8").tobytes())


def load_model(path):
    """Read a model file written by save_model; validates magic and sizes."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != _MAGIC:
        raise FormatError(f"bad magic {data[:4]!r} at offset 0", offset=0)
    header = struct.Struct("<IIIIddQ")
    if len(data) < 4 + header.size:
        raise FormatError("truncated header", offset=len(data))
    version, n, in_dim, out_dim, alpha, length_scale, cv_seed = header.unpack_from(data, 4)
    if version != _VERSION:
        raise FormatError(f"unsupported version {version}", offset=4)
    if in_dim != CURVE_LEN or out_dim != CURVE_LEN:
        raise FormatError(f"unexpected dims {in_dim}x{out_dim}", offset=12)
    body = 4 + header.size
    expected = body + 8 * (2 * n * CURVE_LEN + n * n)
    if len(data) != expected:
        raise FormatError(f"payload length {len(data)} != expected {expected}", offset=body)
    def block(offset, shape):
        count = int(np.prod(shape))
        arr = np.frombuffer(data, dtype="<f8", count=count, offset=offset)
        return arr.reshape(shape).astype(np.float64)
    X = block(body, (n, CURVE_LEN))
    dual = block(body + 8 * n * CURVE_LEN, (n, CURVE_LEN))
    chol = block(body + 16 * n * CURVE_LEN, (n, n))
    return GprModel(X, alpha, RbfKernel(length_scale), chol, dual, cv_seed)
