"""Luminance-curve retouching baseline and Frechet-distance evaluation."""

__version__ = "0.1.0"

from . import color, curves, fid, gpr, pipeline, preprocess  # noqa: F401,E402
from .errors import (  # noqa: F401
    CurvesmithError,
    EmptyDatasetError,
    FormatError,
    IllConditionedError,
    InsufficientSamplesError,
    InvalidInputError,
)
