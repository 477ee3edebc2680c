"""Input validation helpers."""

from __future__ import annotations

import numpy as np

from .errors import NonFiniteInput, SeriesTooShort


def as_series(x, min_length: int = 1) -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float64 array of length >= ``min_length``."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise NonFiniteInput(f"expected a 1-D series, got shape {arr.shape}")
    if arr.size < min_length:
        raise SeriesTooShort(f"need at least {min_length} observations, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("series contains NaN or infinite values")
    return arr
