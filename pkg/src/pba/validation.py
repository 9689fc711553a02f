"""Input validation helpers used at the public entry points."""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatchError, NotNormalizedError


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D float64 array."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def as_image(a, name: str = "image") -> np.ndarray:
    """Coerce to a finite 2-D float64 image with at least one pixel."""
    img = as_matrix(a, name=name)
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"{name} must have at least one pixel")
    return img


def as_vector(a, name: str = "vector") -> np.ndarray:
    arr = np.asarray(a, dtype=np.float64).ravel()
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def check_unit_columns(d: np.ndarray, tol: float = 1e-6) -> None:
    """Raise NotNormalizedError if any column norm deviates from 1 by more than tol."""
    norms = np.linalg.norm(d, axis=0)
    dev = np.abs(norms - 1.0)
    if norms.size and float(dev.max()) > tol:
        k = int(dev.argmax())
        raise NotNormalizedError(
            f"column {k} has norm {norms[k]:.9g}; atoms must be unit-normalized"
        )


def check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
