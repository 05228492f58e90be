"""Input validation helpers shared across the package."""

import numpy as np


def check_positions(points, name: str = "positions") -> np.ndarray:
    """Coerce to a fresh, finite (n, 3) float array."""
    arr = np.array(points, dtype=float, copy=True)
    if arr.ndim == 1 and arr.size == 3:
        arr = arr.reshape(1, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"{name} must have shape (n, 3), got {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError(f"{name} must contain at least one point")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_vector(values, length: int, name: str = "vector") -> np.ndarray:
    """Coerce to a fresh, finite 1-D float array of the given length."""
    arr = np.array(values, dtype=float, copy=True).ravel()
    if arr.shape != (length,):
        raise ValueError(f"{name} must have length {length}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_matrix(values, name: str = "matrix") -> np.ndarray:
    """Coerce to a fresh, finite 2-D float array with at least one entry."""
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_index(index: int, size: int, name: str = "index") -> int:
    index = int(index)
    if not 0 <= index < size:
        raise IndexError(f"{name} must be in [0, {size - 1}], got {index}")
    return index
