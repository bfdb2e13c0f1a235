"""Input validation helpers shared across the package.

All helpers either return a normalized numpy array or raise ``ValueError``
with a message naming the offending argument.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np


def as_binary_array(values, name: str = "values", ndim: int | None = None) -> np.ndarray:
    """Coerce to an int8 array of exactly 0s and 1s."""
    arr = np.asarray(values)
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0 or 1")
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    return arr.astype(np.int8)


def as_score_array(values, name: str = "scores", ndim: int | None = None) -> np.ndarray:
    """Coerce to a float64 array of finite probabilities in [0, 1]."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size and not np.isfinite(arr).all():
        raise ValueError(f"{name} must be finite")
    if arr.size and ((arr < 0.0).any() or (arr > 1.0).any()):
        raise ValueError(f"{name} must lie in [0, 1]")
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    return arr


def check_equal_length(a, b, name_a: str = "a", name_b: str = "b") -> None:
    if len(a) != len(b):
        raise ValueError(f"{name_a} and {name_b} must have equal length ({len(a)} != {len(b)})")


def check_same_shape(a: np.ndarray, b: np.ndarray, name_a: str = "a", name_b: str = "b") -> None:
    if a.shape != b.shape:
        raise ValueError(f"{name_a} and {name_b} must have the same shape ({a.shape} != {b.shape})")


def check_unique_ids(ids: Sequence[str], name: str = "image_ids") -> None:
    seen: set[str] = set()
    for i in ids:
        if i in seen:
            raise ValueError(f"{name} contains duplicate id {i!r}")
        seen.add(i)


def frozen(arr: np.ndarray) -> np.ndarray:
    """Return a read-only view so container types stay immutable."""
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr
