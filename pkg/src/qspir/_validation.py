"""Input validation helpers shared by the engine, the estimator and the CLI."""

from __future__ import annotations

from numbers import Integral
from typing import Iterable, Sequence

import numpy as np

from .pauli import LabelVector, WeylLabel


def check_int(value, name: str, minimum: int | None = None, maximum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ValueError(f"{name} must be <= {maximum}, got {value}")
    return value


def check_choice(value: str, name: str, choices: Sequence[str]) -> str:
    if value not in choices:
        raise ValueError(f"{name} must be one of {tuple(choices)}, got {value!r}")
    return value


def check_query_index(k, n_files: int) -> int:
    """``k`` is 1-based."""
    return check_int(k, "query index", 1, n_files)


def as_label_vector(value, n_blocks: int | None = None) -> LabelVector:
    """Coerce a file given as LabelVector, per-block ints 0..3, or (a, b) pairs."""
    if isinstance(value, LabelVector):
        vec = value
    else:
        arr = np.asarray(value)
        if arr.ndim == 0:
            raise ValueError("a file needs at least one block; pass a sequence")
        if arr.ndim == 2 and arr.shape[1] == 2:
            vec = LabelVector(tuple(WeylLabel(int(a), int(b)) for a, b in arr))
        elif arr.ndim == 1:
            if not np.issubdtype(arr.dtype, np.integer):
                raise TypeError(f"file blocks must be integers, got dtype {arr.dtype}")
            vec = LabelVector.from_ints(arr.tolist())
        else:
            raise ValueError(f"cannot interpret array of shape {arr.shape} as a file")
    if n_blocks is not None and len(vec) != n_blocks:
        raise ValueError(f"file has {len(vec)} blocks, expected {n_blocks}")
    return vec


def check_files(files: Iterable, n_files: int | None = None, n_blocks: int | None = None) -> tuple[LabelVector, ...]:
    """Validate a file set: every file a LabelVector of the same block count."""
    out = tuple(as_label_vector(f, n_blocks) for f in files)
    if not out:
        raise ValueError("file set is empty")
    if n_files is not None and len(out) != n_files:
        raise ValueError(f"expected {n_files} files, got {len(out)}")
    blocks = {len(f) for f in out}
    if len(blocks) != 1:
        raise ValueError(f"files have differing block counts {sorted(blocks)}")
    return out


def check_file_array(X) -> np.ndarray:
    """2-D integer array ``(n_files, n_blocks)`` with entries in ``0..3``."""
    arr = np.asarray(X)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D array (n_files, n_blocks), got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ValueError(f"need at least 2 files, got {arr.shape[0]}")
    if arr.shape[1] < 1:
        raise ValueError("need at least one block per file")
    if not np.issubdtype(arr.dtype, np.integer):
        if np.issubdtype(arr.dtype, np.floating) and np.all(arr == np.round(arr)):
            arr = arr.astype(np.int64)
        else:
            raise TypeError(f"file blocks must be integers in 0..3, got dtype {arr.dtype}")
    if arr.min() < 0 or arr.max() > 3:
        raise ValueError("file blocks must lie in 0..3 (one Z_2^2 label each)")
    return arr.astype(np.int64)
