"""Lattice fields, boundary rules and the two five-point stencil reductions.

Fields are plain 2-D numpy arrays indexed ``field[k, j]`` (row ``k`` vertical,
column ``j`` horizontal, origin top-left).  Real fields hold concentrations,
integer fields hold max-plus states.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

INT_GUARD = 2**40


class DomainError(ValueError):
    """A value lies outside the domain where a map is defined."""


class GuardError(OverflowError):
    """An integer field left the +/- 2**40 safety range."""


@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class Fixed:
    value: float = 0

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError("Fixed boundary constant must be finite")


BoundaryRule = Union[Periodic, Fixed]

PERIODIC = Periodic()


def real_field(values, positive: bool = False) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D field, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("field contains non-finite values")
    if positive and not np.all(arr > 0):
        raise DomainError("field must be strictly positive")
    return arr


def int_field(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or not np.all(arr == np.round(arr)):
            raise ValueError("integer field has non-integral entries")
    arr = arr.astype(np.int64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D field, got shape {arr.shape}")
    check_guard(arr)
    return arr


def check_guard(arr: np.ndarray) -> np.ndarray:
    if arr.size and int(np.max(np.abs(arr))) > INT_GUARD:
        raise GuardError(f"integer value exceeds guard 2**40 (max |x| = {np.max(np.abs(arr))})")
    return arr


def shifted(field: np.ndarray, dk: int, dj: int, boundary: BoundaryRule) -> np.ndarray:
    """Return ``g`` with ``g[k, j] = field[k + dk, j + dj]`` resolved by ``boundary``."""
    if dk == 0 and dj == 0:
        return field
    if isinstance(boundary, Periodic):
        return np.roll(field, shift=(-dk, -dj), axis=(0, 1))
    h, w = field.shape
    out = np.full_like(field, boundary.value)
    if abs(dk) >= h or abs(dj) >= w:
        return out
    src_k = slice(max(dk, 0), h + min(dk, 0))
    dst_k = slice(max(-dk, 0), h + min(-dk, 0))
    src_j = slice(max(dj, 0), w + min(dj, 0))
    dst_j = slice(max(-dj, 0), w + min(-dj, 0))
    out[dst_k, dst_j] = field[src_k, src_j]
    return out


def _five(field, offset, boundary):
    if offset < 0:
        raise ValueError("stencil offset must be non-negative")
    a = int(offset)
    return (
        field,
        shifted(field, 0, -a, boundary),
        shifted(field, 0, a, boundary),
        shifted(field, -a, 0, boundary),
        shifted(field, a, 0, boundary),
    )


def mean5(field: np.ndarray, offset: int, boundary: BoundaryRule = PERIODIC) -> np.ndarray:
    """Five-point average: centre plus the four axis neighbours at distance ``offset``."""
    if offset == 0:
        return np.array(field, dtype=np.float64)
    c, w, e, n, s = _five(np.asarray(field, dtype=np.float64), offset, boundary)
    return (c + w + e + n + s) / 5.0


def max5(field: np.ndarray, offset: int, boundary: BoundaryRule = PERIODIC) -> np.ndarray:
    """Five-point maximum, the max-plus counterpart of :func:`mean5`."""
    field = np.asarray(field)
    if isinstance(boundary, Fixed) and field.dtype.kind in "iu":
        if boundary.value != int(boundary.value) or abs(boundary.value) > INT_GUARD:
            raise ValueError("integer fields need an integral Fixed constant within the guard")
        boundary = Fixed(int(boundary.value))
    if offset == 0:
        return field.copy()
    return np.maximum.reduce(_five(field, offset, boundary))


def field_sum(field: np.ndarray) -> float:
    return float(np.sum(field, dtype=np.float64))
