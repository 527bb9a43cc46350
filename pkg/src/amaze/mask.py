"""Mask container, ranking helpers and mask application."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tensor import ShapeError


@dataclass(frozen=True, eq=False)
class MaskMatrix:
    """Per-token keep factors, shape ``(B, N)``; 0 masks a token, 1 keeps it."""

    values: np.ndarray
    binary: bool

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ShapeError(f"mask: values must be B x N, got shape {v.shape}")
        if np.any(v < 0.0) or np.any(v > 1.0):
            raise ValueError("mask: values must lie in [0, 1]")
        if self.binary and not np.all((v == 0.0) | (v == 1.0)):
            raise ValueError("mask: binary mask holds values other than 0 and 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def zero_counts(self) -> np.ndarray:
        return (self.values == 0.0).sum(axis=1)


def round_half_up(x: float) -> int:
    # the 1e-9 nudge keeps products like 0.35 * 10 = 3.4999999999999996 on the intended side
    return int(math.floor(x + 0.5 + 1e-9))


def rank_desc(scores) -> np.ndarray:
    """Indices by descending score; equal scores keep ascending index order."""
    s = np.asarray(scores, dtype=np.float64)
    return np.argsort(-s, kind="stable")


def apply_mask(features, mask) -> np.ndarray:
    """Multiply each spatial cell of ``(B, C, H, W)`` features by its token's mask value.

    ``mask`` may be a :class:`MaskMatrix` or a ``(B, H*W)`` array.  The
    result keeps the feature dtype.
    """
    f = np.asarray(features)
    m = mask.values if isinstance(mask, MaskMatrix) else np.asarray(mask, dtype=np.float64)
    if f.ndim != 4:
        raise ShapeError(f"mask: features must be B x C x H x W, got shape {f.shape}")
    b, _, h, w = f.shape
    if m.shape != (b, h * w):
        raise ShapeError(f"mask: mask shape {m.shape} does not match features {f.shape} (need {(b, h * w)})")
    return (f * m.reshape(b, 1, h, w)).astype(f.dtype)
