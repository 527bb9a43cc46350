"""Greyscale PGM (P5) heatmaps of intensity fields and masks."""

from __future__ import annotations

import os

import numpy as np

from .mask import MaskMatrix
from .rfgam import IntensityField
from .tensor import ShapeError, minmax_normalize


def to_pixels(grid) -> np.ndarray:
    """``round(255 * minmax_normalize(grid))`` with halves rounded up, as uint8."""
    g = np.asarray(grid, dtype=np.float64)
    if not np.all(np.isfinite(g)):
        raise ValueError("render: values must be finite")
    return np.floor(255.0 * minmax_normalize(g) + 0.5).astype(np.uint8)


def pgm_bytes(grid) -> bytes:
    g = np.asarray(grid)
    if g.ndim != 2:
        raise ShapeError(f"render: need an H x W grid, got shape {g.shape}")
    h, w = g.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + to_pixels(g).tobytes()


def render_pgm(source, path, batch: int = 0, shape: tuple[int, int] | None = None) -> None:
    """Write one batch row of ``source`` as a PGM image.

    ``source`` is an :class:`IntensityField`, a :class:`MaskMatrix` (needs
    ``shape=(H, W)``) or a plain 2-D grid.
    """
    if isinstance(source, IntensityField):
        grid = source.grid[batch]
    elif isinstance(source, MaskMatrix):
        if shape is None:
            raise ShapeError("render: a mask needs shape=(H, W)")
        grid = source.values[batch].reshape(shape)
    else:
        grid = np.asarray(source)
    with open(os.fspath(path), "wb") as fh:
        fh.write(pgm_bytes(grid))
