"""Radiance-field Gaussian adaptive masking (RF-GAM).

The top-K tokens of the importance prior become isotropic Gaussian emitters
placed at their cell centres.  Summing the emitters over the token grid gives
an intensity field; cells far above the field's mean are hard-masked, cells
below a lower threshold are kept, and the band in between gets a soft mask
that falls linearly with intensity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .adapter import AdapterParams, cross_attend, estimate_variance
from .mask import MaskMatrix, rank_desc
from .tensor import DEGENERATE_RANGE, ShapeError

DEFAULT_MAX_POINTS = 16


@dataclass(frozen=True)
class RfGamConfig:
    """``K=None`` means ``min(16, N)``.  RF-GAM draws no random numbers; ``seed`` is carried for config parity."""

    K: int | None = None
    delta: float = 1.0
    k: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.K is not None and self.K < 1:
            raise ValueError(f"rfgam: K must be >= 1, got {self.K}")
        if self.k < 0:
            raise ValueError(f"rfgam: window half-width k must be >= 0, got {self.k}")

    def points_for(self, n: int) -> int:
        return min(DEFAULT_MAX_POINTS, n) if self.K is None else self.K


@dataclass(frozen=True, eq=False)
class RadiationPointSet:
    """K emitters per batch row; every array has leading shape ``(B, K)``.

    ``centers[..., 0]`` is x (column direction), ``centers[..., 1]`` is y.
    """

    indices: np.ndarray
    centers: np.ndarray
    amplitudes: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        b, k = np.shape(self.indices)
        if np.shape(self.centers) != (b, k, 2) or np.shape(self.amplitudes) != (b, k) or np.shape(self.variances) != (b, k):
            raise ShapeError("rfgam: radiation point arrays disagree in shape")
        if k < 1:
            raise ValueError("rfgam: a radiation point set needs at least one point")
        if np.any(np.asarray(self.variances) <= 0):
            raise ValueError("rfgam: variances must be positive")

    @property
    def count(self) -> int:
        return int(np.shape(self.indices)[1])

    def scaled(self, factor: float) -> "RadiationPointSet":
        """Same emitters with every amplitude multiplied by ``factor``."""
        return RadiationPointSet(self.indices, self.centers, np.asarray(self.amplitudes) * factor, self.variances)


@dataclass(frozen=True, eq=False)
class IntensityField:
    """Intensity per cell, shape ``(B, H, W)``, with per-row mean and population std."""

    grid: np.ndarray
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def from_grid(cls, grid) -> "IntensityField":
        g = np.asarray(grid, dtype=np.float64)
        flat = g.reshape(g.shape[0], -1)
        return cls(g, flat.mean(axis=1), flat.std(axis=1))


def cell_center(j: int, height: int, width: int) -> tuple[float, float]:
    """Normalised ``(x, y)`` centre of token ``j``."""
    return ((j % width + 0.5) / width, (j // width + 0.5) / height)


def select_radiation_points(prior, tokens, params: AdapterParams, height: int, width: int, K: int) -> RadiationPointSet:
    scores = np.asarray(prior, dtype=np.float64)
    t = np.asarray(tokens)
    if scores.ndim != 2 or t.ndim != 3 or t.shape[:2] != scores.shape:
        raise ShapeError(f"rfgam: prior {scores.shape} and tokens {t.shape} disagree")
    b, n = scores.shape
    if n != height * width:
        raise ShapeError(f"rfgam: {n} tokens do not fill a {height}x{width} grid")
    if not 1 <= K <= n:
        raise ValueError(f"rfgam: K must be in [1, {n}], got {K}")

    indices = np.stack([rank_desc(row)[:K] for row in scores])
    centers = np.empty((b, K, 2))
    variances = np.empty((b, K))
    for bi in range(b):
        for ki, j in enumerate(indices[bi]):
            centers[bi, ki] = cell_center(int(j), height, width)
            query = t[bi, j]
            context = cross_attend(query, t[bi], params)
            variances[bi, ki] = estimate_variance(query, context, params)
    amplitudes = np.take_along_axis(scores, indices, axis=1)
    return RadiationPointSet(indices, centers, amplitudes, variances)


def intensity_field(points: RadiationPointSet, height: int, width: int) -> IntensityField:
    """Sum of Gaussian emitters evaluated at every cell centre."""
    xs = (np.arange(width) + 0.5) / width
    ys = (np.arange(height) + 0.5) / height
    cx = np.asarray(points.centers)[:, :, 0, None, None]
    cy = np.asarray(points.centers)[:, :, 1, None, None]
    d2 = (xs[None, None, None, :] - cx) ** 2 + (ys[None, None, :, None] - cy) ** 2
    var = np.asarray(points.variances, dtype=np.float64)[:, :, None, None]
    amp = np.asarray(points.amplitudes, dtype=np.float64)[:, :, None, None]
    grid = (amp * np.exp(-d2 / (2.0 * var))).sum(axis=1)
    return IntensityField.from_grid(grid)


def thresholds(mean, std, delta: float, k: float):
    """``(T_hard, T_no_mask) = mean + (delta +/- k) * std``; works on scalars or per-row arrays."""
    mean = np.asarray(mean, dtype=np.float64)
    std = np.asarray(std, dtype=np.float64)
    t_hard = mean + (delta + k) * std
    t_no_mask = mean + (delta - k) * std
    if t_hard.ndim == 0:
        return float(t_hard), float(t_no_mask)
    return t_hard, t_no_mask


def piecewise_mask(intensity, t_hard: float, t_no_mask: float) -> np.ndarray:
    """Hard / soft / keep rule for one batch row."""
    if t_hard < t_no_mask:
        raise ValueError(f"rfgam: T_hard ({t_hard}) is below T_no_mask ({t_no_mask})")
    i = np.asarray(intensity, dtype=np.float64)
    band = t_hard - t_no_mask
    if band < DEGENERATE_RANGE:
        return np.where(i >= t_hard, 0.0, 1.0)
    soft = 1.0 - (i - t_no_mask) / band
    m = np.where(i > t_hard, 0.0, np.where(i < t_no_mask, 1.0, soft))
    return np.clip(m, 0.0, 1.0)


def rfgam_mask(field: IntensityField, t_hard, t_no_mask) -> MaskMatrix:
    """Soft mask ``(B, H*W)`` from a field and per-row (or shared) thresholds."""
    b = field.grid.shape[0]
    flat = field.grid.reshape(b, -1)
    th = np.broadcast_to(np.asarray(t_hard, dtype=np.float64), (b,))
    tn = np.broadcast_to(np.asarray(t_no_mask, dtype=np.float64), (b,))
    rows = [piecewise_mask(flat[i], float(th[i]), float(tn[i])) for i in range(b)]
    return MaskMatrix(np.stack(rows), binary=False)


@dataclass(frozen=True, eq=False)
class RfGamResult:
    mask: MaskMatrix
    field: IntensityField
    points: RadiationPointSet
    t_hard: np.ndarray
    t_no_mask: np.ndarray


def rfgam(prior, tokens, params: AdapterParams, height: int, width: int, cfg: RfGamConfig) -> RfGamResult:
    """Points, field, thresholds and mask in one call."""
    n = np.shape(prior)[1]
    points = select_radiation_points(prior, tokens, params, height, width, cfg.points_for(n))
    field = intensity_field(points, height, width)
    t_hard, t_no_mask = thresholds(field.mean, field.std, cfg.delta, cfg.k)
    return RfGamResult(rfgam_mask(field, t_hard, t_no_mask), field, points, t_hard, t_no_mask)
