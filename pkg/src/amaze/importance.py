"""Correlation-based importance prior over tokens."""

from __future__ import annotations

import numpy as np

from .tensor import ShapeError, minmax_normalize


def patch_importance(j: int, tokens) -> float:
    """Mean inner product of token ``j`` with every token (itself included)."""
    t = np.asarray(tokens, dtype=np.float64)
    if t.ndim != 2:
        raise ShapeError(f"importance: expected an N x C token matrix, got shape {t.shape}")
    n = t.shape[0]
    if not 0 <= j < n:
        raise ValueError(f"importance: token index {j} out of range for {n} tokens")
    return float((t @ t[j]).mean())


def raw_importance(tokens) -> np.ndarray:
    """Row means of the token Gram matrix, per batch: ``(B, N, C) -> (B, N)``."""
    t = np.asarray(tokens, dtype=np.float64)
    if t.ndim != 3:
        raise ShapeError(f"importance: expected B x N x C tokens, got shape {t.shape}")
    gram = t @ np.swapaxes(t, -1, -2)
    return gram.mean(axis=-1)


def importance_prior(tokens) -> np.ndarray:
    """Importance scores in ``[0, 1]``, min-max normalised independently per batch."""
    raw = raw_importance(tokens)
    return np.stack([minmax_normalize(row) for row in raw])
