"""Threshold-based adaptive masking.

Per batch row, with ``n_total = round_half_up(rho * N)``:

1. the ``n_total`` highest-scoring tokens form the important region;
2. ``round_half_up(gamma * n_total)`` of them are masked at random;
3. the rest of the budget is drawn at random from outside the region.

If the outside pool is too small for step 3 the shortfall is taken from the
still-unmasked important tokens, so exactly ``n_total`` tokens are masked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mask import MaskMatrix, rank_desc, round_half_up
from .rng import SeededRng, sample_without_replacement


@dataclass(frozen=True)
class ThresholdMaskConfig:
    rho: float
    gamma: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"threshold: rho must be in [0, 1], got {self.rho}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"threshold: gamma must be in [0, 1], got {self.gamma}")


def mask_budget(n: int, rho: float, gamma: float) -> tuple[int, int, int]:
    """(total masked, masked inside the important region, masked outside it)."""
    n_total = round_half_up(rho * n)
    n_imp = round_half_up(gamma * n_total)
    n_rest = n_total - n_imp
    outside = n - n_total
    if n_rest > outside:
        n_imp += n_rest - outside
        n_rest = outside
    return n_total, n_imp, n_rest


def _mask_row(scores: np.ndarray, cfg: ThresholdMaskConfig, rng: SeededRng) -> np.ndarray:
    n = scores.shape[0]
    n_total, n_imp, n_rest = mask_budget(n, cfg.rho, cfg.gamma)
    order = rank_desc(scores)
    important, others = order[:n_total], order[n_total:]
    row = np.ones(n)
    row[important[sample_without_replacement(n_total, n_imp, rng)]] = 0.0
    row[others[sample_without_replacement(others.size, n_rest, rng)]] = 0.0
    return row


def threshold_mask(prior, cfg: ThresholdMaskConfig) -> MaskMatrix:
    """Binary mask for a ``(B, N)`` importance prior.

    Batch row ``b`` draws from ``SeededRng(cfg.seed).spawn(b)``, so rows are
    independent of one another and of processing order.
    """
    scores = np.asarray(prior, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[1] < 1:
        raise ValueError(f"threshold: prior must be B x N with N >= 1, got shape {scores.shape}")
    root = SeededRng(cfg.seed)
    rows = [_mask_row(s, cfg, root.spawn(b)) for b, s in enumerate(scores)]
    return MaskMatrix(np.stack(rows), binary=True)
