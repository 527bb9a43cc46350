"""Progressive masking schedule across pyramid scales and epochs."""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_SCALE_RHOS = (0.20, 0.30, 0.40, 0.50)


@dataclass(frozen=True)
class ScheduleConfig:
    E_total: int
    k0: float = 0.5
    scale_rhos: tuple[float, ...] = DEFAULT_SCALE_RHOS
    warmup_fraction: float = 0.5

    def __post_init__(self):
        if self.E_total < 1:
            raise ValueError(f"schedule: E_total must be >= 1, got {self.E_total}")
        if self.k0 < 0:
            raise ValueError(f"schedule: k0 must be >= 0, got {self.k0}")
        if not 0.0 < self.warmup_fraction <= 1.0:
            raise ValueError(f"schedule: warmup_fraction must be in (0, 1], got {self.warmup_fraction}")
        for i, r in enumerate(self.scale_rhos):
            if not 0.0 <= r <= 1.0:
                raise ValueError(f"schedule: scale_rhos[{i}] must be in [0, 1], got {r}")
        object.__setattr__(self, "scale_rhos", tuple(self.scale_rhos))


def _check_epoch(epoch: int, total: int):
    if total < 1:
        raise ValueError(f"schedule: E_total must be >= 1, got {total}")
    if epoch < 0:
        raise ValueError(f"schedule: epoch must be >= 0, got {epoch}")


def k_at_epoch(k0: float, epoch: int, total: int) -> float:
    """Linearly decaying window half-width; 0 from ``epoch == total`` onwards."""
    _check_epoch(epoch, total)
    if epoch >= total:
        return 0.0
    return k0 * (1.0 - epoch / total)


def warmup_end(total: int, warmup_fraction: float) -> int:
    return math.ceil(warmup_fraction * total)


def rho_at_epoch(rho_target: float, epoch: int, total: int, warmup_fraction: float = 0.5) -> float:
    """Masking ratio ramping from ``rho_target / 2`` at epoch 0 to ``rho_target`` at the end of warmup."""
    _check_epoch(epoch, total)
    end = warmup_end(total, warmup_fraction)
    if epoch >= end:
        return rho_target
    return rho_target * (0.5 + 0.5 * epoch / end)


def scale_plan(cfg: ScheduleConfig, epoch: int) -> list[tuple[float, float]]:
    """``(rho, k)`` for every configured scale at ``epoch``."""
    k = k_at_epoch(cfg.k0, epoch, cfg.E_total)
    return [(rho_at_epoch(r, epoch, cfg.E_total, cfg.warmup_fraction), k) for r in cfg.scale_rhos]
