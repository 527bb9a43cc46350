"""Concentration-bound calculators and a Monte-Carlo check of Hoeffding's inequality."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import SeededRng

# draws per chunk in monte_carlo_violation; bounds peak memory
_CHUNK = 1 << 22


@dataclass(frozen=True)
class BoundParams:
    """Inputs of the similarity deviation bound.

    ``delta_conf`` is a confidence level, unrelated to the RF-GAM threshold offset.
    """

    tau: float
    beta: float = 0.0
    L: float = 0.0
    delta_conf: float = 0.05
    N_batch: int = 1

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"theory: tau must be > 0, got {self.tau}")
        if self.beta < 0:
            raise ValueError(f"theory: beta must be >= 0, got {self.beta}")
        if self.L < 0:
            raise ValueError(f"theory: L must be >= 0, got {self.L}")
        if not 0.0 < self.delta_conf <= 1.0:
            raise ValueError(f"theory: delta_conf must be in (0, 1], got {self.delta_conf}")
        if self.N_batch < 1:
            raise ValueError(f"theory: N_batch must be >= 1, got {self.N_batch}")


def hoeffding_bound(n: int, eps: float) -> float:
    """``2 exp(-2 n eps^2)``, unclamped (values above 1 are vacuous but valid)."""
    if n < 1:
        raise ValueError(f"theory: sample count must be >= 1, got {n}")
    if eps < 0:
        raise ValueError(f"theory: eps must be >= 0, got {eps}")
    return 2.0 * math.exp(-2.0 * n * eps * eps)


def lemma1_deviation(p: BoundParams) -> float:
    """``(1/tau) sqrt(log(2/delta) / (2 N)) + beta L / tau``."""
    return math.sqrt(math.log(2.0 / p.delta_conf) / (2.0 * p.N_batch)) / p.tau + p.beta * p.L / p.tau


def statistical_slack(bound: float, trials: int) -> float:
    """Three binomial standard errors at success probability ``min(bound, 1)``."""
    q = min(bound, 1.0)
    return 3.0 * math.sqrt(q * (1.0 - q) / trials)


def monte_carlo_violation(n: int, eps: float, trials: int, rng: SeededRng, distribution: str = "bernoulli") -> float:
    """Fraction of ``trials`` sample means (each of ``n`` draws) with ``|mean - 0.5| >= eps``.

    ``distribution`` is ``"bernoulli"`` (fair coin, the extremal case for the
    bound) or ``"uniform"`` (Uniform[0, 1)).
    """
    if trials < 1:
        raise ValueError(f"theory: trials must be >= 1, got {trials}")
    if n < 1:
        raise ValueError(f"theory: sample count must be >= 1, got {n}")
    if distribution not in ("bernoulli", "uniform"):
        raise ValueError(f"theory: unknown distribution {distribution!r}")

    rows_per_chunk = max(1, _CHUNK // n)
    violations = 0
    done = 0
    while done < trials:
        rows = min(rows_per_chunk, trials - done)
        if distribution == "bernoulli":
            draws = rng.bits(rows * n).reshape(rows, n)
        else:
            draws = rng.uniform(rows * n).reshape(rows, n)
        dev = np.abs(draws.mean(axis=1) - 0.5)
        # ">=" with a rounding allowance so e.g. 9/20 counts at eps = 0.05
        violations += int(np.count_nonzero(dev >= eps - 1e-12))
        done += rows
    return violations / trials
