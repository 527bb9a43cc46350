"""Counter-based deterministic random numbers.

The generator is ``splitmix64-ctr`` (version 1): draw number ``i`` (1-based)
of a stream with seed ``s`` is the SplitMix64 finalizer applied to
``s + i * 0x9E3779B97F4A7C15 (mod 2**64)``.  Because every draw is a pure
function of ``(seed, counter)`` the sequence is identical on every platform
and can be reproduced by any other implementation from the seed alone.

Derived quantities:

* ``uniform``: ``(u >> 11) * 2**-53``, a double in ``[0, 1)``
* ``bits``: ``u >> 63``, a fair coin
* ``below(n)``: ``(u * n) >> 64`` (multiply-high), an integer in ``[0, n)``
* ``spawn(key)``: a child stream with seed ``mix(seed ^ SPAWN_SALT + key * GAMMA)``
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "splitmix64-ctr/1"

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
SPAWN_SALT = 0x6A09E667F3BCC909


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


class SeededRng:
    """Single-owner random stream.

    Not thread-safe; give each worker its own stream via :meth:`spawn`.
    """

    algorithm = ALGORITHM

    def __init__(self, seed: int = 0):
        if seed < 0:
            raise ValueError(f"seed must be a non-negative 64-bit integer, got {seed}")
        self.seed = int(seed) & MASK64
        self.counter = 0

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed}, counter={self.counter})"

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.seed + self.counter * GAMMA)

    def u64_array(self, size: int) -> np.ndarray:
        """``size`` consecutive draws as a uint64 array (same values as repeated :meth:`next_u64`)."""
        start = self.counter + 1
        self.counter += size
        # counters are reduced mod 2**64 before entering numpy
        base = np.uint64((self.seed + start * GAMMA) & MASK64)
        steps = np.arange(size, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = base + steps * np.uint64(GAMMA)
        return _mix64_array(z)

    def uniform(self, size: int) -> np.ndarray:
        return (self.u64_array(size) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def bits(self, size: int) -> np.ndarray:
        return (self.u64_array(size) >> np.uint64(63)).astype(np.int64)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError(f"below() needs a positive bound, got {n}")
        return (self.next_u64() * n) >> 64

    def spawn(self, key: int) -> "SeededRng":
        """Independent child stream; depends only on ``(seed, key)``, not on the counter."""
        return SeededRng(mix64((self.seed ^ SPAWN_SALT) + (int(key) & MASK64) * GAMMA))


def sample_without_replacement(n: int, m: int, rng: SeededRng) -> np.ndarray:
    """Uniform random ``m``-subset of ``range(n)``, returned sorted.

    Partial Fisher-Yates: step ``i`` swaps position ``i`` with ``i + below(n - i)``.
    Consumes exactly ``m`` draws.
    """
    if m < 0 or n < 0:
        raise ValueError(f"counts must be non-negative, got n={n}, m={m}")
    if m > n:
        raise ValueError(f"cannot sample {m} items without replacement from {n}")
    pool = list(range(n))
    for i in range(m):
        j = i + rng.below(n - i)
        pool[i], pool[j] = pool[j], pool[i]
    return np.array(sorted(pool[:m]), dtype=np.int64)
