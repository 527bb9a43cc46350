"""
Threshold-based adaptive masking
================================

The most important ``rho`` fraction of tokens forms the important region.
A ``gamma`` share of the masking budget lands inside it; the remainder is
scattered over the rest of the map, so the total ratio is always exact.
"""

import numpy as np

import amaze

rng = np.random.default_rng(1)
prior = rng.uniform(size=(1, 64))

for gamma in (0.0, 0.5, 1.0):
    cfg = amaze.ThresholdMaskConfig(rho=0.25, gamma=gamma, seed=7)
    mask = amaze.threshold_mask(prior, cfg)
    region = np.argsort(-prior[0], kind="stable")[:16]
    inside = int(np.count_nonzero(mask.values[0, region] == 0))
    print(f"gamma={gamma:.1f}: masked={int(mask.zero_counts()[0])}, inside important region={inside}")

# Masks multiply every channel of their cell.
features = rng.normal(size=(1, 4, 8, 8)).astype(np.float32)
mask = amaze.threshold_mask(prior, amaze.ThresholdMaskConfig(rho=0.25, gamma=0.5, seed=7))
masked = amaze.apply_mask(features, mask)
print("zeroed cells per channel:", [int((masked[0, c] == 0).sum()) for c in range(4)])
print(mask.values[0].reshape(8, 8).astype(int))
