"""
Progressive masking schedule
============================

Deeper pyramid levels get higher target ratios.  Early in training the ratio
starts at half its target and ramps up linearly over the warmup; the RF-GAM
window half-width ``k`` decays linearly to zero, which pushes more cells
into the hard-mask branch as training proceeds.
"""

import numpy as np

import amaze

cfg = amaze.ScheduleConfig(E_total=10, k0=0.5)
print("epoch | rho per scale            | k")
for epoch in range(0, 11, 2):
    plan = amaze.scale_plan(cfg, epoch)
    rhos = " ".join(f"{r:.3f}" for r, _ in plan)
    print(f"{epoch:5d} | {rhos} | {plan[0][1]:.3f}")

# Effect of the k decay on a fixed intensity field.
rng = np.random.default_rng(3)
points = amaze.RadiationPointSet(
    indices=np.zeros((1, 5), int),
    centers=rng.uniform(0.1, 0.9, size=(1, 5, 2)),
    amplitudes=rng.uniform(size=(1, 5)),
    variances=rng.uniform(0.002, 0.02, size=(1, 5)),
)
field = amaze.intensity_field(points, 24, 24)
for epoch in (0, 5, 10):
    k = amaze.k_at_epoch(cfg.k0, epoch, cfg.E_total)
    m = amaze.rfgam_mask(field, *amaze.thresholds(field.mean, field.std, 0.5, k)).values
    print(f"epoch {epoch:2d}: k={k:.2f} hard={int((m == 0).sum())} soft={int(((m > 0) & (m < 1)).sum())}")
