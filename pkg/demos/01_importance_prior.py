"""
Importance prior from a feature map
===================================

A feature map is flattened into tokens, passed through the residual
attention adapter, and each token is scored by its mean inner product with
every other token.  Scores are min-max normalised per image.
"""

import numpy as np

import amaze

# A synthetic 1 x 8 x 6 x 6 feature map: background noise plus a bright
# 2 x 2 "object" whose cells share a common direction in channel space.
rng = np.random.default_rng(0)
features = rng.normal(scale=0.3, size=(1, 8, 6, 6)).astype(np.float32)
direction = rng.normal(size=8).astype(np.float32)
features[0, :, 2:4, 3:5] += 2.0 * direction[:, None, None]

# Reshape to (B, N, C); token j sits at row j // W, column j % W.
tokens = amaze.feature_to_tokens(features)
print("tokens:", tokens.shape)

# The adapter is forward-only; weights come from a seeded Xavier init.
params = amaze.init_params(dim=8, seed=0)
encoded = amaze.encode_tokens(tokens, params)

prior = amaze.importance_prior(encoded)
print("importance prior (6 x 6):")
print(np.array2string(prior[0].reshape(6, 6), precision=2, suppress_small=True))

# The object cells should dominate the ranking.
top = np.argsort(-prior[0], kind="stable")[:4]
print("top-4 cells (row, col):", [divmod(int(j), 6) for j in top])
