#!/usr/bin/env python3
"""Smooth losses and the l1 proximal map.

Builds the two supported losses over one dataset, inspects gradients and
smoothness bounds, and walks the soft-threshold prox plus the subdifferential
distance used as the stationarity measure.
"""

import numpy as np

from proxsgd import L1Regularizer, SmoothLoss, soft_threshold, synthetic_logistic

ds = synthetic_logistic(n_samples=200, n_features=8, seed=3)

for kind in ("logistic", "least_squares"):
    loss = SmoothLoss(ds, kind)
    x = np.zeros(8)
    print(f"{kind:14s} f(0) = {loss.loss_value(x):.6f}   L = {loss.lipschitz_bound():.4f}")
    g_full = loss.full_grad(x)
    g_batch = loss.batch_mean_grad(x, np.arange(ds.n_samples))
    print(f"{'':14s} full gradient == all-samples batch mean: "
          f"{np.allclose(g_full, g_batch, atol=1e-12)}")

reg = L1Regularizer(lam=0.1)
v = np.array([0.35, -0.02, 0.0, -1.4])
print("\nprox_{t*lam*|.|}(v) with t=1:", reg.prox(v, 1.0))
print("same via soft_threshold:     ", soft_threshold(v, 0.1))

# stationarity: distance from 0 to the composite subdifferential
loss = SmoothLoss(ds, "least_squares")
x = np.array([0.2, 0.0, -0.1, 0.0, 0.0, 0.0, 0.0, 0.0])
print("\nsubdifferential distance at a sparse point:",
      round(reg.subdiff_dist(loss.full_grad(x), x), 6))
