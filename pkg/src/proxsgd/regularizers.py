"""Convex regularizers with closed-form proximal maps.

The shipped regularizer is the weighted l1 norm r(x) = lam * ||x||_1. The
Surrogate wrapper exists so prox-friendly upper models D(., y) of a harder
regularizer can be plugged in later; only the trivial D(x, y) = r(x) is
provided.
"""

from __future__ import annotations

import numpy as np


def soft_threshold(v: np.ndarray, thresh: float) -> np.ndarray:
    """Componentwise sign(v) * max(|v| - thresh, 0)."""
    return np.sign(v) * np.maximum(np.abs(v) - thresh, 0.0)


class L1Regularizer:
    """r(x) = lam * ||x||_1.

    Args:
      lam: nonnegative weight (default 1e-5, the benchmark setting).
    """

    def __init__(self, lam: float = 1e-5):
        if lam < 0:
            raise ValueError("lam must be nonnegative")
        self.lam = float(lam)

    def value(self, x: np.ndarray) -> float:
        return self.lam * float(np.abs(x).sum())

    def prox(self, v: np.ndarray, t: float) -> np.ndarray:
        """argmin_z 0.5*||z - v||^2 + t * r(z), the soft threshold at t*lam."""
        if t < 0:
            raise ValueError("prox step t must be nonnegative")
        return soft_threshold(np.asarray(v, dtype=np.float64), t * self.lam)

    def subdiff_dist(self, g: np.ndarray, x: np.ndarray) -> float:
        """Euclidean distance from 0 to g + subdifferential of r at x.

        Componentwise residual: g_i + lam*sign(x_i) where x_i != 0, and
        max(|g_i| - lam, 0) where x_i == 0.
        """
        g = np.asarray(g, dtype=np.float64)
        x = np.asarray(x, dtype=np.float64)
        if g.shape != x.shape:
            raise ValueError("g and x must have the same shape")
        res = np.where(
            x != 0.0,
            g + self.lam * np.sign(x),
            np.maximum(np.abs(g) - self.lam, 0.0),
        )
        return float(np.sqrt(res @ res))


class TrivialSurrogate:
    """Anchor-independent surrogate D(x, y) = r(x).

    Satisfies the surrogate laws D(y, y) = r(y) and D(x, y) >= r(x) with
    equality, and its prox reduces to the base regularizer's prox.
    """

    def __init__(self, base: L1Regularizer):
        self.base = base

    def value(self, x: np.ndarray, anchor: np.ndarray) -> float:
        return self.base.value(x)

    def prox(self, v: np.ndarray, t: float, anchor: np.ndarray) -> np.ndarray:
        return self.base.prox(v, t)
