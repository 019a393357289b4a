"""Finite-sum smooth losses over sparse datasets.

Both supported losses have the form f(x) = (1/N) sum_j L(x; row_j, y_j) and
per-sample gradients that are scalar multiples of the data rows, which is what
lets gradient tables and variance-reduction corrections stay on row support.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit

from .core import Dataset, SparseVec, sv_dot

LOSS_KINDS = ("logistic", "least_squares")


def _sigmoid(z: float) -> float:
    # scalar logistic function, stable for large |z|
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


class SmoothLoss:
    """Mean of per-sample convex losses, with batch and full gradients.

    logistic:       L(x; d, y) = log(1 + exp(-y * <d, x>)),  y in {-1, +1}
    least_squares:  L(x; a, y) = 0.5 * (y - <a, x>)^2

    The smoothness constant is the max over samples of the per-sample bound:
    ||row||^2 / 4 for logistic, ||row||^2 for least squares.

    Args:
      dataset: sparse rows and labels.
      kind: "logistic" or "least_squares".
    """

    def __init__(self, dataset: Dataset, kind: str = "logistic"):
        if kind not in LOSS_KINDS:
            raise ValueError(f"unknown loss kind {kind!r}, expected one of {LOSS_KINDS}")
        if dataset.n_samples == 0:
            raise ValueError("dataset is empty")
        self.dataset = dataset
        self.kind = kind
        X = dataset.X
        row_sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
        self._row_sq = row_sq
        max_sq = float(row_sq.max())
        if max_sq <= 0.0:
            raise ValueError("dataset has no nonzero row; smoothness bound is zero")
        self._L = max_sq / 4.0 if kind == "logistic" else max_sq

    @property
    def n_samples(self) -> int:
        return self.dataset.n_samples

    @property
    def n_features(self) -> int:
        return self.dataset.n_features

    def lipschitz_bound(self) -> float:
        """Smoothness constant L used for default step sizes."""
        return self._L

    # -- values -------------------------------------------------------------

    def loss_value(self, x: np.ndarray) -> float:
        """f(x), averaged over all samples (numerically stable)."""
        t = self.dataset.X @ x
        y = self.dataset.labels
        if self.kind == "logistic":
            # log(1 + exp(-y t)) via logaddexp avoids overflow at huge margins
            terms = np.logaddexp(0.0, -y * t)
        else:
            terms = 0.5 * (y - t) ** 2
        return float(terms.mean())

    # -- gradients ------------------------------------------------------------

    def _coefs(self, t: np.ndarray, y: np.ndarray) -> np.ndarray:
        # per-sample dL/dt at margin t; gradient of sample j is coef_j * row_j
        if self.kind == "logistic":
            return -y * expit(-y * t)
        return t - y

    def all_sample_coefs(self, x: np.ndarray) -> np.ndarray:
        """Per-sample gradient coefficients for every sample at once."""
        X = self.dataset.X
        return self._coefs(X @ x, self.dataset.labels)

    def full_grad(self, x: np.ndarray) -> np.ndarray:
        return self.dataset.X.T @ (self.all_sample_coefs(x) / self.n_samples)

    def batch_mean_grad(self, x: np.ndarray, batch: np.ndarray) -> np.ndarray:
        """Mean gradient over a batch of sample ids (with multiplicity)."""
        Xb = self.dataset.X[batch]
        c = self._coefs(Xb @ x, self.dataset.labels[batch])
        return Xb.T @ (c / len(batch))

    def sample_coef(self, x: np.ndarray, j: int) -> float:
        """Scalar c such that the gradient of sample j at x is c * row_j."""
        row = self.dataset.rows[j]
        t = sv_dot(row, x)
        y = float(self.dataset.labels[j])
        if self.kind == "logistic":
            return -y * _sigmoid(-y * t)
        return t - y

    def sample_grad(self, x: np.ndarray, j: int) -> SparseVec:
        """Gradient of the j-th sample's loss at x, on the row's support."""
        row = self.dataset.rows[j]
        c = self.sample_coef(x, j)
        return SparseVec(row.indices, c * row.values)
