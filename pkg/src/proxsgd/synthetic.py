"""Deterministic synthetic problem generators for tests, demos, and selftest."""

from __future__ import annotations

import numpy as np

from .core import Dataset, SparseVec


def _sorted_support(rng: np.random.Generator, n_features: int, nnz: int) -> np.ndarray:
    idx = rng.choice(n_features, size=min(nnz, n_features), replace=False)
    idx.sort()
    return idx.astype(np.int32)


def synthetic_logistic(
    n_samples: int = 1000,
    n_features: int = 20,
    nnz_per_row: int = 10,
    label_noise: float = 0.2,
    scale_spread: float = 1.0,
    seed: int = 0,
) -> Dataset:
    """Sparse binary classification data from a planted linear separator.

    Rows have nnz_per_row Gaussian entries; each row is rescaled by
    10**U(-scale_spread, scale_spread), so per-sample norms span about
    2*scale_spread decades the way real document data does. Labels are the
    sign of the planted margin with a label_noise fraction flipped, which
    keeps the minimizer finite and the loss genuinely curved there.
    """
    rng = np.random.default_rng(seed)
    w = rng.normal(size=n_features)
    rows = []
    margins = np.zeros(n_samples)
    for j in range(n_samples):
        idx = _sorted_support(rng, n_features, nnz_per_row)
        scale = 10.0 ** rng.uniform(-scale_spread, scale_spread)
        vals = scale * rng.normal(size=idx.size) / np.sqrt(idx.size)
        rows.append(SparseVec(idx, vals))
        margins[j] = vals @ w[idx]
    labels = np.where(margins >= 0, 1.0, -1.0)
    flip = rng.uniform(size=n_samples) < label_noise
    labels[flip] *= -1.0
    return Dataset(rows, labels, n_features=n_features)


def synthetic_lasso(
    n_samples: int = 200,
    n_features: int = 50,
    support_size: int = 5,
    noise: float = 0.01,
    seed: int = 0,
) -> tuple[Dataset, np.ndarray]:
    """Dense least-squares rows with a planted sparse coefficient vector.

    Returns (dataset, x_star). Rows are Gaussian scaled by 1/sqrt(n_features)
    so per-sample norms are near 1; with n_samples > n_features the smooth
    part is strongly convex almost surely.
    """
    rng = np.random.default_rng(seed)
    x_star = np.zeros(n_features)
    support = rng.choice(n_features, size=support_size, replace=False)
    x_star[support] = rng.uniform(0.5, 2.0, size=support_size) * rng.choice([-1.0, 1.0], size=support_size)
    all_idx = np.arange(n_features, dtype=np.int32)
    rows = []
    labels = np.zeros(n_samples)
    for j in range(n_samples):
        vals = rng.normal(size=n_features) / np.sqrt(n_features)
        rows.append(SparseVec(all_idx, vals))
        labels[j] = vals @ x_star + noise * rng.normal()
    return Dataset(rows, labels, n_features=n_features), x_star


def synthetic_wide(
    n_samples: int = 20000,
    n_features: int = 8000,
    nnz_per_row: int = 3,
    seed: int = 0,
) -> Dataset:
    """Many samples in a high ambient dimension but with tiny row support.

    The dataset itself stays small, while any dense N x n_features per-sample
    table would not; used to exercise memory-budget refusals.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n_samples):
        idx = _sorted_support(rng, n_features, nnz_per_row)
        rows.append(SparseVec(idx, rng.normal(size=idx.size)))
    labels = rng.choice([-1.0, 1.0], size=n_samples)
    return Dataset(rows, labels, n_features=n_features)
