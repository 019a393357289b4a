import numpy as np
import pytest

from proxsgd.problems import SmoothLoss
from proxsgd.synthetic import synthetic_logistic


@pytest.fixture(scope="session")
def small_dataset():
    return synthetic_logistic(n_samples=60, n_features=8, nnz_per_row=5, seed=11)


@pytest.fixture(scope="session")
def small_logistic(small_dataset):
    return SmoothLoss(small_dataset, "logistic")


@pytest.fixture(scope="session")
def small_least_squares(small_dataset):
    return SmoothLoss(small_dataset, "least_squares")


@pytest.fixture()
def rng_np():
    return np.random.default_rng(1234)
