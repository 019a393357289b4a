"""Trace metrics recorded by the benchmark harness.

All metrics that need the full gradient are computed only at the logging
cadence; the harness keeps their cost out of the recorded elapsed time.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .problems import SmoothLoss
from .regularizers import L1Regularizer


@dataclasses.dataclass
class TraceRecord:
    """One logged benchmark row; serialized as a CSV line.

    rel_subopt is None until the suite-level best objective is known and
    backfilled. eta is the step size the method just used; branch is the
    step-size branch name for the adaptive method and "-" otherwise.
    """

    iter: int
    elapsed_s: float
    f_val: float
    rel_subopt: float | None
    grad_err: float
    stationarity: float
    eta: float
    branch: str


def objective(loss: SmoothLoss, reg: L1Regularizer, x: np.ndarray) -> float:
    """Composite objective F(x) = f(x) + r(x)."""
    return loss.loss_value(x) + reg.value(x)


def rel_subopt(f_val: float, f_star: float) -> float:
    """|f_val - f_star| / f_star. Requires f_star > 0."""
    if not f_star > 0.0:
        raise ValueError(f"rel_subopt needs f_star > 0, got {f_star!r}")
    return abs(f_val - f_star) / f_star


def grad_estimation_error(d: np.ndarray, loss: SmoothLoss, x: np.ndarray) -> float:
    """||d - full_grad(x)||_2 for a method's gradient estimate d formed at x."""
    diff = d - loss.full_grad(x)
    return float(np.sqrt(diff @ diff))


def stationarity(loss: SmoothLoss, reg: L1Regularizer, x: np.ndarray) -> float:
    """Distance from 0 to the composite subdifferential at x."""
    return reg.subdiff_dist(loss.full_grad(x), x)
