"""Five reference stochastic proximal methods used as benchmark baselines.

All states expose the same diagnostic surface the harness records: ``x`` (the
current iterate), ``d`` (the latest stochastic gradient direction), ``d_point``
(the iterate at which d was formed), and ``eta`` (the step size just used).
Step functions mutate their state in place and return it; states are
single-owner like the random streams they hold.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .core import MemoryBudgetError, NumericError, RngStream, sample_batch
from .problems import SmoothLoss
from .regularizers import L1Regularizer, soft_threshold


def _default_alpha(alpha: float | None, loss: SmoothLoss) -> float:
    # constant-step methods all default to 0.1/L
    a = 0.1 / loss.lipschitz_bound() if alpha is None else float(alpha)
    if a <= 0:
        raise ValueError("step size alpha must be positive")
    return a


def _check_finite(x: np.ndarray, k: int):
    if not np.all(np.isfinite(x)):
        raise NumericError(f"non-finite iterate at iteration {k}")


# ---------------------------------------------------------------------------
# S-PStorm: constant step, momentum variance reduction, damped averaging

@dataclasses.dataclass
class SPstormParams:
    batch_size: int = 256
    zeta: float = 1.0          # relaxation factor on the averaging step
    alpha: float | None = None  # None -> 0.1/L


@dataclasses.dataclass
class SPstormState:
    k: int
    x: np.ndarray
    x_prev: np.ndarray
    d: np.ndarray | None
    d_point: np.ndarray | None
    eta: float
    rng: RngStream


def init_spstorm(loss, params: SPstormParams, rng: RngStream, x0=None) -> SPstormState:
    x0 = np.zeros(loss.n_features) if x0 is None else np.asarray(x0, dtype=np.float64)
    return SPstormState(
        k=0, x=x0.copy(), x_prev=x0.copy(), d=None, d_point=None,
        eta=_default_alpha(params.alpha, loss), rng=rng,
    )


def spstorm_step(state: SPstormState, loss, reg, params: SPstormParams) -> SPstormState:
    """d_k = v_k + (1-beta_k)(d_{k-1} - u_k) with beta_k = 1/(k+1), then a
    proximal trial point and the damped move x + zeta*beta_k*(y - x)."""
    k = state.k + 1
    beta = 1.0 / (k + 1)
    batch = sample_batch(state.rng, loss.n_samples, params.batch_size)
    v = loss.batch_mean_grad(state.x, batch)
    if k == 1:
        d = v
    else:
        u = loss.batch_mean_grad(state.x_prev, batch)
        d = v + (1.0 - beta) * (state.d - u)
    y = reg.prox(state.x - state.eta * d, state.eta)
    x_next = state.x + params.zeta * beta * (y - state.x)
    _check_finite(x_next, k)
    state.k, state.x_prev, state.x = k, state.x, x_next
    state.d, state.d_point = d, state.x_prev
    return state


# ---------------------------------------------------------------------------
# PStorm: fully prescribed decreasing steps and momentum weights

def pstorm_eta(k: int, L: float) -> float:
    """Step size (4^(1/3) / (8 L)) / (k + 4)^(1/3)."""
    return (4.0 ** (1.0 / 3.0) / (8.0 * L)) / (k + 4.0) ** (1.0 / 3.0)


def pstorm_beta(k: int, L: float) -> float:
    """Momentum weight (1 + 24 eta_k^2 L^2 - eta_{k+1}/eta_k) / (1 + 4 eta_k^2 L^2)."""
    e1 = pstorm_eta(k, L)
    e2 = pstorm_eta(k + 1, L)
    return (1.0 + 24.0 * e1 * e1 * L * L - e2 / e1) / (1.0 + 4.0 * e1 * e1 * L * L)


@dataclasses.dataclass
class PstormParams:
    batch_size: int = 256


@dataclasses.dataclass
class PstormState:
    k: int
    x: np.ndarray
    x_prev: np.ndarray
    d: np.ndarray | None
    d_point: np.ndarray | None
    eta: float
    rng: RngStream


def init_pstorm(loss, params: PstormParams, rng: RngStream, x0=None) -> PstormState:
    x0 = np.zeros(loss.n_features) if x0 is None else np.asarray(x0, dtype=np.float64)
    return PstormState(
        k=0, x=x0.copy(), x_prev=x0.copy(), d=None, d_point=None,
        eta=pstorm_eta(1, loss.lipschitz_bound()), rng=rng,
    )


def pstorm_step(state: PstormState, loss, reg, params: PstormParams) -> PstormState:
    """Same estimator shape as spstorm_step but with the prescribed eta_k and
    beta_k schedules, and the full proximal assignment x <- y."""
    k = state.k + 1
    L = loss.lipschitz_bound()
    eta = pstorm_eta(k, L)
    beta = pstorm_beta(k, L)
    batch = sample_batch(state.rng, loss.n_samples, params.batch_size)
    v = loss.batch_mean_grad(state.x, batch)
    if k == 1:
        d = v
    else:
        u = loss.batch_mean_grad(state.x_prev, batch)
        d = v + (1.0 - beta) * (state.d - u)
    x_next = reg.prox(state.x - eta * d, eta)
    _check_finite(x_next, k)
    state.k, state.x_prev, state.x = k, state.x, x_next
    state.d, state.d_point, state.eta = d, state.x_prev, eta
    return state


# ---------------------------------------------------------------------------
# ProxSVRG: epoch snapshots with single-sample corrections

@dataclasses.dataclass
class ProxSvrgParams:
    alpha: float | None = None        # None -> 0.1/L
    epoch_length: int | None = None   # inner steps per snapshot; None -> 2N


@dataclasses.dataclass
class ProxSvrgState:
    t: int                      # completed inner steps
    x: np.ndarray
    x_snap: np.ndarray
    v_snap: np.ndarray          # full gradient at the snapshot
    snap_coefs: np.ndarray      # per-sample gradient coefficients at the snapshot
    d: np.ndarray | None
    d_point: np.ndarray | None
    eta: float
    epoch_length: int
    rng: RngStream


def init_proxsvrg(loss, params: ProxSvrgParams, rng: RngStream, x0=None) -> ProxSvrgState:
    x0 = np.zeros(loss.n_features) if x0 is None else np.asarray(x0, dtype=np.float64)
    epoch = 2 * loss.n_samples if params.epoch_length is None else int(params.epoch_length)
    if epoch < 1:
        raise ValueError("epoch_length must be >= 1")
    # placeholder snapshot; the first step (t == 0) takes the real one
    return ProxSvrgState(
        t=0, x=x0.copy(), x_snap=x0.copy(),
        v_snap=np.zeros(loss.n_features), snap_coefs=np.zeros(loss.n_samples),
        d=None, d_point=None, eta=_default_alpha(params.alpha, loss),
        epoch_length=epoch, rng=rng,
    )


def proxsvrg_step(state: ProxSvrgState, loss, reg, params: ProxSvrgParams) -> ProxSvrgState:
    """One inner update; every epoch_length steps the snapshot is refreshed
    to the current iterate first. v = grad_i(x) - grad_i(x_snap) + v_snap."""
    if state.t % state.epoch_length == 0:
        state.x_snap = state.x.copy()
        state.snap_coefs = loss.all_sample_coefs(state.x_snap)
        state.v_snap = loss.full_grad(state.x_snap)
    i = int(state.rng.integers(0, loss.n_samples))
    row = loss.dataset.rows[i]
    c = loss.sample_coef(state.x, i) - state.snap_coefs[i]
    v = state.v_snap.copy()
    if row.nnz:
        v[row.indices] += c * row.values
    x_at = state.x
    state.x = reg.prox(state.x - state.eta * v, state.eta)
    state.t += 1
    state.d, state.d_point = v, x_at
    return state


# ---------------------------------------------------------------------------
# SAGA: per-sample gradient table stored as row coefficients

@dataclasses.dataclass
class SagaParams:
    alpha: float | None = None          # None -> 0.1/L
    rebuild_period: int | None = None   # exact mean rebuild cadence; None -> N
    memory_budget: float | None = None  # bytes allowed for a dense N x n table


@dataclasses.dataclass
class SagaState:
    t: int
    x: np.ndarray
    coef_table: np.ndarray      # gradient of sample i at its last touch = coef_table[i] * row_i
    table_mean: np.ndarray
    updates_since_rebuild: int
    d: np.ndarray | None
    d_point: np.ndarray | None
    eta: float
    rebuild_period: int
    rng: RngStream


def saga_table_bytes(n_samples: int, n_features: int) -> int:
    """Dense-equivalent footprint of the gradient table (what the budget meters)."""
    return 8 * n_samples * n_features


def init_saga(loss, params: SagaParams, rng: RngStream, x0=None) -> SagaState:
    """Table initialized with the per-sample gradients at x0.

    Raises:
      MemoryBudgetError: a dense N x n_features table would exceed the budget.
        Stored coefficients are far smaller, but the budget deliberately meters
        the dense equivalent so oversized problems are refused up front.
    """
    if params.memory_budget is not None:
        need = saga_table_bytes(loss.n_samples, loss.n_features)
        if need > params.memory_budget:
            raise MemoryBudgetError(
                f"SAGA gradient table for N={loss.n_samples}, n={loss.n_features} "
                f"needs {need} bytes dense, over the {int(params.memory_budget)}-byte budget"
            )
    x0 = np.zeros(loss.n_features) if x0 is None else np.asarray(x0, dtype=np.float64)
    coefs = loss.all_sample_coefs(x0)
    rebuild = loss.n_samples if params.rebuild_period is None else int(params.rebuild_period)
    if rebuild < 1:
        raise ValueError("rebuild_period must be >= 1")
    return SagaState(
        t=0, x=x0.copy(), coef_table=coefs.copy(),
        table_mean=loss.dataset.X.T @ (coefs / loss.n_samples),
        updates_since_rebuild=0, d=None, d_point=None,
        eta=_default_alpha(params.alpha, loss), rebuild_period=rebuild, rng=rng,
    )


def saga_table_entry(state: SagaState, loss, i: int) -> np.ndarray:
    """Dense stored gradient of sample i (diagnostic/test accessor)."""
    out = np.zeros(loss.n_features)
    row = loss.dataset.rows[i]
    if row.nnz:
        out[row.indices] = state.coef_table[i] * row.values
    return out


def saga_step(state: SagaState, loss, reg, params: SagaParams) -> SagaState:
    """One single-sample update: v = new_grad_i - stored_grad_i + table_mean.

    The mean is maintained incrementally and rebuilt exactly every
    rebuild_period updates so float drift cannot accumulate.
    """
    n = loss.n_samples
    i = int(state.rng.integers(0, n))
    row = loss.dataset.rows[i]
    c_new = loss.sample_coef(state.x, i)
    delta = c_new - state.coef_table[i]
    v = state.table_mean.copy()
    if row.nnz:
        v[row.indices] += delta * row.values
    x_at = state.x
    state.x = reg.prox(state.x - state.eta * v, state.eta)
    state.coef_table[i] = c_new
    if row.nnz:
        state.table_mean[row.indices] += (delta / n) * row.values
    state.t += 1
    state.updates_since_rebuild += 1
    if state.updates_since_rebuild >= state.rebuild_period:
        state.table_mean = loss.dataset.X.T @ (state.coef_table / n)
        state.updates_since_rebuild = 0
    state.d, state.d_point = v, x_at
    return state


# ---------------------------------------------------------------------------
# RDA: dual averaging with an l1 closed form

@dataclasses.dataclass
class RdaParams:
    batch_size: int = 256
    gamma: float = 1e-2   # strong-convexity weight of the dual-averaging prox term

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")


@dataclasses.dataclass
class RdaState:
    k: int
    x: np.ndarray
    g_bar: np.ndarray    # running average of all fed batch gradients
    d: np.ndarray | None
    d_point: np.ndarray | None
    eta: float
    rng: RngStream


def init_rda(loss, params: RdaParams, rng: RngStream, x0=None) -> RdaState:
    # the closed-form update is centered at the origin; x0 only sets where
    # the first gradient is evaluated
    x0 = np.zeros(loss.n_features) if x0 is None else np.asarray(x0, dtype=np.float64)
    return RdaState(
        k=0, x=x0.copy(), g_bar=np.zeros(loss.n_features),
        d=None, d_point=None, eta=0.0, rng=rng,
    )


def rda_step(state: RdaState, loss, reg: L1Regularizer, params: RdaParams) -> RdaState:
    """Fold the batch gradient into the running average, then apply the
    closed-form minimizer x_i = -(sqrt(k)/gamma) * softthreshold(g_bar_i, lam)."""
    k = state.k + 1
    batch = sample_batch(state.rng, loss.n_samples, params.batch_size)
    g = loss.batch_mean_grad(state.x, batch)
    state.g_bar += (g - state.g_bar) / k
    x_at = state.x
    scale = math.sqrt(k) / params.gamma
    state.x = -scale * soft_threshold(state.g_bar, reg.lam)
    _check_finite(state.x, k)
    state.k = k
    state.d, state.d_point, state.eta = state.g_bar.copy(), x_at, scale
    return state
