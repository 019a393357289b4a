"""Adaptive-step stochastic proximal gradient method with momentum variance
reduction (PSGA).

Each iteration draws one batch, evaluates its mean gradient at the current and
previous iterates, turns the two-point difference into a curvature-based trial
step (the second Barzilai-Borwein ratio), adapts the step size through a
four-branch rule, and takes a damped proximal step:

    mu_k  = mean batch gradient at x_k
    nu_k  = mean gradient of the same batch at x_{k-1}
    d_k   = mu_1                                   if k == 1
            full gradient at x_k                   with probability 1/m
            mu_k + (1 - 1/(k+1)) (d_{k-1} - nu_k)  otherwise
    tau_k = <mu_k-nu_k, x_k-x_{k-1}> / ||mu_k-nu_k||^2
    eta_k from (eta_{k-1}, tau_k) via expand/adopt/shrink/hold
    y_k   = prox_{eta_k r}(x_k - eta_k d_k)
    x_{k+1} = x_k + (k/(k+1)) (y_k - x_k)

With eta_0 >= 1/L the step size never falls below 1/(2L), and every
non-degenerate tau_k is at least 1/L; both facts are asserted at runtime.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np

from .core import NumericError, RngStream, sample_batch
from .problems import SmoothLoss
from .regularizers import L1Regularizer

FLOOR_SLACK = 1e-12  # tolerance on the 1/(2L) step-size floor


class StepBranch(enum.Enum):
    """Outcome of the step-size update; exactly one fires per iteration."""

    EXPAND = "expand"      # tau >= eta_prev: eta = (1 + 1/tau) * eta_prev
    ADOPT = "adopt"        # eta_prev/2 < tau < eta_prev: eta = tau
    SHRINK = "shrink"      # tau <= eta_prev/2: eta = eta_prev / sqrt(2)
    HOLD = "hold"          # degenerate tau: eta unchanged


@dataclasses.dataclass
class PsgaParams:
    """Tuning knobs; defaults are the benchmark settings.

    Args:
      batch_size: samples drawn (with replacement) per iteration.
      refresh_period: expected iterations between exact full-gradient
        refreshes (the estimator refreshes with probability 1/refresh_period).
      eta0: initial step size; None means 1/L. Must be >= 1/L.
      clamp_to_theory: also cap eta_k at (k+1) / (4 (sqrt(m)+1) k L).
      degenerate_eps: curvature denominators at or below this are degenerate.
    """

    batch_size: int = 256
    refresh_period: int = 10
    eta0: float | None = None
    clamp_to_theory: bool = False
    degenerate_eps: float = 1e-12

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.refresh_period < 2:
            raise ValueError("refresh_period must be >= 2")


@dataclasses.dataclass
class PsgaState:
    """State after k completed iterations.

    x is the current iterate x_{k+1}; x_prev is x_k, which is also the point
    where the latest gradient estimate d was formed (d_point aliases it).
    """

    k: int
    x: np.ndarray
    x_prev: np.ndarray
    d: np.ndarray | None
    d_point: np.ndarray | None
    eta: float
    tau: float | None
    branch: StepBranch | None
    refreshed: bool
    rng_batch: RngStream
    rng_refresh: RngStream


def init_psga(
    loss: SmoothLoss,
    params: PsgaParams,
    rng: RngStream,
    x0: np.ndarray | None = None,
) -> PsgaState:
    """Build the starting state (k=0, x_0 = x_1 = x0, eta = eta0)."""
    L = loss.lipschitz_bound()
    eta0 = 1.0 / L if params.eta0 is None else float(params.eta0)
    if eta0 < 1.0 / L:
        raise ValueError(f"eta0 must be >= 1/L = {1.0 / L!r}, got {eta0!r}")
    x0 = np.zeros(loss.n_features) if x0 is None else np.asarray(x0, dtype=np.float64)
    return PsgaState(
        k=0,
        x=x0.copy(),
        x_prev=x0.copy(),
        d=None,
        d_point=None,
        eta=eta0,
        tau=None,
        branch=None,
        refreshed=False,
        rng_batch=rng.substream(0),
        rng_refresh=rng.substream(1),
    )


def compute_tau(
    mu: np.ndarray,
    nu: np.ndarray,
    x: np.ndarray,
    x_prev: np.ndarray,
    eps: float = 1e-12,
) -> float | None:
    """Curvature step <mu-nu, x-x_prev> / ||mu-nu||^2, or None if degenerate.

    This is the second Barzilai-Borwein ratio with the two-point batch
    gradient difference playing the role of the gradient difference.
    """
    g = mu - nu
    denom = float(g @ g)
    if denom <= eps:
        return None
    return float(g @ (x - x_prev)) / denom


def update_step_size(eta_prev: float, tau: float | None) -> tuple[float, StepBranch]:
    """One step of the four-branch adaptive rule. Branches are exhaustive."""
    if tau is None:
        return eta_prev, StepBranch.HOLD
    if tau >= eta_prev:
        return (1.0 + 1.0 / tau) * eta_prev, StepBranch.EXPAND
    if tau <= 0.5 * eta_prev:
        return eta_prev / math.sqrt(2.0), StepBranch.SHRINK
    return tau, StepBranch.ADOPT


def theory_cap(k: int, refresh_period: int, L: float) -> float:
    """Optional cap (k+1) / (4 (sqrt(m)+1) delta_k L) with delta_k = k."""
    return (k + 1) / (4.0 * (math.sqrt(refresh_period) + 1.0) * k * L)


def estimate_gradient(
    loss: SmoothLoss,
    x: np.ndarray,
    mu: np.ndarray,
    nu: np.ndarray,
    d_prev: np.ndarray | None,
    k: int,
    refresh_period: int,
    rng_refresh: RngStream,
) -> tuple[np.ndarray, bool]:
    """Variance-reduced gradient estimate at x for iteration k.

    Returns (d, refreshed). The refresh Bernoulli draw comes from its own
    substream, so batch contents never shift with the branch taken. k == 1
    returns the plain batch mean and consumes no randomness.
    """
    if k == 1:
        return mu, False
    if rng_refresh.uniform() < 1.0 / refresh_period:
        return loss.full_grad(x), True
    correction_weight = 1.0 - 1.0 / (k + 1)
    return mu + correction_weight * (d_prev - nu), False


def psga_step(
    state: PsgaState,
    loss: SmoothLoss,
    reg: L1Regularizer,
    params: PsgaParams,
) -> PsgaState:
    """Advance one iteration; returns the state with k incremented.

    Raises:
      NumericError: a non-finite step size, estimate, or iterate appeared;
        the message names the iteration.
    """
    k = state.k + 1
    batch = sample_batch(state.rng_batch, loss.n_samples, params.batch_size)
    mu = loss.batch_mean_grad(state.x, batch)
    nu = loss.batch_mean_grad(state.x_prev, batch)

    d, refreshed = estimate_gradient(
        loss, state.x, mu, nu, state.d, k, params.refresh_period, state.rng_refresh
    )

    tau = compute_tau(mu, nu, state.x, state.x_prev, params.degenerate_eps)
    eta, branch = update_step_size(state.eta, tau)
    if params.clamp_to_theory:
        eta = min(eta, theory_cap(k, params.refresh_period, loss.lipschitz_bound()))
    elif eta < 0.5 / loss.lipschitz_bound() - FLOOR_SLACK:
        # cannot happen for eta0 >= 1/L; a violation means corrupted state
        raise NumericError(
            f"step size {eta!r} fell below the 1/(2L) floor at iteration {k}"
        )

    if not math.isfinite(eta) or not np.all(np.isfinite(d)):
        raise NumericError(f"non-finite gradient estimate or step size at iteration {k}")

    y = reg.prox(state.x - eta * d, eta)
    damping = k / (k + 1.0)  # vanishes the move early, approaches a full step late
    x_next = state.x + damping * (y - state.x)
    if not np.all(np.isfinite(x_next)):
        raise NumericError(f"non-finite iterate at iteration {k}")

    return PsgaState(
        k=k,
        x=x_next,
        x_prev=state.x,
        d=d,
        d_point=state.x,
        eta=eta,
        tau=tau,
        branch=branch,
        refreshed=refreshed,
        rng_batch=state.rng_batch,
        rng_refresh=state.rng_refresh,
    )


def bb_reference_steps(s: np.ndarray, g_diff: np.ndarray) -> tuple[float, float]:
    """Classical Barzilai-Borwein step pair for a displacement s = x_k - x_{k-1}
    and gradient difference g_diff.

    Returns (bb1, bb2) = (||s||^2 / <s, g_diff>, <s, g_diff> / ||g_diff||^2);
    either entry is nan when its denominator vanishes. Diagnostic only: the
    adaptive rule's tau equals bb2 with batch gradient differences.
    """
    ss = float(s @ s)
    sg = float(s @ g_diff)
    gg = float(g_diff @ g_diff)
    bb1 = ss / sg if sg != 0.0 else math.nan
    bb2 = sg / gg if gg != 0.0 else math.nan
    return bb1, bb2
