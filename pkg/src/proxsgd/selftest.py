"""Fast built-in invariant checks behind the ``selftest`` CLI subcommand.

Each check is a compressed version of one of the test-suite oracles: small
enough to run anywhere in a few seconds, strong enough to catch a broken
install or a miscompiled dependency.
"""

from __future__ import annotations

import math
import tempfile
from pathlib import Path

import numpy as np

from . import baselines as bl
from . import psga as ps
from .bench import RunConfig, run_suite
from .core import RngStream, parse_libsvm, sample_batch, save_libsvm_file, serialize_libsvm
from .problems import SmoothLoss
from .regularizers import L1Regularizer
from .synthetic import synthetic_logistic


def _check_parser():
    ds = parse_libsvm("1 1:0.5 3:-2\n0\n1 2:1.25\n")
    assert ds.n_samples == 3 and ds.n_features == 3
    assert list(ds.labels) == [1.0, -1.0, 1.0]  # {0,1} labels remapped
    again = parse_libsvm(serialize_libsvm(ds))
    assert list(again.labels) == list(ds.labels)
    for a, b in zip(again.rows, ds.rows):
        assert np.array_equal(a.indices, b.indices) and np.array_equal(a.values, b.values)


def _check_sampling():
    a = sample_batch(RngStream(7), 100, 10)
    b = sample_batch(RngStream(7), 100, 10)
    assert np.array_equal(a, b)
    child = RngStream(7).substream(3)
    c = sample_batch(child, 100, 10)
    assert np.array_equal(c, sample_batch(RngStream(7).substream(3), 100, 10))
    assert not np.array_equal(a, c)


def _check_prox():
    reg = L1Regularizer(0.25)
    rng = np.random.default_rng(0)
    for _ in range(20):
        v = float(rng.normal() * 3)
        t = float(rng.uniform(0.1, 2.0))
        grid = np.linspace(-abs(v) - 1, abs(v) + 1, 200001)
        obj = 0.5 * (grid - v) ** 2 + t * reg.lam * np.abs(grid)
        best = grid[int(np.argmin(obj))]
        got = reg.prox(np.array([v]), t)[0]
        assert abs(got - best) < 1e-4


def _check_gradients():
    ds = synthetic_logistic(60, 8, nnz_per_row=5, seed=1)
    for kind in ("logistic", "least_squares"):
        loss = SmoothLoss(ds, kind)
        rng = np.random.default_rng(2)
        x = rng.normal(size=8)
        g = loss.full_grad(x)
        for i in rng.choice(8, size=4, replace=False):
            h = 1e-6
            e = np.zeros(8)
            e[i] = h
            fd = (loss.loss_value(x + e) - loss.loss_value(x - e)) / (2 * h)
            assert abs(fd - g[i]) <= 1e-5 * max(1.0, abs(g[i]))


def _check_step_rule():
    rng = np.random.default_rng(3)
    for _ in range(50):
        mu, nu = rng.normal(size=4), rng.normal(size=4)
        x, xp = rng.normal(size=4), rng.normal(size=4)
        tau = ps.compute_tau(mu, nu, x, xp)
        bb2 = ps.bb_reference_steps(x - xp, mu - nu)[1]
        assert tau is not None and abs(tau - bb2) < 1e-14
    assert ps.update_step_size(1.0, 2.0) == (1.5, ps.StepBranch.EXPAND)
    assert ps.update_step_size(1.0, 1.0)[1] is ps.StepBranch.EXPAND
    assert ps.update_step_size(1.0, 0.5)[1] is ps.StepBranch.SHRINK
    assert ps.update_step_size(1.0, 0.75) == (0.75, ps.StepBranch.ADOPT)
    assert ps.update_step_size(0.3, None) == (0.3, ps.StepBranch.HOLD)


def _check_psga_floor():
    ds = synthetic_logistic(300, 12, nnz_per_row=6, seed=4)
    loss = SmoothLoss(ds)
    reg = L1Regularizer(1e-5)
    params = ps.PsgaParams(batch_size=32)
    state = ps.init_psga(loss, params, RngStream(0))
    floor = 0.5 / loss.lipschitz_bound() - ps.FLOOR_SLACK
    seen = set()
    for _ in range(300):
        state = ps.psga_step(state, loss, reg, params)
        assert state.eta >= floor
        seen.add(state.branch)
    assert seen == set(ps.StepBranch)


def _check_saga_table():
    ds = synthetic_logistic(12, 5, nnz_per_row=3, seed=5)
    loss = SmoothLoss(ds)
    reg = L1Regularizer(1e-3)
    params = bl.SagaParams()
    state = bl.init_saga(loss, params, RngStream(1))
    for _ in range(40):
        state = bl.saga_step(state, loss, reg, params)
        mean = sum(bl.saga_table_entry(state, loss, i) for i in range(12)) / 12
        assert np.allclose(mean, state.table_mean, atol=1e-12)


def _check_pstorm_schedule():
    for L in (0.1, 1.0, 10.0):
        k = np.arange(1, 100001, dtype=np.float64)
        e1 = (4.0 ** (1 / 3) / (8 * L)) / (k + 4.0) ** (1 / 3)
        e2 = (4.0 ** (1 / 3) / (8 * L)) / (k + 5.0) ** (1 / 3)
        beta = (1 + 24 * e1 * e1 * L * L - e2 / e1) / (1 + 4 * e1 * e1 * L * L)
        assert np.all(beta > 0) and np.all(beta < 1)
        assert abs(bl.pstorm_eta(1, L) - e1[0]) < 1e-15
        assert abs(bl.pstorm_beta(1, L) - beta[0]) < 1e-15


def _check_trace_determinism():
    ds = synthetic_logistic(120, 6, nnz_per_row=4, seed=6)
    with tempfile.TemporaryDirectory() as tmp:
        data = Path(tmp) / "toy.libsvm"
        save_libsvm_file(ds, data)
        cfg = RunConfig(
            algorithm="psga", dataset=str(data), lam=1e-4, seed=3,
            max_iters=25, batch_size=16, deterministic_timing=True,
        )
        blobs = []
        for sub in ("a", "b"):
            run_suite([cfg], Path(tmp) / sub, quiet=True)
            blobs.append((Path(tmp) / sub / "trace_000_toy_psga.csv").read_bytes())
        assert blobs[0] == blobs[1]


CHECKS = [
    ("libsvm parse/serialize round trip", _check_parser),
    ("deterministic splittable sampling", _check_sampling),
    ("l1 prox matches grid search", _check_prox),
    ("gradients match finite differences", _check_gradients),
    ("curvature step and branch boundaries", _check_step_rule),
    ("adaptive step-size floor and branch coverage", _check_psga_floor),
    ("saga table mean stays exact", _check_saga_table),
    ("pstorm schedule well-formed", _check_pstorm_schedule),
    ("trace CSVs byte-reproducible", _check_trace_determinism),
]


def selftest(verbose: bool = True) -> bool:
    """Run every built-in check; returns True when all pass."""
    ok = True
    for name, fn in CHECKS:
        try:
            fn()
            status = "PASS"
        except Exception as e:  # noqa: BLE001 - report any failure uniformly
            status = f"FAIL ({type(e).__name__}: {e})"
            ok = False
        if verbose:
            print(f"[{status.split()[0].lower():4s}] {name}" + (
                "" if status == "PASS" else f"  {status}"))
    return ok
