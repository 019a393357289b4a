#!/usr/bin/env python3
"""All six methods on one strongly convex lasso instance.

Each method exposes the same state surface (x, d, d_point, eta), so a single
loop can drive and compare them. The adaptive method needs no tuning; the
constant-step baselines default to 0.1/L.
"""

import numpy as np

from proxsgd import (
    L1Regularizer,
    PsgaParams,
    PstormParams,
    ProxSvrgParams,
    RdaParams,
    RngStream,
    SPstormParams,
    SagaParams,
    SmoothLoss,
    init_proxsvrg,
    init_psga,
    init_pstorm,
    init_rda,
    init_saga,
    init_spstorm,
    objective,
    proxsvrg_step,
    psga_step,
    pstorm_step,
    rda_step,
    saga_step,
    spstorm_step,
    synthetic_lasso,
)

ds, x_true = synthetic_lasso(seed=7)
loss = SmoothLoss(ds, "least_squares")
reg = L1Regularizer(lam=1e-3)
rng = lambda: RngStream(0)

methods = {
    "psga": (init_psga(loss, (p := PsgaParams(batch_size=32)), rng()),
             lambda s, p=p: psga_step(s, loss, reg, p)),
    "pstorm": (init_pstorm(loss, (p := PstormParams(batch_size=32)), rng()),
               lambda s, p=p: pstorm_step(s, loss, reg, p)),
    "spstorm": (init_spstorm(loss, (p := SPstormParams(batch_size=32)), rng()),
                lambda s, p=p: spstorm_step(s, loss, reg, p)),
    "proxsvrg": (init_proxsvrg(loss, (p := ProxSvrgParams()), rng()),
                 lambda s, p=p: proxsvrg_step(s, loss, reg, p)),
    "saga": (init_saga(loss, (p := SagaParams()), rng()),
             lambda s, p=p: saga_step(s, loss, reg, p)),
    "rda": (init_rda(loss, (p := RdaParams(batch_size=32)), rng()),
            lambda s, p=p: rda_step(s, loss, reg, p)),
}

print(f"{'method':>9}  " + "".join(f"{k:>12}" for k in (100, 500, 2000)))
for name, (state, advance) in methods.items():
    best = objective(loss, reg, state.x)
    row = []
    for k in range(1, 2001):
        state = advance(state)
        best = min(best, objective(loss, reg, state.x))
        if k in (100, 500, 2000):
            row.append(best)
    print(f"{name:>9}  " + "".join(f"{v:>12.6f}" for v in row))

print("\nbest-objective-so-far at 100/500/2000 steps; lower is better")
print(f"generating truth has {np.count_nonzero(x_true)} nonzero coordinates")
