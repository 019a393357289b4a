"""Stochastic proximal gradient methods for composite convex problems
(smooth finite-sum loss plus an l1 term), built around an adaptive
Barzilai-Borwein-style step-size rule with momentum variance reduction, five
reference baselines, and a reproducible benchmark harness.
"""

from .core import (
    ConfigError,
    Dataset,
    MemoryBudgetError,
    NumericError,
    ParseError,
    RngStream,
    SparseVec,
    load_libsvm_file,
    parse_libsvm,
    sample_batch,
    save_libsvm_file,
    serialize_libsvm,
    sv_axpy,
    sv_dot,
    sv_norm2,
)
from .problems import SmoothLoss
from .regularizers import L1Regularizer, TrivialSurrogate, soft_threshold
from .psga import (
    PsgaParams,
    PsgaState,
    StepBranch,
    bb_reference_steps,
    compute_tau,
    estimate_gradient,
    init_psga,
    psga_step,
    update_step_size,
)
from .baselines import (
    PstormParams,
    ProxSvrgParams,
    RdaParams,
    SagaParams,
    SPstormParams,
    init_proxsvrg,
    init_pstorm,
    init_rda,
    init_saga,
    init_spstorm,
    proxsvrg_step,
    pstorm_beta,
    pstorm_eta,
    pstorm_step,
    rda_step,
    saga_step,
    spstorm_step,
)
from .metrics import TraceRecord, grad_estimation_error, objective, rel_subopt, stationarity
from .bench import RunConfig, RunResult, load_config, run_single, run_suite, summarize
from .synthetic import synthetic_lasso, synthetic_logistic, synthetic_wide

__version__ = "0.1.0"
