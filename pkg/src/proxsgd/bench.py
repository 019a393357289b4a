"""Config-driven benchmark harness: TOML in, CSV traces and a summary out.

A config file holds one ``[[run]]`` table per run plus an optional ``[suite]``
table. Each run is executed with its own random stream derived from its seed,
so runs are order-independent and byte-reproducible. The suite-level best
objective is resolved after all runs finish and rel_subopt is backfilled into
every trace in a second pass before any CSV is written.

Iteration granularity: the batch methods (psga, pstorm, spstorm, rda) record
one mini-batch step per iteration; proxsvrg records one epoch (snapshot plus
epoch_length inner updates); saga records one pass (N single-sample updates).
"""

from __future__ import annotations

import csv
import dataclasses
import math
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python < 3.11
    import tomli as _toml

from . import baselines as bl
from . import psga as ps
from .core import ConfigError, Dataset, MemoryBudgetError, NumericError, RngStream, load_libsvm_file
from .metrics import TraceRecord, grad_estimation_error, objective, rel_subopt, stationarity
from .problems import LOSS_KINDS, SmoothLoss
from .regularizers import L1Regularizer

ALGORITHMS = ("psga", "pstorm", "spstorm", "proxsvrg", "saga", "rda")

CSV_HEADER = "iter,elapsed_s,f_val,rel_subopt,grad_err,stationarity,eta,branch"

SUMMARY_FIELDS = (
    "run", "algorithm", "dataset", "loss", "seed", "outcome",
    "f_best", "iters_to_best", "seconds_to_best", "trace_file",
)


@dataclasses.dataclass
class RunConfig:
    """One benchmark run; field names double as the TOML keys.

    Method-specific keys are ignored by the other methods. max_seconds is a
    wall-clock cap on algorithm time (metric computation excluded), checked at
    iteration granularity. deterministic_timing writes the iteration index as
    elapsed_s instead of wall time, which makes traces byte-reproducible and
    disables the wall-clock cap.
    """

    algorithm: str
    dataset: str
    loss: str = "logistic"
    lam: float = 1e-5
    seed: int = 0
    max_iters: int = 1000
    max_seconds: float = 600.0
    log_every: int = 1
    batch_size: int = 256
    deterministic_timing: bool = False
    name: str | None = None
    # psga
    eta0: float | None = None
    refresh_period: int = 10
    clamp_to_theory: bool = False
    # spstorm
    zeta: float = 1.0
    # spstorm / proxsvrg / saga constant step
    alpha: float | None = None
    # proxsvrg
    epoch_length: int | None = None
    # saga
    rebuild_period: int | None = None
    memory_budget: float | None = None
    # rda
    gamma: float = 1e-2

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(
                f"unknown algorithm {self.algorithm!r}, expected one of {ALGORITHMS}"
            )
        if self.loss not in LOSS_KINDS:
            raise ConfigError(f"unknown loss {self.loss!r}, expected one of {LOSS_KINDS}")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if self.log_every < 1:
            raise ConfigError("log_every must be >= 1")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")


@dataclasses.dataclass
class RunResult:
    """Everything a finished (or refused/failed) run reports."""

    config: RunConfig
    outcome: str                      # completed | numeric_failure | memory_refused
    records: list[TraceRecord]
    f_best: float
    iters_to_best: int
    seconds_to_best: float
    error: str = ""
    trace_file: str = ""


_CONFIG_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}
_SUITE_KEYS = {"output_dir", "jobs"}


def load_config(path) -> tuple[list[RunConfig], dict]:
    """Parse a TOML benchmark config.

    Returns (runs, suite_options). Raises ConfigError for unknown keys or
    tables, missing required keys, or an unreadable file.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    with open(path, "rb") as fh:
        try:
            data = _toml.load(fh)
        except _toml.TOMLDecodeError as e:
            raise ConfigError(f"invalid TOML in {path}: {e}") from None

    unknown_tables = set(data) - {"run", "suite"}
    if unknown_tables:
        raise ConfigError(f"unknown top-level table(s): {sorted(unknown_tables)}")

    suite = data.get("suite", {})
    bad = set(suite) - _SUITE_KEYS
    if bad:
        raise ConfigError(f"unknown key(s) in [suite]: {sorted(bad)}")

    raw_runs = data.get("run", [])
    if isinstance(raw_runs, dict):
        raw_runs = [raw_runs]
    if not raw_runs:
        raise ConfigError("config defines no [[run]] tables")

    runs = []
    for idx, table in enumerate(raw_runs):
        bad = set(table) - _CONFIG_FIELDS
        if bad:
            raise ConfigError(f"unknown key(s) in [[run]] #{idx + 1}: {sorted(bad)}")
        for required in ("algorithm", "dataset"):
            if required not in table:
                raise ConfigError(f"[[run]] #{idx + 1} is missing required key {required!r}")
        runs.append(RunConfig(**table))
    return runs, dict(suite)


# ---------------------------------------------------------------------------
# method dispatch

def _make_method(config: RunConfig, loss: SmoothLoss, reg: L1Regularizer, rng: RngStream):
    """Returns (state, advance, steps_per_iteration)."""
    algo = config.algorithm
    try:
        if algo == "psga":
            params = ps.PsgaParams(
                batch_size=config.batch_size,
                refresh_period=config.refresh_period,
                eta0=config.eta0,
                clamp_to_theory=config.clamp_to_theory,
            )
            state = ps.init_psga(loss, params, rng)
            return state, lambda s: ps.psga_step(s, loss, reg, params), 1
        if algo == "spstorm":
            params = bl.SPstormParams(
                batch_size=config.batch_size, zeta=config.zeta, alpha=config.alpha
            )
            state = bl.init_spstorm(loss, params, rng)
            return state, lambda s: bl.spstorm_step(s, loss, reg, params), 1
        if algo == "pstorm":
            params = bl.PstormParams(batch_size=config.batch_size)
            state = bl.init_pstorm(loss, params, rng)
            return state, lambda s: bl.pstorm_step(s, loss, reg, params), 1
        if algo == "proxsvrg":
            params = bl.ProxSvrgParams(alpha=config.alpha, epoch_length=config.epoch_length)
            state = bl.init_proxsvrg(loss, params, rng)
            return state, lambda s: bl.proxsvrg_step(s, loss, reg, params), state.epoch_length
        if algo == "saga":
            params = bl.SagaParams(
                alpha=config.alpha,
                rebuild_period=config.rebuild_period,
                memory_budget=config.memory_budget,
            )
            state = bl.init_saga(loss, params, rng)
            return state, lambda s: bl.saga_step(s, loss, reg, params), loss.n_samples
        if algo == "rda":
            params = bl.RdaParams(batch_size=config.batch_size, gamma=config.gamma)
            state = bl.init_rda(loss, params, rng)
            return state, lambda s: bl.rda_step(s, loss, reg, params), 1
    except ValueError as e:
        raise ConfigError(f"bad parameters for {algo}: {e}") from None
    raise ConfigError(f"unknown algorithm {algo!r}")


_DATASET_CACHE: dict[str, Dataset] = {}


def _load_dataset(path: str) -> Dataset:
    ds = _DATASET_CACHE.get(path)
    if ds is None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"dataset file not found: {path}")
        ds = load_libsvm_file(p)
        _DATASET_CACHE[path] = ds
    return ds


def run_single(config: RunConfig, dataset: Dataset | None = None) -> RunResult:
    """Execute one run and collect its trace (rel_subopt left for backfill)."""
    ds = dataset if dataset is not None else _load_dataset(config.dataset)
    loss = SmoothLoss(ds, config.loss)
    reg = L1Regularizer(config.lam)
    rng = RngStream(config.seed)

    try:
        state, advance, inner = _make_method(config, loss, reg, rng)
    except MemoryBudgetError as e:
        return RunResult(
            config=config, outcome="memory_refused", records=[],
            f_best=math.nan, iters_to_best=0, seconds_to_best=math.nan, error=str(e),
        )

    records: list[TraceRecord] = []
    elapsed = 0.0
    outcome = "completed"
    error = ""

    def record(it: int):
        f_val = objective(loss, reg, state.x)
        if not math.isfinite(f_val):
            raise NumericError(f"non-finite objective at iteration {it}")
        branch = state.branch.value if isinstance(state, ps.PsgaState) else "-"
        records.append(TraceRecord(
            iter=it,
            elapsed_s=float(it) if config.deterministic_timing else elapsed,
            f_val=f_val,
            rel_subopt=None,
            grad_err=grad_estimation_error(state.d, loss, state.d_point),
            stationarity=stationarity(loss, reg, state.x),
            eta=state.eta,
            branch=branch,
        ))

    for it in range(1, config.max_iters + 1):
        t0 = time.perf_counter()
        try:
            for _ in range(inner):
                state = advance(state)
        except NumericError as e:
            outcome = "numeric_failure"
            error = str(e)
            elapsed += time.perf_counter() - t0
            break
        elapsed += time.perf_counter() - t0

        due = it == 1 or it == config.max_iters or it % config.log_every == 0
        out_of_time = not config.deterministic_timing and elapsed >= config.max_seconds
        if due or out_of_time:
            try:
                record(it)
            except NumericError as e:
                outcome = "numeric_failure"
                error = str(e)
                break
        if out_of_time:
            break

    if records:
        best = min(range(len(records)), key=lambda i: records[i].f_val)
        f_best = records[best].f_val
        iters_to_best = records[best].iter
        seconds_to_best = records[best].elapsed_s
    else:
        f_best, iters_to_best, seconds_to_best = math.nan, 0, math.nan

    return RunResult(
        config=config, outcome=outcome, records=records,
        f_best=f_best, iters_to_best=iters_to_best,
        seconds_to_best=seconds_to_best, error=error,
    )


# ---------------------------------------------------------------------------
# suite execution and serialization

def format_real(v: float | None) -> str:
    """Serialize a real with 17 significant digits (CSV contract)."""
    if v is None or v != v:
        return "nan"
    return format(float(v), ".17g")


def trace_filename(index: int, config: RunConfig) -> str:
    if config.name:
        stem = re.sub(r"[^A-Za-z0-9_.-]", "_", config.name)
        return f"trace_{index:03d}_{stem}.csv"
    ds = re.sub(r"[^A-Za-z0-9-]", "_", Path(config.dataset).stem)
    return f"trace_{index:03d}_{ds}_{config.algorithm}.csv"


def write_trace_csv(path, records: list[TraceRecord]):
    lines = [CSV_HEADER]
    for r in records:
        lines.append(",".join([
            str(r.iter),
            format_real(r.elapsed_s),
            format_real(r.f_val),
            format_real(r.rel_subopt),
            format_real(r.grad_err),
            format_real(r.stationarity),
            format_real(r.eta),
            r.branch,
        ]))
    Path(path).write_text("\n".join(lines) + "\n")


def resolve_f_star(results: list[RunResult]) -> float:
    """Suite-level best objective: min f_best over completed runs."""
    cands = [r.f_best for r in results if r.outcome == "completed" and math.isfinite(r.f_best)]
    return min(cands) if cands else math.nan


def _run_worker(config: RunConfig) -> RunResult:
    return run_single(config)


def run_suite(
    configs: list[RunConfig],
    output_dir,
    jobs: int = 1,
    quiet: bool = False,
) -> tuple[list[RunResult], float]:
    """Run every config, backfill rel_subopt, and write traces + summary.csv.

    Returns (results, f_star). Results keep config order regardless of jobs.
    """
    if not configs:
        raise ConfigError("no runs to execute")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_worker, configs))
    else:
        results = [run_single(c) for c in configs]

    f_star = resolve_f_star(results)
    usable = math.isfinite(f_star) and f_star > 0.0
    if not usable:
        print(
            f"warning: best objective {f_star!r} unusable for rel_subopt; writing nan",
            file=sys.stderr,
        )
    for res in results:
        for rec in res.records:
            rec.rel_subopt = rel_subopt(rec.f_val, f_star) if usable else math.nan

    for idx, res in enumerate(results):
        res.trace_file = trace_filename(idx, res.config)
        write_trace_csv(out / res.trace_file, res.records)

    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_FIELDS)
        for idx, res in enumerate(results):
            w.writerow([
                idx,
                res.config.algorithm,
                Path(res.config.dataset).stem,
                res.config.loss,
                res.config.seed,
                res.outcome,
                format_real(res.f_best),
                res.iters_to_best,
                format_real(res.seconds_to_best),
                res.trace_file,
            ])

    if not quiet:
        print(format_summary_table([_summary_row(i, r) for i, r in enumerate(results)]))
        print(f"f_star = {format_real(f_star)}")
    return results, f_star


def _summary_row(idx: int, res: RunResult) -> dict:
    return {
        "run": str(idx),
        "algorithm": res.config.algorithm,
        "dataset": Path(res.config.dataset).stem,
        "loss": res.config.loss,
        "seed": str(res.config.seed),
        "outcome": res.outcome,
        "f_best": "--" if res.f_best != res.f_best else format(res.f_best, ".6f"),
        "iters_to_best": "--" if res.outcome == "memory_refused" else str(res.iters_to_best),
        "seconds_to_best": "--" if res.seconds_to_best != res.seconds_to_best
                           else format(res.seconds_to_best, ".3f"),
        "trace_file": res.trace_file,
    }


def format_summary_table(rows: list[dict]) -> str:
    """Aligned fixed-width text table over SUMMARY_FIELDS."""
    cols = list(SUMMARY_FIELDS)
    widths = {c: len(c) for c in cols}
    for row in rows:
        for c in cols:
            widths[c] = max(widths[c], len(str(row.get(c, ""))))
    def fmt(row):
        return "  ".join(str(row.get(c, "")).ljust(widths[c]) for c in cols).rstrip()
    header = fmt({c: c for c in cols})
    rule = "  ".join("-" * widths[c] for c in cols).rstrip()
    return "\n".join([header, rule] + [fmt(r) for r in rows])


def summarize(output_dir) -> str:
    """Re-read a bench output directory's summary.csv as an aligned table."""
    path = Path(output_dir) / "summary.csv"
    if not path.exists():
        raise ConfigError(f"no summary.csv in {output_dir}")
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for key in ("f_best", "seconds_to_best"):
            try:
                val = float(row[key])
                row[key] = "--" if val != val else format(val, ".6f" if key == "f_best" else ".3f")
            except (ValueError, KeyError):
                pass
        if row.get("outcome") == "memory_refused":
            row["iters_to_best"] = "--"
    return format_summary_table(rows)
