"""Sparse datasets, deterministic sampling, and small sparse-vector helpers.

Everything downstream (losses, optimizers, the benchmark harness) builds on
three primitives defined here: an index/value sparse vector, a dataset of
sparse rows with labels, and a splittable counter-based random stream.
"""

from __future__ import annotations

import dataclasses
import gzip
from pathlib import Path

import numpy as np
import scipy.sparse as sp


class ParseError(ValueError):
    """Malformed LIBSVM input; the message names the offending line."""


class ConfigError(ValueError):
    """Invalid benchmark configuration; maps to CLI exit code 1."""


class NumericError(ArithmeticError):
    """Non-finite iterate or step; the message names the iteration."""


class MemoryBudgetError(RuntimeError):
    """A method refused to start because its state would exceed the budget."""


# ---------------------------------------------------------------------------
# sparse vectors

@dataclasses.dataclass(frozen=True)
class SparseVec:
    """Sparse vector as parallel (indices, values) arrays.

    Indices are 0-based, strictly increasing. The ambient dimension is
    implicit; operations against dense arrays take it from the dense side.
    """

    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=np.int32)
        values = np.asarray(self.values, dtype=np.float64)
        if indices.shape != values.shape or indices.ndim != 1:
            raise ValueError("indices and values must be 1-d arrays of equal length")
        if indices.size:
            if indices[0] < 0:
                raise ValueError("indices must be non-negative")
            if np.any(np.diff(indices) <= 0):
                raise ValueError("indices must be strictly increasing")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "values", values)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)


def _check_dim(v: SparseVec, w: np.ndarray):
    if v.indices.size and v.indices[-1] >= w.shape[0]:
        raise ValueError(
            f"dimension mismatch: sparse index {int(v.indices[-1])} vs dense length {w.shape[0]}"
        )


def sv_dot(v: SparseVec, w: np.ndarray) -> float:
    """Inner product of a sparse vector with a dense one."""
    _check_dim(v, w)
    if not v.indices.size:
        return 0.0
    return float(w[v.indices] @ v.values)


def sv_axpy(alpha: float, v: SparseVec, w: np.ndarray) -> np.ndarray:
    """In-place w += alpha * v on the sparse support; returns w."""
    _check_dim(v, w)
    if v.indices.size:
        w[v.indices] += alpha * v.values
    return w


def sv_norm2(v: SparseVec) -> float:
    """Euclidean norm of a sparse vector."""
    return float(np.sqrt(v.values @ v.values)) if v.values.size else 0.0


def sv_to_dense(v: SparseVec, dim: int) -> np.ndarray:
    out = np.zeros(dim)
    return sv_axpy(1.0, v, out)


# ---------------------------------------------------------------------------
# datasets

class Dataset:
    """Sparse sample rows plus real labels, with a cached CSR view.

    Args:
      rows: one SparseVec per sample.
      labels: array of N reals.
      n_features: ambient dimension; defaults to the largest index seen + 1.
    """

    def __init__(self, rows: list[SparseVec], labels, n_features: int | None = None):
        labels = np.asarray(labels, dtype=np.float64)
        if labels.ndim != 1 or len(rows) != labels.shape[0]:
            raise ValueError("need one label per row")
        if n_features is None:
            n_features = max((int(r.indices[-1]) + 1 for r in rows if r.nnz), default=0)
        self.rows = list(rows)
        self.labels = labels
        self.n_features = int(n_features)
        self._csr: sp.csr_matrix | None = None

    @property
    def n_samples(self) -> int:
        return len(self.rows)

    @property
    def X(self) -> sp.csr_matrix:
        """CSR matrix view of the rows (built once, then cached)."""
        if self._csr is None:
            indptr = np.zeros(self.n_samples + 1, dtype=np.int64)
            for j, r in enumerate(self.rows):
                indptr[j + 1] = indptr[j] + r.nnz
            nnz = int(indptr[-1])
            indices = np.zeros(nnz, dtype=np.int32)
            data = np.zeros(nnz, dtype=np.float64)
            for j, r in enumerate(self.rows):
                indices[indptr[j]:indptr[j + 1]] = r.indices
                data[indptr[j]:indptr[j + 1]] = r.values
            self._csr = sp.csr_matrix(
                (data, indices, indptr), shape=(self.n_samples, self.n_features)
            )
        return self._csr


def parse_libsvm(text: str) -> Dataset:
    """Parse LIBSVM-format text into a Dataset.

    Format: one sample per line, ``label idx:value idx:value ...`` with 1-based
    strictly increasing indices. A label-only line is an all-zero row. Binary
    labels in {0, 1} are remapped to {-1, +1}; all other labels are kept as
    parsed reals.

    Raises:
      ParseError: malformed token, index <= 0, or non-increasing index, with
        the 1-based line number in the message.
    """
    rows: list[SparseVec] = []
    labels: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            label = float(parts[0])
        except ValueError:
            raise ParseError(f"line {lineno}: malformed label {parts[0]!r}") from None
        idxs: list[int] = []
        vals: list[float] = []
        prev = 0
        for tok in parts[1:]:
            head, sep, tail = tok.partition(":")
            if not sep:
                raise ParseError(f"line {lineno}: malformed feature {tok!r}")
            try:
                idx = int(head)
                val = float(tail)
            except ValueError:
                raise ParseError(f"line {lineno}: malformed feature {tok!r}") from None
            if idx <= 0:
                raise ParseError(f"line {lineno}: feature index must be >= 1, got {idx}")
            if idx <= prev:
                raise ParseError(
                    f"line {lineno}: feature indices must be strictly increasing, "
                    f"got {idx} after {prev}"
                )
            idxs.append(idx - 1)
            vals.append(val)
            prev = idx
        rows.append(SparseVec(np.array(idxs, dtype=np.int32), np.array(vals)))
        labels.append(label)
    y = np.asarray(labels, dtype=np.float64)
    if y.size and set(np.unique(y)) <= {0.0, 1.0}:
        y = np.where(y > 0.5, 1.0, -1.0)
    return Dataset(rows, y)


def serialize_libsvm(dataset: Dataset) -> str:
    """Inverse of parse_libsvm; floats use shortest round-trip repr."""
    lines = []
    for row, label in zip(dataset.rows, dataset.labels):
        toks = [repr(float(label))]
        toks += [f"{int(i) + 1}:{float(v)!r}" for i, v in zip(row.indices, row.values)]
        lines.append(" ".join(toks))
    return "\n".join(lines) + ("\n" if lines else "")


def load_libsvm_file(path) -> Dataset:
    """Load a LIBSVM file; paths ending in .gz are decompressed transparently."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt") as fh:
        return parse_libsvm(fh.read())


def save_libsvm_file(dataset: Dataset, path):
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "wt") as fh:
        fh.write(serialize_libsvm(dataset))


# ---------------------------------------------------------------------------
# random streams

class RngStream:
    """Deterministic splittable random stream (counter-based Philox core).

    A stream is identified by (seed, path). ``substream(tag)`` derives an
    independent child stream; the child's draws never depend on how much the
    parent has been consumed. Consumers that make a fixed number of draws per
    iteration therefore see draws that are a pure function of
    (seed, iteration), independent of logging cadence or branch outcomes on
    other substreams. A stream is single-owner: concurrent runs must each
    derive their own.
    """

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.path = tuple(int(t) for t in path)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.path)
        self._gen = np.random.Generator(np.random.Philox(ss))

    def substream(self, tag: int) -> "RngStream":
        return RngStream(self.seed, self.path + (int(tag),))

    def integers(self, low: int, high: int, size=None):
        return self._gen.integers(low, high, size=size)

    def uniform(self) -> float:
        return float(self._gen.uniform())

    def normal(self, size=None):
        return self._gen.normal(size=size)


def sample_batch(rng: RngStream, n_samples: int, batch_size: int) -> np.ndarray:
    """Draw batch_size sample ids uniformly with replacement."""
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    if batch_size <= 0:
        raise ValueError("batch_size must be positive")
    return rng.integers(0, n_samples, size=batch_size)
