"""Parser, serializer, sampling, and sparse-vector tests."""

import gzip

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from proxsgd.core import (
    Dataset,
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
    sv_to_dense,
)


def datasets_equal(a: Dataset, b: Dataset) -> bool:
    if a.n_samples != b.n_samples or a.n_features != b.n_features:
        return False
    if not np.array_equal(a.labels, b.labels):
        return False
    return all(
        np.array_equal(r.indices, s.indices) and np.array_equal(r.values, s.values)
        for r, s in zip(a.rows, b.rows)
    )


# ---------------------------------------------------------------------------
# parsing

def test_parse_basic_two_rows():
    ds = parse_libsvm("1 1:0.5 3:-2\n-1 2:1\n")
    assert ds.n_samples == 2
    assert ds.n_features == 3
    assert list(ds.labels) == [1.0, -1.0]
    assert list(ds.rows[0].indices) == [0, 2]
    assert list(ds.rows[0].values) == [0.5, -2.0]
    assert list(ds.rows[1].indices) == [1]
    assert list(ds.rows[1].values) == [1.0]


def test_parse_zero_one_labels_remapped_and_label_only_row():
    ds = parse_libsvm("1 3:2.5\n0\n")
    assert list(ds.labels) == [1.0, -1.0]
    assert ds.rows[1].nnz == 0
    assert ds.n_features == 3


def test_parse_keeps_real_labels():
    ds = parse_libsvm("0.5 1:1\n-2.25 1:2\n")
    assert list(ds.labels) == [0.5, -2.25]


def test_parse_rejects_zero_index():
    with pytest.raises(ParseError, match="line 1"):
        parse_libsvm("1 0:1.0")


def test_parse_rejects_nonincreasing_indices():
    with pytest.raises(ParseError, match="line 2.*increasing"):
        parse_libsvm("1 1:1\n1 2:1 2:3\n")
    with pytest.raises(ParseError, match="line 1"):
        parse_libsvm("1 3:1 2:5\n")


def test_parse_rejects_malformed_tokens():
    with pytest.raises(ParseError, match="line 1.*label"):
        parse_libsvm("abc 1:2\n")
    with pytest.raises(ParseError, match="line 1.*feature"):
        parse_libsvm("1 4\n")
    with pytest.raises(ParseError, match="line 2.*feature"):
        parse_libsvm("1 1:1\n1 a:b\n")


def test_parse_skips_blank_lines():
    ds = parse_libsvm("\n1 1:1\n\n-1 2:1\n\n")
    assert ds.n_samples == 2


@st.composite
def libsvm_datasets(draw):
    n_features = draw(st.integers(1, 12))
    n_rows = draw(st.integers(1, 8))
    finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
    rows, labels = [], []
    for _ in range(n_rows):
        idx = draw(st.sets(st.integers(0, n_features - 1), max_size=n_features))
        idx = np.array(sorted(idx), dtype=np.int32)
        vals = np.array([draw(finite) for _ in idx])
        rows.append(SparseVec(idx, vals))
        labels.append(draw(st.sampled_from([-1.0, 1.0, 0.0, 2.5, -0.75])))
    return Dataset(rows, np.array(labels))


@given(libsvm_datasets())
@settings(max_examples=60, deadline=None)
def test_serialize_parse_round_trip(ds):
    once = parse_libsvm(serialize_libsvm(ds))
    twice = parse_libsvm(serialize_libsvm(once))
    assert datasets_equal(once, twice)


def test_round_trip_against_sklearn(tmp_path):
    sklearn_io = pytest.importorskip("sklearn.datasets")
    rng = np.random.default_rng(5)
    rows = []
    for _ in range(20):
        idx = np.sort(rng.choice(30, size=7, replace=False)).astype(np.int32)
        rows.append(SparseVec(idx, rng.normal(size=7)))
    labels = rng.choice([-1.0, 1.0], size=20)
    ds = Dataset(rows, labels, n_features=30)
    path = tmp_path / "probe.libsvm"
    save_libsvm_file(ds, path)
    X, y = sklearn_io.load_svmlight_file(str(path), n_features=30)
    assert np.allclose(X.toarray(), ds.X.toarray(), atol=0, rtol=0)
    assert np.array_equal(y, labels)


def test_gzip_round_trip(tmp_path):
    ds = parse_libsvm("1 1:0.5 3:-2\n-1 2:1\n")
    gz = tmp_path / "data.libsvm.gz"
    save_libsvm_file(ds, gz)
    with gzip.open(gz, "rt") as fh:  # really gzip-compressed
        assert fh.read() == serialize_libsvm(ds)
    assert datasets_equal(load_libsvm_file(gz), ds)
    plain = tmp_path / "data.libsvm"
    save_libsvm_file(ds, plain)
    assert datasets_equal(load_libsvm_file(plain), ds)


# ---------------------------------------------------------------------------
# sampling

def test_sample_batch_deterministic():
    a = sample_batch(RngStream(42), 100, 10)
    b = sample_batch(RngStream(42), 100, 10)
    assert np.array_equal(a, b)
    assert a.shape == (10,)
    assert a.min() >= 0 and a.max() < 100


def test_sample_batch_validates():
    with pytest.raises(ValueError):
        sample_batch(RngStream(0), 0, 4)
    with pytest.raises(ValueError):
        sample_batch(RngStream(0), 10, 0)


@given(st.integers(0, 2**32 - 1), st.integers(1, 50), st.integers(1, 32))
@settings(max_examples=40, deadline=None)
def test_sample_batch_range_and_determinism(seed, n, b):
    ids = sample_batch(RngStream(seed), n, b)
    assert np.array_equal(ids, sample_batch(RngStream(seed), n, b))
    assert ids.min() >= 0 and ids.max() < n


def test_substreams_are_independent_of_parent_consumption():
    parent = RngStream(9)
    parent.uniform()
    parent.integers(0, 1000, size=64)
    used_child = sample_batch(parent.substream(5), 50, 8)
    fresh_child = sample_batch(RngStream(9).substream(5), 50, 8)
    assert np.array_equal(used_child, fresh_child)


def test_substream_draws_differ_from_parent():
    assert not np.array_equal(
        sample_batch(RngStream(9), 1000, 32),
        sample_batch(RngStream(9).substream(0), 1000, 32),
    )


def test_sampling_is_roughly_uniform():
    ids = sample_batch(RngStream(123), 8, 80_000)
    counts = np.bincount(ids, minlength=8)
    # each bin ~ Binomial(80000, 1/8): mean 10000, sd ~94; 5 sigma band
    assert np.all(np.abs(counts - 10_000) < 500)


# ---------------------------------------------------------------------------
# sparse vectors

def test_sparsevec_validation():
    with pytest.raises(ValueError):
        SparseVec(np.array([2, 1], dtype=np.int32), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        SparseVec(np.array([1, 1], dtype=np.int32), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        SparseVec(np.array([-1], dtype=np.int32), np.array([1.0]))
    with pytest.raises(ValueError):
        SparseVec(np.array([0, 1], dtype=np.int32), np.array([1.0]))


def test_sparse_ops_match_dense(rng_np):
    for _ in range(25):
        dim = int(rng_np.integers(3, 12))
        nnz = int(rng_np.integers(0, dim + 1))
        idx = np.sort(rng_np.choice(dim, size=nnz, replace=False)).astype(np.int32)
        v = SparseVec(idx, rng_np.normal(size=nnz))
        dense_v = sv_to_dense(v, dim)
        w = rng_np.normal(size=dim)
        assert sv_dot(v, w) == pytest.approx(dense_v @ w, abs=1e-14)
        assert sv_norm2(v) == pytest.approx(np.linalg.norm(dense_v), abs=1e-14)
        target = w.copy()
        sv_axpy(-1.75, v, target)
        assert np.allclose(target, w - 1.75 * dense_v, atol=1e-14)


def test_sparse_ops_dimension_mismatch():
    v = SparseVec(np.array([4], dtype=np.int32), np.array([1.0]))
    with pytest.raises(ValueError, match="dimension"):
        sv_dot(v, np.zeros(3))
    with pytest.raises(ValueError, match="dimension"):
        sv_axpy(1.0, v, np.zeros(4))


def test_dataset_csr_matches_rows():
    ds = parse_libsvm("1 1:0.5 3:-2\n-1 2:1\n1\n")
    dense = ds.X.toarray()
    assert dense.shape == (3, 3)
    expect = np.array([[0.5, 0.0, -2.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    assert np.array_equal(dense, expect)
