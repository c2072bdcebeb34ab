import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from specsparse import matview, mmio
from specsparse.errors import (AsymmetricInput, BadSizes, DimensionMismatch, EntryOutOfRange,
                               NonSquare, ParseError)


def test_identity_oracle_entries():
    A = matview.from_dense(np.eye(2))
    assert A.entry(0, 0) == 1.0
    assert A.entry(0, 1) == 0.0


def test_bound_violation():
    M = np.zeros((2, 2))
    M[0, 1] = M[1, 0] = 1.5
    with pytest.raises(EntryOutOfRange):
        matview.from_dense(M)
    A = matview.from_dense(M, bounded=False)
    assert A.entry(0, 1) == 1.5


def test_construction_errors():
    with pytest.raises(NonSquare):
        matview.from_dense(np.zeros((2, 3)))
    with pytest.raises(AsymmetricInput):
        matview.from_dense(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(DimensionMismatch):
        matview.gen_identity(3).entries([0, 1], [0])
    with pytest.raises(IndexError):
        matview.gen_identity(3).entry(3, 0)


def test_unordered_pair_counting():
    A = matview.from_dense(np.ones((3, 3)))
    A.entry(0, 1)
    A.entry(1, 0)
    assert A.query_counter == 1
    assert A.query_count_ordered == 2
    A.entry(2, 2)
    assert (A.query_counter, A.query_count_ordered) == (2, 3)
    A.reset_counter()
    assert A.query_counter == 0


def test_peek_is_free_and_read_all_counts():
    A = matview.gen_all_ones(5)
    A.peek_dense()
    assert A.query_counter == 0
    assert np.array_equal(A.read_all(), np.ones((5, 5)))
    assert A.query_counter == 15
    assert A.query_count_ordered == 25


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.booleans(), st.data())
def test_counter_equals_distinct_positions(n, symmetric, data):
    M = np.random.default_rng(n).uniform(-1, 1, (n, n))
    if symmetric:
        M = (M + M.T) / 2
    w = oracles.RecountingOracle(M, symmetric=symmetric)
    reads = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=60))
    for i, j in reads:
        assert w.oracle.entry(i, j) == M[i, j]
    assert w.oracle.query_counter == w.distinct
    assert w.oracle.query_count_ordered == w.distinct_ordered


def test_counter_exact_under_threads():
    n = 64
    A = matview.gen_all_ones(n)
    rows, cols = np.triu_indices(n)

    def worker(k):
        for s in range(k, rows.size, 4):
            A.entries(rows[s:s + 1], cols[s:s + 1])
            A.entries(cols[s:s + 1], rows[s:s + 1])

    ts = [threading.Thread(target=worker, args=(k,)) for k in range(4)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert A.query_counter == n * (n + 1) // 2


def test_gen_all_ones():
    assert matview.gen_all_ones(4).entry(2, 3) == 1.0


def test_planted_negative_min_eigenvalue():
    A = matview.gen_planted_negative(100, 0.1)
    assert A.meta["k"] == 20
    lam = np.linalg.eigvalsh(A.peek_dense())
    assert lam[0] == pytest.approx(-19.0, abs=1e-10)
    assert lam[0] <= -10
    seeded = matview.gen_planted_negative(100, 0.1, seed=3).peek_dense()
    assert np.linalg.eigvalsh(seeded)[0] == pytest.approx(-19.0, abs=1e-10)


def test_planted_negative_unplantable():
    A = matview.gen_planted_negative(5, 0.1)
    assert A.meta["plantable"] is False
    assert np.array_equal(A.peek_dense(), np.eye(5))
    with pytest.raises(BadSizes):
        matview.gen_planted_negative(5, 1.5)


@pytest.mark.parametrize("seed", range(5))
def test_random_psd_invariants(seed):
    D = matview.gen_random_psd_bounded(96, seed).peek_dense()
    assert np.array_equal(D, D.T)
    assert np.all(np.diag(D) == 1.0)
    assert np.max(np.abs(D)) <= 1.0
    assert np.linalg.eigvalsh(D)[0] >= -1e-8


def test_random_generators_reproducible():
    a = matview.gen_random_symmetric_bounded(40, 9).peek_dense()
    assert np.array_equal(a, matview.gen_random_symmetric_bounded(40, 9).peek_dense())
    assert not np.array_equal(a, matview.gen_random_symmetric_bounded(40, 10).peek_dense())
    assert np.max(np.abs(a)) <= 1.0


def test_signed_blocks_layout():
    A = matview.gen_signed_blocks([3, 2], [{"+": {0, 2}, "-": {1}}, None], n=6).peek_dense()
    v = np.array([1.0, -1.0, 1.0, 0, 0, 0])
    w = np.array([0, 0, 0, 1.0, 1.0, 0])
    assert np.array_equal(A, np.outer(v, v) + np.outer(w, w))
    with pytest.raises(BadSizes):
        matview.gen_signed_blocks([3, 4], n=6)
    with pytest.raises(BadSizes):
        matview.gen_signed_blocks([2], [{"+": {0}, "-": {0}}])


def test_dilation_examples():
    B = matview.hermitian_dilation(matview.from_dense(np.array([[0.5]]), symmetric=False))
    assert np.array_equal(B.peek_dense(), np.array([[0, 0.5], [0.5, 0]]))
    assert oracles.specnorm(B.peek_dense()) == 0.5
    Z = matview.hermitian_dilation(matview.from_dense(np.zeros((3, 3)), symmetric=False))
    assert not Z.peek_dense().any()


@pytest.mark.parametrize("n", range(1, 9))
def test_dilation_duplicates_singular_values(n):
    M = np.random.default_rng(n).uniform(-1, 1, (n, n))
    base = matview.from_dense(M, symmetric=False)
    B = matview.hermitian_dilation(base)
    got = np.sort(np.abs(np.linalg.eigvalsh(B.peek_dense())))
    want = np.sort(np.repeat(oracles.singvals(M), 2))
    np.testing.assert_allclose(got, want, atol=1e-12)
    B.entry(0, n)
    B.entry(n, 0)
    B.entry(0, 0)
    assert base.query_counter == 1


def test_sparse_sym_matrix():
    S = matview.SparseSymMatrix.from_triplets(3, [0, 1, 1, 2], [1, 0, 2, 2], [1.0, 2.0, 0.0, 4.0])
    assert np.array_equal(S.to_dense(), np.array([[0, 3.0, 0], [3.0, 0, 0], [0, 0, 4.0]]))
    assert S.nnz == 3
    X = np.arange(6.0).reshape(3, 2)
    np.testing.assert_allclose(S.matmat(X), S.to_dense() @ X)
    assert matview.SparseSymMatrix.zeros(3).nnz == 0


def test_mm_identity_round_trip(tmp_path):
    p = tmp_path / "i.mtx"
    mmio.write_matrix_market(p, np.eye(3))
    assert np.array_equal(mmio.read_matrix_market(p), np.eye(3))


def test_mm_duplicate_entry(tmp_path):
    p = tmp_path / "d.mtx"
    p.write_text("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.0\n1 1 2.0\n")
    with pytest.raises(ParseError):
        mmio.read_matrix_market(p)


@pytest.mark.parametrize("text", [
    "", "%%MatrixMarket matrix weird real general\n1 1\n1\n",
    "%%MatrixMarket matrix array real general\n2 2\n1\n",
    "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
    "not a header\n",
])
def test_mm_malformed(tmp_path, text):
    p = tmp_path / "bad.mtx"
    p.write_text(text)
    with pytest.raises(ParseError):
        mmio.read_matrix_market(p)


def test_mm_random_symmetric_byte_exact(tmp_path):
    D = matview.gen_random_symmetric_bounded(100, 4).peek_dense()
    r, c = np.triu_indices(100)
    S = matview.SparseSymMatrix.from_triplets(100, r, c, D[r, c])
    p = tmp_path / "s.mtx"
    mmio.write_matrix_market(p, S)
    back = mmio.read_matrix_market(p)
    assert np.max(np.abs(back.to_dense() - D)) == 0.0
    q = tmp_path / "d.mtx"
    mmio.write_matrix_market(q, D)
    assert np.max(np.abs(mmio.read_matrix_market(q) - D)) == 0.0
    o = mmio.load_oracle(p)
    assert o.symmetric and o.query_counter == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=12))
def test_mm_round_trip_any_doubles(tmp_path_factory, vals):
    p = tmp_path_factory.mktemp("mm") / "v.mtx"
    M = np.asarray(vals)[:, None]
    mmio.write_matrix_market(p, M)
    assert np.array_equal(mmio.read_matrix_market(p), M)
