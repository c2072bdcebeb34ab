import numpy as np
import pytest

import oracles
from specsparse import krylov, matview, sparsifier
from specsparse.eigensolve import DenseOp, SparseOp, deflation_singvals
from specsparse.errors import BadSizes, DegenerateBlock
from specsparse.krylov import KrylovConfig


def test_exact_top_vectors_q0():
    D = matview.gen_random_symmetric_bounded(60, 1).peek_dense()
    U, s, _ = np.linalg.svd(D)
    Zt, info = krylov.block_krylov(DenseOp(D), U[:, :3], 0, 3)
    assert info["blocks"] == 1
    assert np.sqrt(Zt[:, 0] @ D @ D.T @ Zt[:, 0]) == pytest.approx(s[0], rel=1e-12)


@pytest.mark.parametrize("q", [0, 1, 5])
def test_diagonal_invariance(q):
    D = np.diag([4.0, 3.0, 2.0, 1.0])
    Zt, info = krylov.block_krylov(DenseOp(D), np.eye(4)[:, :2], q, 2)
    assert np.linalg.norm(D @ Zt[:, 0]) == pytest.approx(4.0, rel=1e-14)


def _gap_instance(n, seed):
    return matview.gen_spiked(n, seed, strengths=(0.5, 0.2), noise=0.05)


@pytest.mark.parametrize("seed", range(3))
def test_spiked_256_high_accuracy(seed):
    A = _gap_instance(256, seed)
    D = A.peek_dense()
    sv = oracles.singvals(D)
    z, sigma, rep = krylov.high_accuracy_specnorm(A, 0.25, 1e-6, seed)
    val = np.linalg.norm(D @ z)
    assert (1 - 1e-6) * sv[0] <= val <= sv[0] * (1 + 1e-9)
    Zt = rep["vectors"]
    assert np.max(np.abs(Zt.T @ Zt - np.eye(Zt.shape[1]))) <= 1e-8
    refined = rep["refined_sigmas"]
    assert refined[1] >= (1 - 1e-6) * sv[1]
    assert rep["queries_total"] == A.query_counter == 256 * 257 // 2
    assert rep["queries_sparsify"] <= rep["plan"]["pairs"]


@pytest.mark.parametrize("seed", range(3))
def test_starting_block_and_monotone_improvement(seed):
    n, p = 256, 2
    A = _gap_instance(n, seed)
    D = A.peek_dense()
    cfg = KrylovConfig(0.25, 1e-6)
    pl = sparsifier.plan("general", cfg.sparsify_eps, n, seed)
    At = sparsifier.sparsify(A, pl)
    ests = deflation_singvals(SparseOp(At), cfg.sparsify_eps, cfg.k, 5)
    Z = np.column_stack([e.z for e in ests])
    U = np.linalg.svd(D)[0]
    smin = np.linalg.svd(U[:, :p].T @ Z[:, :p], compute_uv=False)[-1]
    assert smin >= 1.0 / (100 * n)
    err = oracles.specnorm(D - At.to_dense())
    z, sigma, _ = krylov.high_accuracy_specnorm(A, 0.25, 1e-6, seed)
    assert sigma >= np.linalg.norm(At.to_dense() @ Z[:, 0]) - err
    s1 = oracles.singvals(D)[0]
    assert abs(z @ D @ D.T @ z - s1 ** 2) <= 1e-6 * s1 ** 2


def test_all_ones_rank_one():
    n = 64
    z, sigma, _ = krylov.high_accuracy_specnorm(matview.gen_all_ones(n), 1.0, 1e-8)
    assert sigma == pytest.approx(n, rel=1e-8)


def test_half_ones_plus_noise():
    n = 200
    rng = np.random.default_rng(4)
    N = rng.uniform(-0.01, 0.01, (n, n))
    D = 0.5 * np.ones((n, n)) + (N + N.T) / 2
    assert oracles.specnorm(D - 0.5 * np.ones((n, n))) <= 0.01 * n
    z, sigma, _ = krylov.high_accuracy_specnorm(matview.from_dense(D), 0.25, 1e-6)
    s1 = oracles.singvals(D)[0]
    assert np.linalg.norm(D @ z) >= (1 - 1e-6) * s1


def test_config_values():
    cfg = KrylovConfig(0.25, 1e-6)
    assert cfg.k == 8
    assert cfg.sparsify_eps == pytest.approx(0.01 * 0.25 ** 4)
    assert cfg.q(512) >= 1
    with pytest.raises(BadSizes):
        KrylovConfig(0.0, 0.1)
    with pytest.raises(BadSizes):
        KrylovConfig(0.5, 1.0)


def test_degenerate_block():
    with pytest.raises(DegenerateBlock):
        krylov.block_krylov(DenseOp(np.zeros((5, 5))), np.eye(5)[:, :2], 3, 2)
