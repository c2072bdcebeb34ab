import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from specsparse import binary_psd, expander, matview, psd_test
from specsparse.errors import BadSizes, EntryOutOfAlphabet, NotBinaryPsd


def test_identity_is_psd():
    v = psd_test.psd_test(matview.gen_identity(64), 0.2)
    assert v.verdict == psd_test.PSD


def test_planted_far():
    A = matview.gen_planted_negative(512, 0.2)
    D = A.peek_dense()
    assert np.linalg.eigvalsh(D)[0] == pytest.approx(1 - np.ceil(0.2 * 2 * 512))
    assert np.linalg.eigvalsh(D)[0] <= -0.2 * 512
    v = psd_test.psd_test(A, 0.2)
    assert v.verdict == psd_test.FAR
    assert v.sigma1_B > v.threshold


@pytest.mark.parametrize("seed", range(3))
def test_random_psd_is_psd(seed):
    A = matview.gen_random_psd_bounded(512, seed)
    v = psd_test.psd_test(A, 0.1, seed)
    assert v.verdict == psd_test.PSD
    assert (v.sigma1_B <= v.threshold) == (v.verdict == psd_test.PSD)
    assert v.queries == A.query_counter <= v.plan["pairs"]


def test_zero_matrix_degenerate():
    v = psd_test.psd_test(matview.from_dense(np.zeros((20, 20))), 0.2)
    assert v.verdict == psd_test.PSD and v.degenerate_scale


def test_psd_test_bad_eps():
    with pytest.raises(BadSizes):
        psd_test.psd_test(matview.gen_identity(8), 0.0)


# --- binary PSD ---------------------------------------------------------------


def test_identity_blocks():
    dec = binary_psd.block_structure(np.eye(6))
    assert dec.sizes == [1] * 6


def test_inconsistent_signs():
    A = np.eye(3)
    A[0, 1] = A[1, 0] = 1
    A[1, 2] = A[2, 1] = 1
    A[0, 2] = A[2, 0] = -1
    with pytest.raises(NotBinaryPsd):
        binary_psd.block_structure(A)


@pytest.mark.parametrize("M", [np.array([[1.0, 0.5], [0.5, 1.0]]), np.array([[1.0, 1.0], [0.0, 1.0]]),
                               np.array([[-1.0]])])
def test_block_structure_rejects(M):
    with pytest.raises(NotBinaryPsd):
        binary_psd.block_structure(M)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**31))
def test_block_structure_reconstructs(n, seed):
    A = matview.gen_random_signed_blocks(n, seed).peek_dense()
    dec = binary_psd.block_structure(A)
    assert np.array_equal(dec.reconstruct(), A)
    supports = [set(b.support) for b in dec.blocks]
    assert sum(len(s) for s in supports) == len(set().union(*supports)) if supports else True


def test_two_half_blocks_recovered_exactly():
    n = 1024
    A = matview.gen_signed_blocks([512, 512])
    rec = binary_psd.binary_psd_approx(A, 0.1)
    assert np.array_equal(rec.Atilde.to_dense(), A.peek_dense())
    assert len(rec.components_used) == 2
    assert rec.queries <= binary_psd.query_budget(rec.graph, 0.1)
    assert rec.graph.n == n


def test_identity_recovers_nothing():
    rec = binary_psd.binary_psd_approx(matview.gen_identity(200), 0.1)
    assert rec.Atilde.nnz == 0 and rec.components_used == []
    assert oracles.specnorm(np.eye(200) - rec.Atilde.to_dense()) == 1.0


def test_signed_block_signs():
    n = 300
    size = 90
    minus = set(range(0, size, 3))
    A = matview.gen_signed_blocks([size], [{"+": set(range(size)) - minus, "-": minus}], n=n,
                                  perm=np.random.default_rng(1).permutation(n))
    rec = binary_psd.binary_psd_approx(A, 0.1, mode="certified")
    D = A.peek_dense()
    assert np.array_equal(rec.Atilde.to_dense(), D)
    assert oracles.specnorm(D - rec.Atilde.to_dense()) <= 0.1 * n


@pytest.mark.parametrize("seed", range(4))
def test_recovered_is_psd_on_alphabet(seed):
    A = matview.gen_random_signed_blocks(256, seed)
    rec = binary_psd.binary_psd_approx(A, 0.1, seed)
    At = rec.Atilde.to_dense()
    assert set(np.unique(At)).issubset({-1.0, 0.0, 1.0})
    assert np.linalg.eigvalsh(At)[0] >= -1e-8
    for comp, _ in rec.components_used:
        assert len(comp) > 0.1 * 256 / 2
    assert rec.queries == A.query_counter


def test_component_bounds():
    n, eps = 400, 0.1
    half = matview.gen_signed_blocks([n // 2], n=n).peek_dense()
    G, cert = expander.build_epsn_expander(n, eps / 6, "certified")
    chk = binary_psd.component_size_bound_check(half, G, eps)
    assert chk["all_hold"]
    assert chk["blocks"][0]["largest_component"] > n // 2 - 0.05 * n
    small = matview.gen_signed_blocks([int(eps * n / 2)], n=n).peek_dense()
    assert binary_psd.component_size_bound_check(small, G, eps)["blocks"][0]["vacuous"]
    rec = binary_psd.binary_psd_approx(matview.gen_all_ones(n), eps, mode="certified")
    assert max(rec.component_sizes) >= n - eps * n / 2


def test_alphabet_violation():
    A = matview.from_dense(np.full((10, 10), 0.5))
    with pytest.raises(EntryOutOfAlphabet):
        binary_psd.binary_psd_approx(A, 0.2)
