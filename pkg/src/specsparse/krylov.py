"""High-accuracy top singular value under a large-sigma_1 promise.

When sigma_1(A) >= alpha max(n, ||A||_1), deflation on a sparsified copy yields
a starting block Z whose span has non-negligible overlap with the top singular
directions. Block Krylov iteration on A itself, started from Z, then converges
to relative accuracy eps in O(log(n/eps) / alpha^1.5) block steps.

Only the sparsification stage is sublinear in entry reads; the Krylov stage
reads all of A.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import sparsifier
from .eigensolve import C_PM, DenseOp, LinOp, SparseOp, deflation_singvals
from .errors import BadSizes, DegenerateBlock
from .kernels import eigh_serial, fnorm, matmul
from .matview import EntryOracle

C_SP = 0.01
C_Q = 10.0
DROP_TOL = 1e-12


@dataclass(frozen=True)
class KrylovConfig:
    alpha: float
    eps: float
    c_sp: float = C_SP
    c_q: float = C_Q

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise BadSizes("alpha must lie in (0, 1]")
        if not 0.0 < self.eps < 1.0:
            raise BadSizes("eps must lie in (0, 1)")

    @property
    def k(self) -> int:
        return max(1, math.ceil(2.0 / self.alpha))

    @property
    def sparsify_eps(self) -> float:
        return self.c_sp * self.alpha ** 4

    def q(self, n: int) -> int:
        return max(1, math.ceil(self.c_q * math.log(n / self.eps) / self.alpha ** 1.5))


def _orthonormalize_against(W, Q, scale):
    """Columns of W made orthonormal to Q and each other; near-dependent ones dropped.

    Two block Gram-Schmidt passes against Q, then column-wise modified
    Gram-Schmidt with one re-orthogonalization. A column is dropped when its
    residual falls to ``DROP_TOL * scale``.
    """
    for _ in range(2):
        if Q.shape[1]:
            W = W - matmul(Q, matmul(Q.T, W))
    kept = []
    for j in range(W.shape[1]):
        w = W[:, j].copy()
        for _ in range(2):
            for u in kept:
                w -= np.sum(u * w) * u
            if Q.shape[1]:
                w -= matmul(Q, matmul(Q.T, w))
        nw = fnorm(w)
        if nw > DROP_TOL * scale:
            kept.append(w / nw)
    if not kept:
        return np.zeros((W.shape[0], 0))
    return np.column_stack(kept)


def block_krylov(A: LinOp, Z, q: int, k_out: int):
    """Rayleigh-Ritz on the Krylov space span[A Z, (A A^T) A Z, ..., (A A^T)^q A Z].

    Each new block is A A^T applied to the previous orthonormalized block, so
    the basis Q spans the same space as the explicit Krylov matrix without its
    conditioning problems. Iteration stops early once no new direction
    survives or Q spans the whole space.

    Returns
    -------
    Ztilde : ndarray (n, k_out)
        Orthonormal Ritz vectors, largest Ritz values first.
    info : dict
        ``blocks`` built, basis ``rank`` and the Ritz ``values`` (square roots).
    """
    Z = np.asarray(Z, dtype=np.float64)
    n = A.n
    W = A.matmat(Z)
    scale = fnorm(W)
    if scale == 0.0 or not np.isfinite(scale):
        raise DegenerateBlock("A Z is numerically zero")
    Q = _orthonormalize_against(W, np.zeros((n, 0)), scale)
    if Q.shape[1] == 0:
        raise DegenerateBlock("A Z is numerically zero")
    blk = Q
    blocks = 1
    while blocks <= q and Q.shape[1] < n and blk.shape[1]:
        W = A.matmat(A.rmatmat(blk))
        blk = _orthonormalize_against(W, Q, fnorm(W))
        Q = np.column_stack([Q, blk])
        blocks += 1
    R = A.rmatmat(Q)
    H = matmul(R.T, R)
    w, U = eigh_serial(0.5 * (H + H.T))
    order = np.argsort(-w, kind="stable")[:k_out]
    Zt = matmul(Q, U[:, order])
    return Zt, {"blocks": blocks, "rank": int(Q.shape[1]),
                "values": np.sqrt(np.clip(w[order], 0.0, None))}


def high_accuracy_specnorm(A: EntryOracle, alpha: float, eps: float, seed: int = 0,
                           config: KrylovConfig | None = None, *, c_pm: float = C_PM,
                           strategy: str = "auto"):
    """sigma_1(A) to relative accuracy eps under sigma_1 >= alpha max(n, ||A||_1).

    Returns
    -------
    z : ndarray
        Unit vector with ||A z|| >= (1 - eps) sigma_1(A) under the promise.
    sigma : float
        ||A^T z||.
    report : dict
        Parameters, query counts (sparsification stage and total), block
        counts, the refined top-k values and the Ritz block ``vectors``
        (an ndarray, dropped from JSON output).
    """
    cfg = config or KrylovConfig(alpha, eps)
    n = A.n
    q0, o0 = A.query_counter, A.query_count_ordered
    pl = sparsifier.plan("general", cfg.sparsify_eps, n, seed)
    At = sparsifier.sparsify(A, pl)
    q_sp, o_sp = A.query_counter - q0, A.query_count_ordered - o0
    k = min(n, cfg.k)
    ests = deflation_singvals(SparseOp(At), cfg.sparsify_eps, k, c_pm, strategy)
    Z = np.column_stack([e.z for e in ests])
    Aop = DenseOp(A.read_all())
    q = cfg.q(n)
    Zt, info = block_krylov(Aop, Z, q, k)
    z = Zt[:, 0].copy()
    z /= fnorm(z)
    sigma = fnorm(Aop.rmatmat(z))
    refined = [fnorm(Aop.rmatmat(Zt[:, i])) for i in range(Zt.shape[1])]
    report = {
        "n": n, "alpha": alpha, "eps": eps, "seed": seed,
        "sigma_tilde": sigma, "block_size": k, "q": q, "iterations": info["blocks"],
        "krylov_rank": info["rank"], "sparsify_eps": cfg.sparsify_eps,
        "plan": pl.to_json(),
        "queries_sparsify": q_sp, "queries_sparsify_ordered": o_sp,
        "queries_total": A.query_counter - q0,
        "deflation_sigmas": [e.sigma_tilde for e in ests],
        "refined_sigmas": refined,
        "vectors": Zt,
    }
    return z, sigma, report
