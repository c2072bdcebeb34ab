"""Hot-kernel dispatch.

The compiled ``_ckernels`` extension is used when it was built; otherwise (or
when ``SPECSPARSE_PURE=1`` is set before import) the numpy implementations in
``_pykernels`` are used. Both expose the same four functions:

``circulant_eigenvalues(n, shifts)``
    Adjacency spectrum of a circulant graph, fixed summation order per k.
``jacobi_sweeps(a, schedule, tol, max_sweeps)``
    Cyclic Jacobi rotations following a round-robin pair schedule.
``connected_components(n, u, v)``
    Union-find labels (minimum vertex of each component).
``sym_coo_matmat(n, rows, cols, vals, X)``
    Product of an upper-triangle-stored symmetric sparse matrix with a block.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if not os.environ.get("SPECSPARSE_PURE"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels


def backend_module(name: str | None = None):
    """Return the kernel module for ``name`` ("compiled" or "python")."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "compiled":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def round_robin_schedule(n: int) -> np.ndarray:
    """Circle-method tournament: every unordered pair exactly once.

    Returns an int64 array of shape (rounds, pairs, 2) with p < q in each pair;
    pairs inside one round are disjoint.
    """
    m = n + (n % 2)
    if m < 2:
        return np.zeros((0, 0, 2), dtype=np.int64)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        rnd = []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                rnd.append((min(a, b), max(a, b)))
        rounds.append(sorted(rnd))
        players = [players[0], players[-1]] + players[1:-1]
    # the dummy player (odd n) sits out exactly once per round, so every
    # round holds the same number of real pairs
    return np.asarray(rounds, dtype=np.int64).reshape(m - 1, n // 2, 2)


def circulant_eigenvalues(n, shifts):
    return _impl.circulant_eigenvalues(int(n), np.asarray(shifts, dtype=np.int64))


def jacobi_sweeps(a, schedule, tol, max_sweeps):
    return _impl.jacobi_sweeps(a, schedule, float(tol), int(max_sweeps))


def connected_components(n, u, v):
    return _impl.connected_components(int(n), u, v)


def sym_coo_matmat(n, rows, cols, vals, X):
    return _impl.sym_coo_matmat(int(n), rows, cols, vals, X)


def fnorm(x) -> float:
    """Euclidean/Frobenius norm with a thread-count-independent reduction.

    ``np.linalg.norm`` reduces through BLAS ``dot``, whose summation order
    depends on the number of BLAS threads; numpy's pairwise ``sum`` does not.
    """
    x = np.asarray(x, dtype=np.float64)
    return float(np.sqrt(np.sum(x * x)))



# --- thread-count-independent dense products --------------------------------

COLUMN_BLOCK = 64
_threads = 1
_controller = None
_pool = None


def _blas():
    global _controller
    if _controller is None:
        from threadpoolctl import ThreadpoolController

        _controller = ThreadpoolController()
    return _controller


def serial_blas():
    """Context manager pinning BLAS to one thread.

    OpenBLAS picks different blockings (and so different rounding) depending
    on its thread count, for gemm at some shapes and for LAPACK's symmetric
    tridiagonalization.
    """
    return _blas().limit(limits=1, user_api="blas")


def set_threads(n: int) -> None:
    """Number of worker threads used by :func:`matmul`."""
    global _threads, _pool
    n = max(1, int(n))
    if n != _threads and _pool is not None:
        _pool.shutdown()
        _pool = None
    _threads = n


def get_threads() -> int:
    return _threads


def matmul(A, B) -> np.ndarray:
    """A @ B whose bits do not depend on the thread count.

    The output is cut into column blocks of fixed width ``COLUMN_BLOCK``, each
    computed by a single-threaded BLAS call; worker threads only decide which
    block runs where.
    """
    global _pool
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    with serial_blas():
        if B.ndim == 1 or B.shape[1] <= COLUMN_BLOCK:
            return A @ B
        out = np.empty((A.shape[0], B.shape[1]))
        starts = range(0, B.shape[1], COLUMN_BLOCK)

        def block(j):
            out[:, j:j + COLUMN_BLOCK] = A @ B[:, j:j + COLUMN_BLOCK]

        if _threads == 1:
            for j in starts:
                block(j)
        else:
            if _pool is None:
                from concurrent.futures import ThreadPoolExecutor

                _pool = ThreadPoolExecutor(max_workers=_threads)
            list(_pool.map(block, starts))
        return out


def eigh_serial(H):
    """``np.linalg.eigh`` with BLAS pinned to one thread."""
    with serial_blas():
        return np.linalg.eigh(H)
