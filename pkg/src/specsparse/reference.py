"""Dense ground-truth spectra and norms for checking the sublinear algorithms.

The primary eigensolver is cyclic Jacobi on a round-robin schedule: fully
deterministic and independent of LAPACK. For large matrices ``method="auto"``
switches to LAPACK ``syevd`` (via numpy) because a Jacobi sweep costs O(n^3)
Python-level work; the two routes are cross-checked in the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, NoConvergence, NonSquare
from .kernels import eigh_serial, fnorm

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 60
AUTO_JACOBI_MAX_N = 128


@dataclass
class DenseSpectrum:
    """Eigen- or singular values in descending order with their vectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0
    method: str = "jacobi"


def _as_square(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {A.shape}")
    return A


def jacobi_eigen(A, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> DenseSpectrum:
    """Cyclic Jacobi eigendecomposition of symmetric ``A``.

    Stops once the off-diagonal Frobenius norm is at most ``tol * ||A||_F``.

    Raises
    ------
    NoConvergence
        if ``max_sweeps`` sweeps do not reach the tolerance.
    """
    A = _as_square(A)
    n = A.shape[0]
    if n == 0:
        return DenseSpectrum(np.zeros(0), np.zeros((0, 0)))
    sched = kernels.round_robin_schedule(n)
    diag, V, sweeps, off = kernels.jacobi_sweeps(A, sched, tol, max_sweeps)
    fro = fnorm(A)
    if off > tol * fro:
        raise NoConvergence(f"Jacobi: off-diagonal norm {off:.3e} after {sweeps} sweeps")
    order = np.argsort(-diag, kind="stable")
    return DenseSpectrum(diag[order], V[:, order], sweeps, "jacobi")


def sym_eigen(A, method: str = "auto") -> DenseSpectrum:
    """Full eigendecomposition of a symmetric matrix, eigenvalues descending.

    ``method`` is "jacobi", "lapack", or "auto" (Jacobi up to
    ``AUTO_JACOBI_MAX_N``, LAPACK above).
    """
    A = _as_square(A)
    if method == "auto":
        method = "jacobi" if A.shape[0] <= AUTO_JACOBI_MAX_N else "lapack"
    if method == "jacobi":
        return jacobi_eigen(A)
    if method != "lapack":
        raise ValueError(f"unknown method {method!r}")
    w, V = eigh_serial(A)
    return DenseSpectrum(w[::-1].copy(), V[:, ::-1].copy(), 0, "lapack")


def singular_values(A, method: str = "auto") -> np.ndarray:
    """Singular values, descending.

    Symmetric input: absolute eigenvalues. Otherwise the top half of the
    Hermitian dilation's spectrum.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim == 2 and A.shape[0] == A.shape[1] and np.array_equal(A, A.T):
        return np.sort(np.abs(sym_eigen(A, method).values))[::-1]
    m, n = A.shape
    D = np.zeros((m + n, m + n))
    D[:m, m:] = A
    D[m:, :m] = A.T
    return sym_eigen(D, method).values[: min(m, n)].clip(min=0.0)


def spectral_norm(A, method: str = "auto") -> float:
    A = np.asarray(A, dtype=np.float64)
    if A.size == 0:
        return 0.0
    return float(singular_values(A, method)[0])


def nuclear_norm(A, method: str = "auto") -> float:
    return float(np.sum(singular_values(A, method)))


def min_eigenvalue(A, method: str = "auto") -> float:
    return float(sym_eigen(A, method).values[-1])


def weyl_check(A, Atilde, method: str = "auto") -> dict:
    """Check max_i |sigma_i(A) - sigma_i(Atilde)| <= ||A - Atilde||_2.

    Returns a dict with both sides, the margin (rhs - lhs) and ``holds``.
    """
    A = np.asarray(A, dtype=np.float64)
    At = np.asarray(Atilde, dtype=np.float64)
    if A.shape != At.shape:
        raise DimensionMismatch(f"{A.shape} vs {At.shape}")
    lhs = float(np.max(np.abs(singular_values(A, method) - singular_values(At, method)), initial=0.0))
    rhs = spectral_norm(A - At, method)
    tol = 1e-9 * max(1.0, rhs)
    return {"max_sv_diff": lhs, "spectral_err": rhs, "weyl_margin": rhs - lhs, "holds": lhs <= rhs + tol}
