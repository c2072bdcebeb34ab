"""Hadamard sparsification A o S on a certified circulant pattern.

S holds n^2/s on the s = n d off-diagonal positions of a d-regular expander
and 0 elsewhere (the diagonal is never sampled). Given the certificate
||1 - S||_2 = eps_hat n:

* PSD bounded A:      ||A - A o S||_2 <= eps_hat n
* general bounded A:  ||A - A o S||_2 <= eps max(n, ||A||_1)
  once eps_hat <= eps' = eps^2 / (c_gen log2^2(1/eps)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import reference
from .errors import AsymmetricInput, BadSizes, DimensionMismatch, EntryOutOfRange
from .expander import CirculantExpander, ExpanderCertificate, build_for_epsilon
from .matview import EntryOracle, SparseSymMatrix

C_GEN = 4.0
MATRIX_CLASSES = ("psd", "general")


@dataclass(frozen=True)
class SamplingPattern:
    n: int
    rows: np.ndarray
    cols: np.ndarray

    @classmethod
    def from_graph(cls, G: CirculantExpander) -> "SamplingPattern":
        u, v = G.edges()
        return cls(G.n, u, v)

    @property
    def num_pairs(self) -> int:
        return int(self.rows.size)

    @property
    def s(self) -> int:
        return 2 * self.num_pairs

    @property
    def scale(self) -> float:
        return self.n * self.n / self.s

    def to_dense(self) -> np.ndarray:
        """The scaled sampling matrix S."""
        S = np.zeros((self.n, self.n))
        S[self.rows, self.cols] = self.scale
        S[self.cols, self.rows] = self.scale
        return S


@dataclass(frozen=True)
class SparsifierPlan:
    matrix_class: str
    eps: float
    eps_prime: float
    n: int
    seed: int
    graph: CirculantExpander
    certificate: ExpanderCertificate
    pattern: SamplingPattern

    @property
    def certified(self) -> bool:
        """Whether the certificate meets the required expander accuracy."""
        return self.certificate.eps_hat <= self.eps_prime

    @property
    def rowsum_bound(self) -> float:
        """||A - A o S||_2 <= 2 (n - d) for every bounded A.

        Row sums of |1 - S|: one diagonal 1, n-1-d unsampled 1s and d entries of
        n/d - 1. Equals 2 for the complete graph.
        """
        return 2.0 * (self.n - self.graph.degree)

    def certified_bound(self, nuclear_bound: float | None = None) -> float | None:
        """Certified upper bound on ||A - A o S||_2.

        For the general class the error bound needs ``nuclear_bound`` >= ||A||_1;
        without it (or when the certificate misses eps') only the row-sum bound
        is returned.
        """
        bounds = [self.rowsum_bound]
        if self.matrix_class == "psd":
            bounds.append(self.certificate.eps_hat * self.n)
        elif nuclear_bound is not None and self.certified:
            bounds.append(self.eps * max(self.n, float(nuclear_bound)))
        return min(bounds)

    def to_json(self) -> dict:
        return {"class": self.matrix_class, "eps": self.eps, "eps_prime": self.eps_prime,
                "n": self.n, "seed": self.seed, "degree": self.graph.degree,
                "eps_hat": self.certificate.eps_hat, "pairs": self.pattern.num_pairs,
                "certified": self.certified}


def required_eps(matrix_class: str, eps: float, c_gen: float = C_GEN) -> float:
    """Expander accuracy eps' needed for target accuracy ``eps``."""
    if matrix_class == "psd":
        return eps
    if matrix_class != "general":
        raise ValueError(f"matrix_class must be one of {MATRIX_CLASSES}")
    lg = math.log2(1.0 / eps)
    if lg == 0.0:
        return eps
    ep = eps * eps / (c_gen * lg * lg)
    return eps if ep >= 1.0 else ep


def plan(matrix_class: str, eps: float, n: int, seed: int = 0, c_gen: float = C_GEN) -> SparsifierPlan:
    """Build the sampling pattern for accuracy ``eps`` on n x n matrices."""
    if not 0.0 < eps <= 1.0:
        raise BadSizes("eps must lie in (0, 1]")
    if n < 2:
        raise BadSizes("n must be at least 2")
    ep = required_eps(matrix_class, eps, c_gen)
    G, cert = build_for_epsilon(n, ep, seed)
    return SparsifierPlan(matrix_class, float(eps), float(ep), int(n), int(seed), G, cert,
                          SamplingPattern.from_graph(G))


def sparsify(A: EntryOracle, pl: SparsifierPlan) -> SparseSymMatrix:
    """A o S, reading exactly the pattern's unordered pairs."""
    if A.n != pl.n:
        raise DimensionMismatch(f"oracle has n={A.n}, plan has n={pl.n}")
    if not A.symmetric:
        raise AsymmetricInput("sparsify needs a symmetric oracle; use hermitian_dilation")
    p = pl.pattern
    vals = A.entries(p.rows, p.cols)
    if vals.size and np.max(np.abs(vals)) > 1.0:
        bad = int(np.argmax(np.abs(vals)))
        raise EntryOutOfRange(f"|A[{p.rows[bad]},{p.cols[bad]}]| = {abs(vals[bad])} > 1")
    return SparseSymMatrix.from_triplets(pl.n, p.rows, p.cols, p.scale * vals)


def quad_form_gap(A, Atilde: SparseSymMatrix, x) -> float:
    """|x^T A x - x^T Atilde x|."""
    x = np.asarray(x, dtype=np.float64)
    A = np.asarray(A, dtype=np.float64)
    return float(abs(x @ (A @ x) - x @ Atilde.matmat(x)))


def certify_error(A, Atilde: SparseSymMatrix, method: str = "auto") -> float:
    """Exact ||A - Atilde||_2 from the dense reference eigensolver."""
    A = np.asarray(A, dtype=np.float64)
    return reference.spectral_norm(A - Atilde.to_dense(), method)
