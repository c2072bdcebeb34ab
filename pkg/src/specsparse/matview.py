"""Counted entry access to matrices, plus deterministic instance generators.

Every algorithm in the package sees its input only through an
:class:`EntryOracle`, which counts the distinct positions read. For symmetric
oracles an unordered pair {i, j} counts once: reading A[i, j] determines
A[j, i].
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .errors import AsymmetricInput, BadSizes, DimensionMismatch, EntryOutOfRange, NonSquare
from .rng import SplitMix64, derive_seed

Fetch = Callable[[np.ndarray, np.ndarray], np.ndarray]


class EntryOracle:
    """An n x n matrix exposed only through counted entry reads.

    Parameters
    ----------
    n : int
        Dimension.
    fetch : callable
        ``fetch(rows, cols) -> values`` for int arrays of equal length.
    symmetric, bounded : bool
        Structural promises about the matrix. ``bounded`` means every entry
        lies in [-1, 1]; reads that violate it raise :class:`EntryOutOfRange`.
    meta : dict, optional
        Free-form description (generator parameters, flags).
    """

    def __init__(self, n: int, fetch: Fetch, *, symmetric: bool, bounded: bool,
                 meta: dict | None = None, _dense: np.ndarray | None = None,
                 _peek: Callable[[], np.ndarray] | None = None):
        self.n = int(n)
        self.symmetric = bool(symmetric)
        self.bounded = bool(bounded)
        self.meta = dict(meta or {})
        self._fetch = fetch
        self._dense = _dense
        self._peek = _peek
        self._seen: np.ndarray | None = None
        self._count = 0
        self._count_ordered = 0
        self._lock = threading.Lock()

    def __repr__(self):
        return (f"EntryOracle(n={self.n}, symmetric={self.symmetric}, "
                f"bounded={self.bounded}, queries={self._count})")

    @property
    def query_counter(self) -> int:
        """Distinct positions read (unordered pairs when symmetric)."""
        return self._count

    @property
    def query_count_ordered(self) -> int:
        """Distinct ordered positions determined by the reads so far.

        Equals ``query_counter`` for non-symmetric oracles; for symmetric ones
        every off-diagonal pair counts twice.
        """
        return self._count_ordered

    def entry(self, i: int, j: int) -> float:
        return float(self.entries(np.array([i]), np.array([j]))[0])

    def entries(self, rows, cols) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        if rows.shape != cols.shape:
            raise DimensionMismatch("rows and cols must have equal length")
        if rows.size and (rows.min() < 0 or cols.min() < 0 or rows.max() >= self.n
                          or cols.max() >= self.n):
            raise IndexError("entry index out of range")
        vals = np.asarray(self._fetch(rows, cols), dtype=np.float64)
        if self.bounded and vals.size and np.max(np.abs(vals)) > 1.0:
            bad = int(np.argmax(np.abs(vals)))
            raise EntryOutOfRange(
                f"|A[{rows[bad]},{cols[bad]}]| = {abs(vals[bad])} > 1 on a bounded oracle")
        self._record(rows, cols)
        return vals

    def column(self, j: int) -> np.ndarray:
        idx = np.arange(self.n)
        return self.entries(idx, np.full(self.n, j))

    def _record(self, rows, cols):
        if self.symmetric:
            r = np.minimum(rows, cols)
            c = np.maximum(rows, cols)
        else:
            r, c = rows, cols
        with self._lock:
            if self._seen is None:
                self._seen = np.zeros((self.n, self.n), dtype=bool)
            key = np.unique(r * self.n + c)
            new = key[~self._seen.ravel()[key]]
            if new.size == 0:
                return
            self._seen.ravel()[new] = True
            self._count += int(new.size)
            if self.symmetric:
                diag = int(np.count_nonzero(new // self.n == new % self.n))
                self._count_ordered += 2 * int(new.size) - diag
            else:
                self._count_ordered += int(new.size)

    def reset_counter(self):
        with self._lock:
            self._seen = None
            self._count = 0
            self._count_ordered = 0

    def peek_dense(self) -> np.ndarray:
        """Full matrix WITHOUT counting. For reference checks and tests only."""
        if self._dense is not None:
            return self._dense.copy()
        if self._peek is not None:
            return self._peek()
        i, j = np.meshgrid(np.arange(self.n), np.arange(self.n), indexing="ij")
        return np.asarray(self._fetch(i.ravel(), j.ravel()), dtype=np.float64).reshape(self.n, self.n)

    def read_all(self) -> np.ndarray:
        """Full matrix, counted (every position is read)."""
        if self.symmetric:
            r, c = np.triu_indices(self.n)
            v = self.entries(r, c)
            M = np.zeros((self.n, self.n))
            M[r, c] = v
            M[c, r] = v
            return M
        i, j = np.meshgrid(np.arange(self.n), np.arange(self.n), indexing="ij")
        return self.entries(i.ravel(), j.ravel()).reshape(self.n, self.n)


def from_dense(M, symmetric: bool = True, bounded: bool = True, meta: dict | None = None) -> EntryOracle:
    """Wrap a dense square array as a counted oracle."""
    M = np.array(M, dtype=np.float64, copy=True)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    if symmetric and not np.array_equal(M, M.T):
        raise AsymmetricInput("matrix is not exactly symmetric")
    if bounded and M.size and np.max(np.abs(M)) > 1.0:
        raise EntryOutOfRange(f"max |entry| = {np.max(np.abs(M))} > 1")
    M.setflags(write=False)

    def fetch(rows, cols):
        return M[rows, cols]

    return EntryOracle(M.shape[0], fetch, symmetric=symmetric, bounded=bounded,
                       meta=meta, _dense=M)


@dataclass(frozen=True)
class SparseSymMatrix:
    """Symmetric sparse matrix stored as its upper triangle.

    ``rows[k] <= cols[k]``, entries sorted lexicographically, no duplicates,
    values finite and nonzero. The lower triangle is implicit.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    _dense_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_triplets(cls, n, rows, cols, vals, sum_duplicates=True) -> "SparseSymMatrix":
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.asarray(vals, dtype=np.float64).ravel()
        r = np.minimum(rows, cols)
        c = np.maximum(rows, cols)
        key = r * n + c
        order = np.argsort(key, kind="stable")
        key, vals = key[order], vals[order]
        uniq, start = np.unique(key, return_index=True)
        if uniq.size != key.size:
            if not sum_duplicates:
                raise ValueError("duplicate entries")
            vals = np.add.reduceat(vals, start) if key.size else vals
        keep = vals != 0.0
        uniq, vals = uniq[keep], vals[keep]
        if not np.all(np.isfinite(vals)):
            raise ValueError("non-finite sparse entries")
        return cls(int(n), uniq // n, uniq % n, vals)

    @classmethod
    def zeros(cls, n) -> "SparseSymMatrix":
        e = np.zeros(0, dtype=np.int64)
        return cls(int(n), e, e.copy(), np.zeros(0))

    @property
    def nnz(self) -> int:
        """Nonzeros of the full (mirrored) matrix."""
        return 2 * int(self.rows.size) - int(np.count_nonzero(self.rows == self.cols))

    def to_dense(self) -> np.ndarray:
        D = np.zeros((self.n, self.n))
        D[self.rows, self.cols] = self.vals
        D[self.cols, self.rows] = self.vals
        return D

    def matmat(self, X) -> np.ndarray:
        return kernels.sym_coo_matmat(self.n, self.rows, self.cols, self.vals, X)

    def __eq__(self, other):
        if not isinstance(other, SparseSymMatrix):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.rows, other.rows)
                and np.array_equal(self.cols, other.cols) and np.array_equal(self.vals, other.vals))


# --- instance generators -------------------------------------------------


def gen_all_ones(n: int) -> EntryOracle:
    return from_dense(np.ones((n, n)), meta={"family": "all_ones", "n": n})


def gen_identity(n: int) -> EntryOracle:
    return from_dense(np.eye(n), meta={"family": "identity", "n": n})


def gen_signed_blocks(sizes: Sequence[int], sign_splits: Sequence | None = None,
                      n: int | None = None, perm: Sequence[int] | None = None) -> EntryOracle:
    """Binary-magnitude PSD matrix sum_i v_i v_i^T with disjoint signed supports.

    Block ``i`` occupies the next ``sizes[i]`` indices (before the optional
    permutation ``perm`` is applied: index ``t`` is relabelled ``perm[t]``).
    ``sign_splits[i]`` is ``None`` (all +1) or a dict ``{"+": set, "-": set}``
    of local indices partitioning ``range(sizes[i])``.
    """
    sizes = [int(s) for s in sizes]
    total = sum(sizes)
    n = total if n is None else int(n)
    if any(s <= 0 for s in sizes) or total > n:
        raise BadSizes(f"block sizes {sizes} must be positive and sum to at most n={n}")
    if sign_splits is None:
        sign_splits = [None] * len(sizes)
    if len(sign_splits) != len(sizes):
        raise BadSizes("one sign split per block required")
    perm = np.arange(n) if perm is None else np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(n)):
        raise BadSizes("perm must be a permutation of range(n)")

    M = np.zeros((n, n))
    blocks = []
    offset = 0
    for size, split in zip(sizes, sign_splits):
        signs = np.ones(size)
        if split is not None:
            plus = set(split.get("+", ()))
            minus = set(split.get("-", ()))
            if plus & minus or plus | minus != set(range(size)):
                raise BadSizes(f"sign split {split} does not partition range({size})")
            signs[sorted(minus)] = -1.0
        idx = perm[offset:offset + size]
        M[np.ix_(idx, idx)] = np.outer(signs, signs)
        blocks.append({"support": sorted(idx.tolist()),
                       "minus": sorted(idx[signs < 0].tolist())})
        offset += size
    return from_dense(M, meta={"family": "signed_blocks", "n": n, "blocks": blocks})


def gen_random_psd_bounded(n: int, seed: int, rank: int = 8) -> EntryOracle:
    """A = B^T B with B (rank x n) having unit-norm columns.

    Entries of B are SplitMix64 uniforms in [-1, 1) drawn row-major; the result
    is PSD, symmetric, has unit diagonal and |A_ij| <= 1.
    """
    rng = SplitMix64(derive_seed(seed, "random_psd"))
    B = rng.uniform_pm1(rank * n).reshape(rank, n)
    B /= np.linalg.norm(B, axis=0)
    A = kernels.matmul(B.T, B)
    A = np.triu(A) + np.triu(A, 1).T
    np.clip(A, -1.0, 1.0, out=A)
    np.fill_diagonal(A, 1.0)
    return from_dense(A, meta={"family": "psd_random", "n": n, "seed": seed, "rank": rank})


def gen_random_symmetric_bounded(n: int, seed: int, scale: float = 1.0) -> EntryOracle:
    """Symmetric matrix with i.i.d. SplitMix64 uniform upper triangle in [-scale, scale)."""
    rng = SplitMix64(derive_seed(seed, "random_symmetric"))
    r, c = np.triu_indices(n)
    A = np.zeros((n, n))
    vals = scale * rng.uniform_pm1(r.size)
    A[r, c] = vals
    A[c, r] = vals
    return from_dense(A, meta={"family": "general_random", "n": n, "seed": seed, "scale": scale})


def gen_planted_negative(n: int, eps: float, seed: int | None = None) -> EntryOracle:
    """Identity with a k x k principal block replaced by I_k - J_k.

    k = ceil(2 eps n), so lambda_min = 1 - k <= -eps n. With ``seed`` the
    block's index set is a SplitMix64-chosen subset instead of the leading
    indices. If eps n < 1 no block is planted (identity, ``meta["plantable"]``
    is False).
    """
    if not 0.0 < eps < 1.0:
        raise BadSizes("eps must lie in (0, 1)")
    A = np.eye(n)
    plantable = eps * n >= 1.0
    k = min(n, math.ceil(2.0 * eps * n)) if plantable else 0
    if seed is None:
        idx = np.arange(k)
    else:
        idx = np.sort(SplitMix64(derive_seed(seed, "planted_negative")).permutation(n)[:k])
    if k:
        A[np.ix_(idx, idx)] = np.eye(k) - np.ones((k, k))
    meta = {"family": "planted_negative", "n": n, "eps": eps, "seed": seed, "k": k,
            "plantable": plantable, "lambda_min": (1.0 - k) if k else 1.0}
    return from_dense(A, meta=meta)


def gen_spiked(n: int, seed: int, strengths: Sequence[float] = (0.5,), noise: float = 0.05) -> EntryOracle:
    """sum_i strengths[i] u_i u_i^T + symmetric uniform noise, clipped to [-1, 1].

    The u_i are SplitMix64 sign vectors. Used for promise instances with a
    dominant top singular value and planted gaps.
    """
    rng = SplitMix64(derive_seed(seed, "spiked"))
    A = np.zeros((n, n))
    for s in strengths:
        u = np.where(rng.uniform(n) < 0.5, -1.0, 1.0)
        A += float(s) * np.outer(u, u)
    r, c = np.triu_indices(n)
    vals = noise * rng.uniform_pm1(r.size)
    N = np.zeros((n, n))
    N[r, c] = vals
    N[c, r] = vals
    A = np.clip(A + N, -1.0, 1.0)
    return from_dense(A, meta={"family": "spiked", "n": n, "seed": seed,
                               "strengths": list(strengths), "noise": noise})


def gen_random_signed_blocks(n: int, seed: int, max_blocks: int = 6, fill: float = 0.9):
    """Signed-block instance with a seeded number of blocks, sizes, signs and placement.

    About ``fill * n`` indices are covered; the rest have zero rows.
    """
    rng = SplitMix64(derive_seed(seed, "signed_blocks"))
    p = min(n, 1 + int(rng.uniform(1)[0] * max_blocks))
    weights = 0.2 + rng.uniform(p)
    covered = max(p, int(fill * n))
    sizes = np.maximum(1, np.floor(weights / weights.sum() * covered)).astype(int)
    while sizes.sum() > n:
        sizes[np.argmax(sizes)] -= 1
    splits = []
    for s in sizes.tolist():
        neg = rng.uniform(s) < 0.5
        splits.append({"+": set(np.flatnonzero(~neg).tolist()), "-": set(np.flatnonzero(neg).tolist())})
    perm = rng.permutation(n)
    return gen_signed_blocks(sizes.tolist(), splits, n=n, perm=perm)


def hermitian_dilation(A: EntryOracle) -> EntryOracle:
    """The 2n x 2n symmetric oracle [[0, A], [A^T, 0]].

    Reads of the off-diagonal blocks are forwarded to (and counted by) ``A``;
    the zero diagonal blocks cost nothing.
    """
    n = A.n

    def fetch(rows, cols):
        out = np.zeros(rows.size)
        upper = (rows < n) & (cols >= n)
        lower = (rows >= n) & (cols < n)
        if upper.any():
            out[upper] = A.entries(rows[upper], cols[upper] - n)
        if lower.any():
            out[lower] = A.entries(cols[lower], rows[lower] - n)
        return out

    def peek():
        D = np.zeros((2 * n, 2 * n))
        M = A.peek_dense()
        D[:n, n:] = M
        D[n:, :n] = M.T
        return D

    return EntryOracle(2 * n, fetch, symmetric=True, bounded=A.bounded,
                       meta={"family": "dilation", "base": A.meta, "n_base": n}, _peek=peek)
