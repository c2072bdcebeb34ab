"""PSD matrices with entries in {-1, 0, 1}.

Such a matrix is, up to a permutation, block diagonal with blocks v v^T for
sign vectors v: A = sum_i v_i v_i^T on disjoint supports. Sampling A on the
edges of an (eps/6 n)-expander and keeping edges with |A_ij| = 1 leaves each
large block connected up to eps/2 n vertices, so one column per large
component recovers the block.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BadSizes, EntryOutOfAlphabet, NotBinaryPsd
from .expander import CirculantExpander, build_epsn_expander
from .matview import EntryOracle, SparseSymMatrix


@dataclass(frozen=True)
class Block:
    support: tuple
    plus: tuple
    minus: tuple

    @property
    def size(self) -> int:
        return len(self.support)

    def vector(self, n: int) -> np.ndarray:
        v = np.zeros(n)
        v[list(self.plus)] = 1.0
        v[list(self.minus)] = -1.0
        return v


@dataclass
class BlockDecomposition:
    n: int
    blocks: list

    @property
    def sizes(self) -> list:
        return [b.size for b in self.blocks]

    def reconstruct(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for b in self.blocks:
            v = b.vector(self.n)
            A += np.outer(v, v)
        return A


@dataclass
class RecoveredApprox:
    Atilde: SparseSymMatrix
    components_used: list
    queries: int
    queries_ordered: int
    graph: CirculantExpander = field(repr=False)
    eps_hat: float | None = None
    component_sizes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"n": self.Atilde.n, "degree": self.graph.degree,
                "edges": self.graph.num_edges, "eps_hat": self.eps_hat,
                "queries": self.queries, "queries_ordered": self.queries_ordered,
                "components_used": [{"size": len(c), "representative": j}
                                    for c, j in self.components_used]}


def _check_alphabet(vals, rows, cols):
    bad = (vals != 0.0) & (vals != 1.0) & (vals != -1.0)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise EntryOutOfAlphabet(f"A[{rows[k]},{cols[k]}] = {vals[k]} not in {{-1, 0, 1}}")


def block_structure(A) -> BlockDecomposition:
    """Signed block decomposition of a PSD matrix with entries in {-1, 0, 1}.

    Raises
    ------
    NotBinaryPsd
        if the matrix is not of that form (asymmetric, wrong alphabet, or an
        inconsistent sign pattern).
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or not np.array_equal(A, A.T):
        raise NotBinaryPsd("matrix must be square and symmetric")
    n = A.shape[0]
    if not np.all((A == 0.0) | (A == 1.0) | (A == -1.0)):
        raise NotBinaryPsd("entries must lie in {-1, 0, 1}")
    d = np.diag(A)
    if np.any(d < 0):
        raise NotBinaryPsd("negative diagonal entry")
    iu, ju = np.nonzero(np.triu(A != 0.0, 1))
    labels = kernels.connected_components(n, iu, ju)
    sign = np.zeros(n)
    blocks = []
    for root in np.unique(labels):
        if d[root] == 0.0:
            continue  # PSD with a zero diagonal entry forces a zero row; checked below
        sign[root] = 1.0
        queue = deque([int(root)])
        while queue:
            x = queue.popleft()
            for y in np.flatnonzero(A[x]):
                if sign[y] == 0.0:
                    sign[y] = sign[x] * A[x, y]
                    queue.append(int(y))
        members = np.flatnonzero(labels == root)
        blocks.append(Block(tuple(members.tolist()),
                            tuple(members[sign[members] > 0].tolist()),
                            tuple(members[sign[members] < 0].tolist())))
    blocks.sort(key=lambda b: (-b.size, b.support[0]))
    dec = BlockDecomposition(n, blocks)
    if not np.array_equal(dec.reconstruct(), A):
        raise NotBinaryPsd("sign pattern is not a sum of disjoint signed rank-one blocks")
    return dec


def binary_psd_approx(A: EntryOracle, eps: float, seed: int = 0, mode: str = "seeded") -> RecoveredApprox:
    """Spectral approximation ||A - Atilde||_2 <= eps n from few entry reads.

    Reads A on the edges of an (eps/6 n)-expander, joins i and j when
    |A_ij| = 1, and for every component larger than eps n / 2 reads the column
    of its minimum vertex j, adding A_j A_j^T to Atilde. Indices with A_ii = 0
    have zero rows, so they never join a component and cost no extra reads.
    """
    if not 0.0 < eps < 1.0:
        raise BadSizes("eps must lie in (0, 1)")
    n = A.n
    q0, o0 = A.query_counter, A.query_count_ordered
    G, cert = build_epsn_expander(n, eps / 6.0, mode, seed)
    u, v = G.edges()
    vals = A.entries(u, v)
    _check_alphabet(vals, u, v)
    keep = np.abs(vals) == 1.0
    labels = kernels.connected_components(n, u[keep], v[keep])
    roots, counts = np.unique(labels, return_counts=True)
    rows, cols, data = [], [], []
    used = []
    for j, c in zip(roots.tolist(), counts.tolist()):
        if c <= eps * n / 2.0:
            continue
        col = A.column(j)
        _check_alphabet(col, np.arange(n), np.full(n, j))
        nz = np.flatnonzero(col)
        r, s = np.meshgrid(nz, nz, indexing="ij")
        up = r <= s
        rows.append(r[up])
        cols.append(s[up])
        data.append((col[nz][:, None] * col[nz][None, :])[up])
        used.append((np.flatnonzero(labels == j).tolist(), j))
    if rows:
        At = SparseSymMatrix.from_triplets(n, np.concatenate(rows), np.concatenate(cols),
                                           np.concatenate(data))
    else:
        At = SparseSymMatrix.zeros(n)
    return RecoveredApprox(At, used, A.query_counter - q0, A.query_count_ordered - o0, G,
                           None if cert is None else cert.eps_hat, sorted(counts.tolist(), reverse=True))


def query_budget(G: CirculantExpander, eps: float) -> float:
    """|E(G)| + (2/eps) n."""
    return G.num_edges + 2.0 / eps * G.n


def component_size_bound_check(A, G: CirculantExpander, eps: float) -> dict:
    """Check lambda_i - eps/2 n < |C_i| <= lambda_i for every true block.

    C_i is the largest component of G restricted to block S_i (inside a block
    every entry has magnitude 1, so this is also the restriction of the
    sampled graph). Blocks with lambda_i <= eps/2 n hold vacuously.
    """
    dec = block_structure(A)
    n = dec.n
    u, v = G.edges()
    rows = []
    for b in dec.blocks:
        lam = b.size
        mask = np.zeros(n, dtype=bool)
        mask[list(b.support)] = True
        e = mask[u] & mask[v]
        labels = kernels.connected_components(n, u[e], v[e])
        largest = int(np.max(np.unique(labels[mask], return_counts=True)[1]))
        vacuous = lam <= eps * n / 2.0
        holds = vacuous or (lam - eps * n / 2.0 < largest <= lam)
        rows.append({"lambda": lam, "largest_component": largest,
                     "lower": lam - eps * n / 2.0, "vacuous": vacuous, "holds": bool(holds)})
    return {"n": n, "eps": eps, "degree": G.degree, "blocks": rows,
            "all_hold": all(r["holds"] for r in rows)}
