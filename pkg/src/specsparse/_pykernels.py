"""Pure-Python (numpy) implementations of the hot kernels.

Same signatures and semantics as the compiled ``_ckernels`` module; used when
the extension is unavailable or when ``SPECSPARSE_PURE=1`` is set.
"""
from __future__ import annotations

import numpy as np


def circulant_eigenvalues(n, shifts):
    n = int(n)
    s = np.asarray(shifts, dtype=np.int64)
    out = np.zeros(n)
    if s.size == 0:
        return out
    antipodal = s[2 * s == n]
    regular = s[2 * s != n]
    # chunk over k to bound the n x |shifts| temporary
    step = max(1, 4_000_000 // max(1, regular.size))
    for lo in range(0, n, step):
        k = np.arange(lo, min(n, lo + step), dtype=np.int64)
        if regular.size:
            r = (k[:, None] * regular[None, :]) % n
            out[lo:lo + k.size] = (2.0 * np.cos(2.0 * np.pi * r / n)).sum(axis=1)
        if antipodal.size:
            out[lo:lo + k.size] += np.where(k % 2 == 0, 1.0, -1.0)
    return out


def jacobi_sweeps(a, schedule, tol, max_sweeps):
    """Cyclic Jacobi on a copy of symmetric ``a`` following ``schedule``.

    ``schedule`` has shape (rounds, pairs, 2); the pairs within a round are
    disjoint, so they are applied together. Returns (diag, V, sweeps, off).
    """
    A = np.array(a, dtype=np.float64, order="C", copy=True)
    n = A.shape[0]
    Vt = np.eye(n)
    fro = np.sqrt(np.sum(A * A))
    sweeps = 0
    off = _offdiag_norm(A)
    while off > tol * fro and sweeps < max_sweeps:
        for rnd in schedule:
            P = rnd[:, 0]
            Q = rnd[:, 1]
            apq = A[P, Q].copy()
            app = A[P, P].copy()
            aqq = A[Q, Q].copy()
            t = _rotation_tangent(app, aqq, apq)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            cp = A[:, P].copy()
            cq = A[:, Q].copy()
            A[:, P] = cp * c - cq * s
            A[:, Q] = cp * s + cq * c
            rp = A[P, :].copy()
            rq = A[Q, :].copy()
            A[P, :] = c[:, None] * rp - s[:, None] * rq
            A[Q, :] = s[:, None] * rp + c[:, None] * rq
            A[P, P] = app - t * apq
            A[Q, Q] = aqq + t * apq
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            vp = Vt[P, :].copy()
            vq = Vt[Q, :].copy()
            Vt[P, :] = c[:, None] * vp - s[:, None] * vq
            Vt[Q, :] = s[:, None] * vp + c[:, None] * vq
        sweeps += 1
        off = _offdiag_norm(A)
    return np.diag(A).copy(), Vt.T.copy(), sweeps, off


def _rotation_tangent(app, aqq, apq):
    t = np.zeros_like(apq)
    act = apq != 0.0
    with np.errstate(over="ignore"):
        theta = (aqq[act] - app[act]) / (2.0 * apq[act])
    big = np.abs(theta) > 1e150
    tt = np.empty_like(theta)
    tt[big] = 0.5 / theta[big]
    th = theta[~big]
    tt[~big] = np.where(th < 0, -1.0, 1.0) / (np.abs(th) + np.sqrt(th * th + 1.0))
    t[act] = tt
    return t


def _offdiag_norm(A):
    # summed directly: ||A||_F^2 - ||diag||^2 cancels catastrophically
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.sqrt(np.sum(off * off)))


def connected_components(n, u, v):
    """Union-find (by size, path compression) over edges (u[e], v[e]).

    Returns labels where labels[i] is the minimum vertex of i's component.
    """
    parent = list(range(n))
    size = [1] * n

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in zip(np.asarray(u).tolist(), np.asarray(v).tolist()):
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if size[ra] < size[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]

    minv = {}
    labels = np.empty(n, dtype=np.int64)
    for i in range(n):
        r = find(i)
        if r not in minv:
            minv[r] = i
        labels[i] = minv[r]
    return labels


def sym_coo_matmat(n, rows, cols, vals, X):
    """Y = S @ X for symmetric S stored as its upper triangle (i <= j)."""
    X = np.asarray(X, dtype=np.float64)
    vec = X.ndim == 1
    X2 = X[:, None] if vec else X
    Y = np.zeros((n, X2.shape[1]))
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    np.add.at(Y, rows, vals[:, None] * X2[cols])
    off = rows != cols
    np.add.at(Y, cols[off], vals[off, None] * X2[rows[off]])
    return Y[:, 0] if vec else Y
