# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Mirrors ``_pykernels`` exactly in semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sqrt, fabs, M_PI

cnp.import_array()


def circulant_eigenvalues(Py_ssize_t n, shifts):
    cdef cnp.int64_t[::1] sh = np.ascontiguousarray(shifts, dtype=np.int64)
    cdef Py_ssize_t m = sh.shape[0]
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, idx
    cdef cnp.int64_t s, r
    cdef double acc
    for k in range(n):
        acc = 0.0
        for idx in range(m):
            s = sh[idx]
            if 2 * s == n:
                acc += 1.0 if k % 2 == 0 else -1.0
            else:
                r = (k * s) % n
                acc += 2.0 * cos(2.0 * M_PI * r / n)
        out[k] = acc
    return out_arr


cdef inline double _tangent(double app, double aqq, double apq) nogil:
    cdef double theta = (aqq - app) / (2.0 * apq)
    if fabs(theta) > 1e150:
        return 0.5 / theta
    if theta < 0:
        return -1.0 / (-theta + sqrt(theta * theta + 1.0))
    return 1.0 / (theta + sqrt(theta * theta + 1.0))


cdef double _offdiag_norm(double[:, ::1] A) nogil:
    cdef Py_ssize_t n = A.shape[0], i, j
    cdef double acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += A[i, j] * A[i, j]
    return sqrt(acc)


def jacobi_sweeps(a, schedule, double tol, int max_sweeps):
    A_arr = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] A = A_arr
    cdef Py_ssize_t n = A.shape[0]
    Vt_arr = np.eye(n)
    cdef double[:, ::1] Vt = Vt_arr
    cdef cnp.int64_t[:, :, ::1] sched = np.ascontiguousarray(schedule, dtype=np.int64)
    cdef Py_ssize_t rounds = sched.shape[0], npairs = sched.shape[1]
    cdef Py_ssize_t r, e, k, p, q
    cdef double apq, app, aqq, t, c, s, g, h
    cdef double fro = np.sqrt(np.sum(A_arr * A_arr))
    cdef double off = _offdiag_norm(A)
    cdef int sweeps = 0
    with nogil:
        while off > tol * fro and sweeps < max_sweeps:
            for r in range(rounds):
                for e in range(npairs):
                    p = sched[r, e, 0]
                    q = sched[r, e, 1]
                    apq = A[p, q]
                    if apq == 0.0:
                        continue
                    app = A[p, p]
                    aqq = A[q, q]
                    t = _tangent(app, aqq, apq)
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        g = A[k, p]
                        h = A[k, q]
                        A[k, p] = g * c - h * s
                        A[k, q] = g * s + h * c
                    for k in range(n):
                        g = A[p, k]
                        h = A[q, k]
                        A[p, k] = c * g - s * h
                        A[q, k] = s * g + c * h
                    A[p, p] = app - t * apq
                    A[q, q] = aqq + t * apq
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    for k in range(n):
                        g = Vt[p, k]
                        h = Vt[q, k]
                        Vt[p, k] = c * g - s * h
                        Vt[q, k] = s * g + c * h
            sweeps += 1
            off = _offdiag_norm(A)
    return np.diag(A_arr).copy(), Vt_arr.T.copy(), sweeps, off


cdef Py_ssize_t _find(cnp.int64_t[::1] parent, Py_ssize_t x) nogil:
    cdef Py_ssize_t root = x, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def connected_components(Py_ssize_t n, u, v):
    cdef cnp.int64_t[::1] uu = np.ascontiguousarray(u, dtype=np.int64)
    cdef cnp.int64_t[::1] vv = np.ascontiguousarray(v, dtype=np.int64)
    parent_arr = np.arange(n, dtype=np.int64)
    size_arr = np.ones(n, dtype=np.int64)
    minv_arr = np.full(n, -1, dtype=np.int64)
    labels_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] parent = parent_arr
    cdef cnp.int64_t[::1] size = size_arr
    cdef cnp.int64_t[::1] minv = minv_arr
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef Py_ssize_t m = uu.shape[0], e, ra, rb, tmp, i
    with nogil:
        for e in range(m):
            ra = _find(parent, uu[e])
            rb = _find(parent, vv[e])
            if ra == rb:
                continue
            if size[ra] < size[rb]:
                tmp = ra
                ra = rb
                rb = tmp
            parent[rb] = ra
            size[ra] += size[rb]
        for i in range(n):
            ra = _find(parent, i)
            if minv[ra] < 0:
                minv[ra] = i
            labels[i] = minv[ra]
    return labels_arr


def sym_coo_matmat(Py_ssize_t n, rows, cols, vals, X):
    Xa = np.asarray(X, dtype=np.float64)
    vec = Xa.ndim == 1
    X2_arr = np.ascontiguousarray(Xa[:, None] if vec else Xa)
    cdef double[:, ::1] X2 = X2_arr
    cdef Py_ssize_t b = X2.shape[1]
    Y_arr = np.zeros((n, b))
    cdef double[:, ::1] Y = Y_arr
    cdef cnp.int64_t[::1] rr = np.ascontiguousarray(rows, dtype=np.int64)
    cdef cnp.int64_t[::1] cc = np.ascontiguousarray(cols, dtype=np.int64)
    cdef double[::1] vv = np.ascontiguousarray(vals, dtype=np.float64)
    cdef Py_ssize_t m = rr.shape[0], e, k, i, j
    cdef double w
    with nogil:
        for e in range(m):
            i = rr[e]
            j = cc[e]
            w = vv[e]
            for k in range(b):
                Y[i, k] += w * X2[j, k]
            if i != j:
                for k in range(b):
                    Y[j, k] += w * X2[i, k]
    return Y_arr[:, 0].copy() if vec else Y_arr
