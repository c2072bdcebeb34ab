"""Matrix Market reader/writer (real coordinate and array formats).

Values are written with 17 significant digits, so every double survives a
round trip unchanged.
"""
from __future__ import annotations

import numpy as np

from .errors import ParseError
from .matview import EntryOracle, SparseSymMatrix, from_dense

_FMT = "%.17g"


def _header(line: str):
    parts = line.strip().split()
    if len(parts) != 5 or parts[0].lower() != "%%matrixmarket" or parts[1].lower() != "matrix":
        raise ParseError(f"bad Matrix Market header: {line.strip()!r}")
    layout, field, sym = (p.lower() for p in parts[2:])
    if layout not in ("coordinate", "array"):
        raise ParseError(f"unsupported layout {layout!r}")
    if field not in ("real", "integer", "pattern", "double"):
        raise ParseError(f"unsupported field {field!r}")
    if sym not in ("general", "symmetric"):
        raise ParseError(f"unsupported symmetry {sym!r}")
    if field == "pattern" and layout == "array":
        raise ParseError("pattern field requires coordinate layout")
    return layout, field, sym


def read_matrix_market(path):
    """Read a Matrix Market file.

    Returns
    -------
    SparseSymMatrix
        for ``coordinate ... symmetric`` files.
    numpy.ndarray
        (dense) for ``array`` files and ``coordinate ... general`` files.
    """
    try:
        with open(path, "r") as fh:
            lines = fh.read().splitlines()
    except OSError:
        raise
    if not lines:
        raise ParseError("empty file")
    layout, field, sym = _header(lines[0])
    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError("missing size line")
    try:
        size = [int(t) for t in body[0].split()]
    except ValueError:
        raise ParseError(f"bad size line {body[0]!r}") from None
    data = body[1:]

    if layout == "array":
        if len(size) != 2:
            raise ParseError("array size line needs 2 integers")
        nr, nc = size
        if sym == "symmetric" and nr != nc:
            raise ParseError("symmetric matrix must be square")
        try:
            vals = np.array([float(ln.split()[0]) for ln in data])
        except (ValueError, IndexError):
            raise ParseError("bad array value") from None
        M = np.zeros((nr, nc))
        if sym == "general":
            if vals.size != nr * nc:
                raise ParseError(f"expected {nr * nc} values, got {vals.size}")
            M[:] = vals.reshape(nc, nr).T  # column-major
        else:
            r, c = np.triu_indices(nr)  # lower triangle, column-major == upper, row-major
            if vals.size != r.size:
                raise ParseError(f"expected {r.size} values, got {vals.size}")
            M[c, r] = vals
            M[r, c] = vals
        return M

    if len(size) != 3:
        raise ParseError("coordinate size line needs 3 integers")
    nr, nc, nnz = size
    if len(data) != nnz:
        raise ParseError(f"expected {nnz} entries, got {len(data)}")
    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.ones(nnz)
    for t, ln in enumerate(data):
        tok = ln.split()
        try:
            rows[t] = int(tok[0]) - 1
            cols[t] = int(tok[1]) - 1
            if field != "pattern":
                vals[t] = float(tok[2])
        except (ValueError, IndexError):
            raise ParseError(f"bad entry line {ln!r}") from None
    if nnz and (rows.min() < 0 or cols.min() < 0 or rows.max() >= nr or cols.max() >= nc):
        raise ParseError("entry index out of range")
    if sym == "symmetric":
        if nr != nc:
            raise ParseError("symmetric matrix must be square")
        key = np.minimum(rows, cols) * nr + np.maximum(rows, cols)
    else:
        key = rows * nc + cols
    if np.unique(key).size != key.size:
        raise ParseError("duplicate coordinate entry")
    if sym == "symmetric":
        return SparseSymMatrix.from_triplets(nr, rows, cols, vals, sum_duplicates=False)
    M = np.zeros((nr, nc))
    M[rows, cols] = vals
    return M


def write_matrix_market(path, M):
    """Write a SparseSymMatrix (coordinate symmetric) or dense array (array general)."""
    with open(path, "w") as fh:
        if isinstance(M, SparseSymMatrix):
            fh.write("%%MatrixMarket matrix coordinate real symmetric\n")
            fh.write(f"{M.n} {M.n} {M.rows.size}\n")
            # lower triangle, sorted by column then row
            order = np.lexsort((M.cols, M.rows))
            for r, c, v in zip(M.cols[order], M.rows[order], M.vals[order]):
                fh.write(f"{r + 1} {c + 1} {_FMT % v}\n")
            return
        A = np.asarray(M, dtype=np.float64)
        if A.ndim == 1:
            A = A[:, None]
        fh.write("%%MatrixMarket matrix array real general\n")
        fh.write(f"{A.shape[0]} {A.shape[1]}\n")
        for v in A.T.ravel():
            fh.write(_FMT % v + "\n")


def load_oracle(path, bounded: bool = True) -> EntryOracle:
    """Read a square Matrix Market file into a counted oracle.

    The symmetric flag is set iff the matrix is exactly symmetric.
    """
    M = read_matrix_market(path)
    D = M.to_dense() if isinstance(M, SparseSymMatrix) else M
    sym = D.shape[0] == D.shape[1] and np.array_equal(D, D.T)
    return from_dense(D, symmetric=sym, bounded=bounded, meta={"source": str(path)})
