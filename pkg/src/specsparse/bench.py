"""Queries-versus-accuracy sweeps over instance families."""
from __future__ import annotations

import csv
import io

from . import binary_psd, matview, reference, sparsifier

FAMILIES = ("psd_random", "general_random", "binary_blocks", "all_ones")
COLUMNS = ("family", "n", "eps", "degree", "queries", "achieved_error", "bound")


def _row(family, n, eps, seed):
    if family in ("psd_random", "all_ones"):
        A = matview.gen_random_psd_bounded(n, seed) if family == "psd_random" else matview.gen_all_ones(n)
        pl = sparsifier.plan("psd", eps, n, seed)
        At = sparsifier.sparsify(A, pl)
        err = sparsifier.certify_error(A.peek_dense(), At)
        return pl.graph.degree, A.query_counter, err, pl.certified_bound()
    if family == "general_random":
        A = matview.gen_random_symmetric_bounded(n, seed)
        pl = sparsifier.plan("general", eps, n, seed)
        At = sparsifier.sparsify(A, pl)
        D = A.peek_dense()
        err = sparsifier.certify_error(D, At)
        return pl.graph.degree, A.query_counter, err, pl.certified_bound(reference.nuclear_norm(D))
    if family == "binary_blocks":
        A = matview.gen_random_signed_blocks(n, seed)
        rec = binary_psd.binary_psd_approx(A, eps, seed)
        err = reference.spectral_norm(A.peek_dense() - rec.Atilde.to_dense())
        return rec.graph.degree, rec.queries, err, eps * n
    raise ValueError(f"family must be one of {FAMILIES}")


def bench(family: str, n_list, eps_list, seed: int = 0) -> list[dict]:
    rows = []
    for n in n_list:
        for eps in eps_list:
            d, q, err, bound = _row(family, int(n), float(eps), seed)
            rows.append({"family": family, "n": int(n), "eps": float(eps), "degree": int(d),
                         "queries": int(q), "achieved_error": float(err), "bound": float(bound)})
    return rows


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()
