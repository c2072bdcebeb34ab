"""Command-line interface: ``specsparse <command> ...``.

Every command prints one JSON report (sorted keys) to stdout, and also writes
it to ``--report`` when given. Exit codes: 0 success, 1 computation error
(JSON error record on stderr), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import bench as bench_mod
from . import binary_psd, expander, kernels, krylov, matview, mmio, psd_test, reference, sparsifier
from .eigensolve import approx_all_singvals
from .errors import AsymmetricInput, SpecSparseError
from .kernels import BACKEND


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text):
    return [float(t) for t in text.split(",") if t]


def _ints(text):
    return [int(t) for t in text.split(",") if t]


def _common(p):
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for dense products (default: $SPECSPARSE_THREADS or 1)")
    p.add_argument("--report", default=None, help="also write the JSON report here")
    p.add_argument("--human", action="store_true", help="print a summary table to stderr")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="specsparse", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expander", help="build or certify circulant expanders")
    esub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = esub.add_parser("build")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--eps", type=float, required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--mode", choices=["target", "certified", "seeded"], default="target",
                   help="target: eps_hat <= eps; certified/seeded: (eps n)-expander")
    b.add_argument("--out", default=None, help="write graph JSON {n, shifts}")
    _common(b)
    c = esub.add_parser("certify")
    c.add_argument("--graph", required=True)
    _common(c)

    p = sub.add_parser("sparsify", help="A o S on a certified pattern")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--class", dest="cls", choices=sparsifier.MATRIX_CLASSES, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--certify", action="store_true", help="compute the exact error densely")
    _common(p)

    p = sub.add_parser("singvals", help="all singular values from a sparsified copy")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="alias of --report")
    p.add_argument("--vectors", default=None, help="write the top vectors as a dense .mtx")
    p.add_argument("--nuclear-bound", type=float, default=None)
    p.add_argument("--certify", action="store_true")
    _common(p)

    p = sub.add_parser("psdtest", help="PSD versus far-from-PSD")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    _common(p)

    p = sub.add_parser("binarypsd", help="approximate a PSD {-1,0,1} matrix")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["seeded", "certified"], default="seeded")
    p.add_argument("--out", default=None)
    p.add_argument("--certify", action="store_true")
    _common(p)

    p = sub.add_parser("specnorm", help="high-accuracy spectral norm under a promise")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--certify", action="store_true")
    _common(p)

    p = sub.add_parser("certify", help="exact error between two matrices")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    _common(p)

    p = sub.add_parser("bench", help="queries-versus-accuracy sweep (CSV)")
    p.add_argument("--family", choices=bench_mod.FAMILIES, required=True)
    p.add_argument("--n", type=_ints, required=True, help="comma-separated sizes")
    p.add_argument("--eps", type=_floats, required=True, help="comma-separated accuracies")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("gen", help="write a generated instance as Matrix Market")
    p.add_argument("--family", required=True,
                   choices=["all_ones", "identity", "psd_random", "general_random",
                            "planted_negative", "signed_blocks", "spiked"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=0.1, help="planted_negative only")
    p.add_argument("--out", required=True)
    return ap


def _dense(M):
    return M.to_dense() if isinstance(M, matview.SparseSymMatrix) else np.asarray(M)


def _load(path):
    return mmio.load_oracle(path, bounded=True)


def _cmd_expander(a):
    if a.action == "build":
        if a.mode == "target":
            G, cert = expander.build_for_epsilon(a.n, a.eps, a.seed)
        else:
            G, cert = expander.build_epsn_expander(a.n, a.eps, a.mode, a.seed)
        if a.out:
            with open(a.out, "w") as fh:
                json.dump(G.to_json(), fh)
        cert = cert or expander.certify(G)
        return {"n": G.n, "eps": a.eps, "seed": a.seed, "mode": a.mode, "degree": G.degree,
                "shifts": list(G.shifts), "eps_hat": cert.eps_hat,
                "ramanujan_eps": cert.ramanujan_eps,
                "lower_bound": expander.lower_bound_witness(cert)}
    with open(a.graph) as fh:
        G = expander.CirculantExpander.from_json(json.load(fh))
    cert = expander.certify(G)
    return {"n": G.n, "d": cert.d, "eps_hat": cert.eps_hat, "ramanujan_eps": cert.ramanujan_eps,
            "spectral_gap_norm": cert.spectral_gap_norm,
            "lower_bound": expander.lower_bound_witness(cert)}


def _cmd_sparsify(a):
    A = _load(a.inp)
    dilated = not A.symmetric
    base = A
    if dilated:
        A = matview.hermitian_dilation(A)
    pl = sparsifier.plan(a.cls, a.eps, A.n, a.seed)
    At = sparsifier.sparsify(A, pl)
    if a.out:
        mmio.write_matrix_market(a.out, At)
    rep = {"n": base.n, "class": a.cls, "eps": a.eps, "seed": a.seed, "dilated": dilated,
           "eps_hat": pl.certificate.eps_hat, "eps_prime": pl.eps_prime,
           "degree": pl.graph.degree, "certified": pl.certified,
           "queries": base.query_counter, "queries_ordered": base.query_count_ordered,
           "certified_bound": pl.certified_bound()}
    if a.certify:
        D = A.peek_dense()
        rep["achieved_error"] = sparsifier.certify_error(D, At)
        if a.cls == "general":
            nuc = reference.nuclear_norm(D)
            rep["nuclear_norm"] = nuc
            rep["certified_bound"] = pl.certified_bound(nuc)
    return rep


def _require_symmetric(A):
    if not A.symmetric:
        raise AsymmetricInput("input must be symmetric for this command")


def _cmd_singvals(a):
    A = _load(a.inp)
    _require_symmetric(A)
    sig, V, rep = approx_all_singvals(A, a.eps, a.seed, nuclear_bound=a.nuclear_bound)
    rep["values"] = [{"index": i, "sigma_tilde": float(s), "certified_radius": rep["error_radius"]}
                     for i, s in enumerate(sig)]
    if a.vectors:
        mmio.write_matrix_market(a.vectors, V)
    if a.certify:
        true = reference.singular_values(A.peek_dense())
        rep["achieved_error"] = float(np.max(np.abs(sig - true)))
    if a.out and not a.report:
        a.report = a.out
    return rep


def _cmd_psdtest(a):
    A = _load(a.inp)
    _require_symmetric(A)
    v = psd_test.psd_test(A, a.eps, a.seed)
    rep = v.to_json()
    rep.update({"n": A.n, "eps": a.eps, "seed": a.seed})
    return rep


def _cmd_binarypsd(a):
    A = _load(a.inp)
    _require_symmetric(A)
    rec = binary_psd.binary_psd_approx(A, a.eps, a.seed, a.mode)
    if a.out:
        mmio.write_matrix_market(a.out, rec.Atilde)
    rep = rec.to_json()
    rep.update({"eps": a.eps, "seed": a.seed, "mode": a.mode,
                "query_budget": binary_psd.query_budget(rec.graph, a.eps),
                "certified_bound": a.eps * A.n})
    if a.certify:
        D = A.peek_dense()
        rep["achieved_error"] = reference.spectral_norm(D - rec.Atilde.to_dense())
        if a.mode == "certified":
            rep["component_bounds"] = binary_psd.component_size_bound_check(D, rec.graph, a.eps)
    return rep


def _cmd_specnorm(a):
    A = _load(a.inp)
    _require_symmetric(A)
    _, sigma, rep = krylov.high_accuracy_specnorm(A, a.alpha, a.eps, a.seed)
    rep.pop("vectors")
    rep["queries"] = rep["queries_total"]
    if a.certify:
        s1 = reference.spectral_norm(A.peek_dense())
        rep["sigma_1"] = s1
        rep["relative_error"] = (s1 - sigma) / s1 if s1 else 0.0
    return rep


def _cmd_certify(a):
    A = _dense(mmio.read_matrix_market(a.a))
    B = _dense(mmio.read_matrix_market(a.b))
    w = reference.weyl_check(A, B)
    return {"spectral_err": w["spectral_err"], "weyl_margin": w["weyl_margin"],
            "max_sv_diff": w["max_sv_diff"], "weyl_holds": w["holds"],
            "nuclear_a": reference.nuclear_norm(A)}


def _cmd_gen(a):
    fam = a.family
    if fam == "all_ones":
        A = matview.gen_all_ones(a.n)
    elif fam == "identity":
        A = matview.gen_identity(a.n)
    elif fam == "psd_random":
        A = matview.gen_random_psd_bounded(a.n, a.seed)
    elif fam == "general_random":
        A = matview.gen_random_symmetric_bounded(a.n, a.seed)
    elif fam == "planted_negative":
        A = matview.gen_planted_negative(a.n, a.eps, a.seed)
    elif fam == "signed_blocks":
        A = matview.gen_random_signed_blocks(a.n, a.seed)
    else:
        A = matview.gen_spiked(a.n, a.seed)
    D = A.peek_dense()
    r, c = np.triu_indices(a.n)
    keep = D[r, c] != 0.0
    S = matview.SparseSymMatrix.from_triplets(a.n, r[keep], c[keep], D[r, c][keep])
    mmio.write_matrix_market(a.out, S)
    return {"family": fam, "n": a.n, "seed": a.seed, "out": a.out, "nnz": S.nnz}


_COMMANDS = {"expander": _cmd_expander, "sparsify": _cmd_sparsify, "singvals": _cmd_singvals,
             "psdtest": _cmd_psdtest, "binarypsd": _cmd_binarypsd, "specnorm": _cmd_specnorm,
             "certify": _cmd_certify, "gen": _cmd_gen}


def _set_threads(threads):
    if threads is None:
        env = os.environ.get("SPECSPARSE_THREADS")
        threads = int(env) if env else None
    if threads is not None:
        kernels.set_threads(threads)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _human(rep):
    width = max((len(k) for k in rep), default=0)
    for k in sorted(rep):
        v = rep[k]
        if isinstance(v, (list, dict)):
            v = f"<{type(v).__name__} of {len(v)}>"
        print(f"{k:<{width}}  {v}", file=sys.stderr)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"specsparse: usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    _set_threads(getattr(args, "threads", None))
    t0 = time.perf_counter()
    try:
        if args.command == "bench":
            rows = bench_mod.bench(args.family, args.n, args.eps, args.seed)
            text = bench_mod.to_csv(rows)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return 0
        rep = _COMMANDS[args.command](args)
    except (SpecSparseError, OSError, ValueError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1
    rep["command"] = args.command if args.command != "expander" else f"expander {args.action}"
    rep["kernel_backend"] = BACKEND
    rep["wall_time_ms"] = round(1000.0 * (time.perf_counter() - t0), 3)
    text = json.dumps(rep, sort_keys=True, default=_json_default)
    if getattr(args, "report", None):
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    print(text)
    if getattr(args, "human", False):
        _human(rep)
    return 0


if __name__ == "__main__":
    sys.exit(main())
