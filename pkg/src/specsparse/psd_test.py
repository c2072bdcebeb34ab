"""PSD versus far-from-PSD testing from a sparsified copy.

With Atilde the general-class sparsifier output at accuracy eps/10 and
s1 ~ sigma_1(Atilde), the operator B = I - Atilde/s1 has sigma_1(B) close to 1
when A is PSD, and at least 1 + (2 eps n)/(10 s1) when lambda_min(A) <= -eps n.
The verdict compares a power-method estimate of sigma_1(B) with the midpoint
threshold 1 + 1.5 eps n / (10 s1).
"""
from __future__ import annotations

from dataclasses import dataclass

from . import sparsifier
from .eigensolve import C_PM, ShiftedOp, SparseOp, power_method_top
from .errors import BadSizes
from .matview import EntryOracle

PSD = "PSD"
FAR = "FarFromPSD"
THRESHOLD_COEF = 1.5
DEGENERATE_SCALE = 1e-12


@dataclass
class PsdVerdict:
    verdict: str
    sigma1_Atilde: float
    sigma1_B: float
    threshold: float
    queries: int
    queries_ordered: int = 0
    degenerate_scale: bool = False
    plan: dict | None = None

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "sigma1_Atilde": self.sigma1_Atilde,
                "sigma1_B": self.sigma1_B, "threshold": self.threshold,
                "queries": self.queries, "queries_ordered": self.queries_ordered,
                "degenerate_scale": self.degenerate_scale, "plan": self.plan}


def psd_test(A: EntryOracle, eps: float, seed: int = 0, *, c_gen: float | None = None,
             c_pm: float = C_PM, strategy: str = "auto") -> PsdVerdict:
    """Decide PSD (lambda_min >= 0) versus far (lambda_min <= -eps max(n, ||A||_1)).

    Only the sparsifier's pattern entries are read. If sigma_1(Atilde) is
    numerically zero the matrix is treated as zero: verdict PSD with
    ``degenerate_scale`` set.
    """
    if not 0.0 < eps < 1.0:
        raise BadSizes("eps must lie in (0, 1)")
    n = A.n
    q0, o0 = A.query_counter, A.query_count_ordered
    pl = sparsifier.plan("general", eps / 10.0, n, seed,
                         c_gen=sparsifier.C_GEN if c_gen is None else c_gen)
    At = SparseOp(sparsifier.sparsify(A, pl))
    queries = A.query_counter - q0
    queries_ordered = A.query_count_ordered - o0
    s1 = power_method_top(At, eps / 100.0, c_pm, strategy).sigma_tilde
    if s1 <= DEGENERATE_SCALE:
        return PsdVerdict(PSD, s1, 1.0, float("inf"), queries, queries_ordered, True, pl.to_json())
    B = ShiftedOp(At, 1.0 / s1)
    sB = power_method_top(B, eps / 1000.0, c_pm, strategy).sigma_tilde
    thr = 1.0 + THRESHOLD_COEF * eps * n / (10.0 * s1)
    return PsdVerdict(PSD if sB <= thr else FAR, s1, sB, thr, queries, queries_ordered,
                      False, pl.to_json())
