"""Circulant expander graphs with exactly computed spectral certificates.

A circulant graph on Z_n joins i and i +/- s (mod n) for every shift s. Its
adjacency matrix G is diagonalized by the Fourier basis together with the
all-ones matrix, which gives the exact identity

    || 1 - (n/d) G ||_2 = eps_hat * n,   eps_hat = max_{k != 0} |lambda_k| / d.

That identity is what turns a circulant into a checkable universal sampling
pattern.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BadSizes
from .rng import SplitMix64, derive_seed


@dataclass(frozen=True)
class CirculantExpander:
    """d-regular circulant graph on ``n`` vertices given by its shift set."""

    n: int
    shifts: tuple

    def __post_init__(self):
        sh = tuple(sorted(int(s) for s in self.shifts))
        object.__setattr__(self, "shifts", sh)
        if self.n < 2:
            raise BadSizes("circulant graph needs n >= 2")
        if not sh:
            raise BadSizes("at least one shift required")
        if len(set(sh)) != len(sh) or sh[0] < 1 or sh[-1] > self.n // 2:
            raise BadSizes(f"shifts must be distinct integers in [1, {self.n // 2}]")

    @property
    def antipodal(self) -> bool:
        return self.n % 2 == 0 and self.n // 2 in self.shifts

    @property
    def degree(self) -> int:
        return 2 * len(self.shifts) - (1 if self.antipodal else 0)

    @property
    def num_edges(self) -> int:
        return self.n * self.degree // 2

    @property
    def is_complete(self) -> bool:
        return self.degree == self.n - 1

    def edges(self):
        """Unordered edges (u < v), sorted lexicographically, as two int64 arrays."""
        n = self.n
        us, vs = [], []
        for s in self.shifts:
            i = np.arange(n // 2 if 2 * s == n else n, dtype=np.int64)
            j = (i + s) % n
            us.append(np.minimum(i, j))
            vs.append(np.maximum(i, j))
        u = np.concatenate(us)
        v = np.concatenate(vs)
        key = np.unique(u * n + v)
        return key // n, key % n

    def adjacency(self) -> np.ndarray:
        G = np.zeros((self.n, self.n))
        u, v = self.edges()
        G[u, v] = 1.0
        G[v, u] = 1.0
        return G

    def to_json(self) -> dict:
        return {"n": self.n, "shifts": list(self.shifts)}

    @classmethod
    def from_json(cls, obj) -> "CirculantExpander":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["n"]), tuple(obj["shifts"]))


@dataclass(frozen=True)
class ExpanderCertificate:
    n: int
    d: int
    eps_hat: float
    lambda_list: np.ndarray = field(repr=False, compare=False)

    @property
    def spectral_gap_norm(self) -> float:
        """|| 1 - (n/d) G ||_2, exact for circulants."""
        return self.eps_hat * self.n

    @property
    def ramanujan_eps(self) -> float:
        """eps_hat a Ramanujan graph of the same degree would achieve."""
        return 2.0 * math.sqrt(max(self.d - 1, 0)) / self.d

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "eps_hat": self.eps_hat}


def circulant_spectrum(G: CirculantExpander) -> np.ndarray:
    """All n adjacency eigenvalues lambda_k, k = 0..n-1 (lambda_0 = d)."""
    return kernels.circulant_eigenvalues(G.n, np.asarray(G.shifts, dtype=np.int64))


def certify(G: CirculantExpander) -> ExpanderCertificate:
    lam = circulant_spectrum(G)
    d = G.degree
    eps_hat = float(np.max(np.abs(lam[1:]))) / d if G.n > 1 else 0.0
    return ExpanderCertificate(G.n, d, eps_hat, lam)


def complete_graph(n: int) -> CirculantExpander:
    return CirculantExpander(n, tuple(range(1, n // 2 + 1)))


def shift_order(n: int, seed: int) -> np.ndarray:
    """Deterministic order in which shifts 1..floor(n/2) are added."""
    perm = SplitMix64(derive_seed(seed, "circulant_shifts")).permutation(n // 2)
    return perm + 1


def _next_pow2(x: int) -> int:
    return 1 << max(0, int(x) - 1).bit_length()


def _grow(n, eps, seed, accept):
    """Power-of-two ladder over prefixes of the seeded shift order.

    Starts at ceil(d0/2) shifts with d0 = min(n-1, ceil(4/eps^2)), rounded up to
    a power of two, and doubles until ``accept(eps_hat)`` or the complete graph.
    """
    m = n // 2
    order = shift_order(n, seed)
    d0 = min(n - 1, math.ceil(4.0 / (eps * eps)))
    count = min(m, _next_pow2(math.ceil(d0 / 2)))
    while True:
        G = CirculantExpander(n, tuple(order[:count].tolist()))
        cert = certify(G)
        if accept(cert.eps_hat) or count >= m:
            return G, cert
        count = min(m, 2 * count)


def build_for_epsilon(n: int, eps_target: float, seed: int = 0):
    """Sparsest ladder graph with eps_hat <= eps_target.

    Returns ``(G, cert)``. If no proper circulant meets the target, the complete
    graph is returned; it certifies eps_hat = 1/(n-1), so check
    ``cert.eps_hat <= eps_target`` when eps_target < 1/(n-1).
    """
    if n < 2:
        raise BadSizes("n must be at least 2")
    if not 0.0 < eps_target <= 1.0:
        raise BadSizes("eps_target must lie in (0, 1]")
    return _grow(n, eps_target, seed, lambda e: e <= eps_target)


def build_epsn_expander(n: int, eps: float, mode: str = "seeded", seed: int = 0):
    """Graph meant to be an (eps n)-expander.

    ``certified``: ladder until eps_hat < eps strictly, which by the expander
    mixing lemma joins every pair of disjoint sets of size >= eps n. Returns
    ``(G, cert)``.

    ``seeded``: the first ceil(3 ln(n) / eps) shifts of the seeded order (capped
    at the complete graph), no certificate. Returns ``(G, None)``.
    """
    if not 0.0 < eps < 1.0:
        raise BadSizes("eps must lie in (0, 1)")
    if n < 2:
        raise BadSizes("n must be at least 2")
    if mode == "certified":
        return _grow(n, eps, seed, lambda e: e < eps)
    if mode != "seeded":
        raise ValueError(f"unknown mode {mode!r}")
    count = min(n // 2, math.ceil(3.0 * math.log(n) / eps))
    G = CirculantExpander(n, tuple(shift_order(n, seed)[:count].tolist()))
    return G, None


def lower_bound_witness(cert: ExpanderCertificate) -> dict:
    """Check eps_hat >= 1/(4 sqrt(d)), which must hold whenever n d <= n^2/16."""
    applicable = 16 * cert.d <= cert.n
    bound = 1.0 / (4.0 * math.sqrt(cert.d))
    return {"applicable": applicable, "bound": bound, "eps_hat": cert.eps_hat,
            "holds": (not applicable) or cert.eps_hat >= bound}
