"""Exhaustive enumeration of labeled graphs on few vertices.

Iterating every edge subset of K_n (2^C(n,2) bitmasks) yields the exact
joint distribution of (triangle count, edge count), from which the exact
pmf, moments and characteristic function of the triangle count follow for
any p. This is the oracle every Monte Carlo path is tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidParameterError, ResourceLimitError

DEFAULT_MAX_N = 7  # 2^21 masks; seconds of work


@dataclass(frozen=True)
class TriangleEdgeTable:
    """c[k, m] = number of labeled n-vertex graphs with k triangles, m edges."""

    n: int
    max_edges: int
    max_triangles: int
    c: np.ndarray  # shape (max_triangles + 1, max_edges + 1), uint64

    def validate(self) -> None:
        """Check the three structural invariants; raise ValueError on failure."""
        total = int(self.c.sum(dtype=object))
        if total != 1 << self.max_edges:
            raise ValueError(
                f"table mass {total} != 2^{self.max_edges} for n={self.n}"
            )
        if self.c[1:, :3].any():
            raise ValueError("positive triangle count with fewer than 3 edges")
        if int(self.c[self.max_triangles, self.max_edges]) != 1:
            raise ValueError("complete-graph cell is not 1")


def _triple_masks(n: int) -> np.ndarray:
    """One C(n,2)-bit mask per vertex triple, marking its three edges.

    Pair bit order matches the linear index used everywhere else: pair
    (u, v) with u < v sits at bit v(v-1)/2 + u.
    """
    masks = []
    for w in range(n):
        for v in range(w):
            for u in range(v):
                bits = (
                    (1 << (v * (v - 1) // 2 + u))
                    | (1 << (w * (w - 1) // 2 + u))
                    | (1 << (w * (w - 1) // 2 + v))
                )
                masks.append(bits)
    return np.asarray(masks, dtype=np.uint64)


def build_table(n: int, max_n: int = DEFAULT_MAX_N) -> TriangleEdgeTable:
    """Enumerate all 2^C(n,2) graphs on n labeled vertices.

    max_n is a resource ceiling, not a correctness bound; raising it costs
    a factor 2^(n-1) per extra vertex pair.
    """
    if n < 3:
        raise InvalidParameterError(f"n must be >= 3, got {n}")
    if n > max_n:
        raise ResourceLimitError(
            f"n={n} exceeds the enumeration ceiling {max_n}"
        )
    max_edges = math.comb(n, 2)
    max_triangles = math.comb(n, 3)
    table = np.zeros((max_triangles + 1, max_edges + 1), dtype=np.uint64)
    kernels.enumerate_masks(n, _triple_masks(n), table)
    out = TriangleEdgeTable(
        n=n, max_edges=max_edges, max_triangles=max_triangles, c=table
    )
    out.validate()
    return out


def exact_pmf(t: TriangleEdgeTable, p: float) -> dict[int, float]:
    """P(X = k) = sum_m c[k, m] p^m (1-p)^(C(n,2)-m), for every k."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    me = t.max_edges
    # edge-count weights; exact at the endpoints
    w = np.array([p**m * (1.0 - p) ** (me - m) for m in range(me + 1)])
    mass = t.c.astype(np.float64) @ w
    return {k: float(mass[k]) for k in range(t.max_triangles + 1)}


def exact_moments(t: TriangleEdgeTable, p: float) -> tuple[float, float]:
    """Exact (mean, variance) of the triangle count at this p."""
    pmf = exact_pmf(t, p)
    mu = sum(k * q for k, q in pmf.items())
    var = sum((k - mu) ** 2 * q for k, q in pmf.items())
    return mu, var


def exact_charfn(t: TriangleEdgeTable, p: float, theta: float) -> complex:
    """E e^(i theta X) = sum_k P(X=k) e^(i theta k); 2pi-periodic in theta."""
    pmf = exact_pmf(t, p)
    ks = np.fromiter(pmf.keys(), dtype=np.float64)
    qs = np.fromiter(pmf.values(), dtype=np.float64)
    return complex(np.sum(qs * np.exp(1j * theta * ks)))


def save_table(t: TriangleEdgeTable, path) -> None:
    """Write the table as CSV: a `# n= edges=` comment, header, nonzero cells.

    Counts are written in decimal, so the round trip is bit-exact.
    """
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"# n={t.n} edges={t.max_edges}\n")
        fh.write("k,m,count\n")
        for k in range(t.max_triangles + 1):
            for m in range(t.max_edges + 1):
                if t.c[k, m]:
                    fh.write(f"{k},{m},{int(t.c[k, m])}\n")


def load_table(path) -> TriangleEdgeTable:
    """Read a table written by save_table and validate it."""
    with open(path, "r", encoding="ascii") as fh:
        head = fh.readline().strip()
        if not head.startswith("# n="):
            raise ValueError(f"bad cache header: {head!r}")
        fields = dict(kv.split("=") for kv in head[2:].split())
        n = int(fields["n"])
        max_edges = int(fields["edges"])
        if max_edges != math.comb(n, 2):
            raise ValueError("edge count in header does not match n")
        header = fh.readline().strip()
        if header != "k,m,count":
            raise ValueError(f"bad column header: {header!r}")
        max_triangles = math.comb(n, 3)
        c = np.zeros((max_triangles + 1, max_edges + 1), dtype=np.uint64)
        for line in fh:
            line = line.strip()
            if not line:
                continue
            k_s, m_s, cnt_s = line.split(",")
            c[int(k_s), int(m_s)] = np.uint64(int(cnt_s))
    out = TriangleEdgeTable(
        n=n, max_edges=max_edges, max_triangles=max_triangles, c=c
    )
    out.validate()
    return out
