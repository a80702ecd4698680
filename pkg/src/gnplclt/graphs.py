"""G(n,p) sampling, exact triangle counting and closed-form moments."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, rng
from .errors import DegenerateDistributionError, InvalidParameterError

SPARSE_P = 0.05  # below this, edges are placed by geometric skipping


@dataclass(frozen=True)
class GnpSample:
    """One sampled graph: bitset adjacency plus the stream that produced it."""

    n: int
    p: float
    seed: int
    stream_id: int
    rows: np.ndarray  # shape (n, ceil(n/64)) uint64, symmetric, zero diagonal

    def has_edge(self, u: int, v: int) -> bool:
        return bool((int(self.rows[u, v >> 6]) >> (v & 63)) & 1)

    def to_dense(self) -> np.ndarray:
        """Boolean adjacency matrix (test/support path)."""
        nw = self.rows.shape[1]
        bits = np.unpackbits(
            self.rows.view(np.uint8).reshape(self.n, 8 * nw), axis=1, bitorder="little"
        )
        return bits[:, : self.n].astype(bool)

    def edge_count(self) -> int:
        return int(np.unpackbits(self.rows.view(np.uint8)).sum()) // 2


@dataclass(frozen=True)
class Moments:
    n: int
    p: float
    mu: float
    sigma2: float
    sigma: float


@dataclass(frozen=True)
class LatticePoint:
    k: int
    x: float


def _rows_from_pairs(n: int, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    nw = (n + 63) // 64
    rows = np.zeros((n, nw), dtype=np.uint64)
    one = np.uint64(1)
    for u, v in zip(us.tolist(), vs.tolist()):
        rows[u, v >> 6] |= one << np.uint64(v & 63)
        rows[v, u >> 6] |= one << np.uint64(u & 63)
    return rows


def _pairs_from_indices(idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # linear index over pairs u < v, ordered by v then u
    v = ((1.0 + np.sqrt(1.0 + 8.0 * idx.astype(np.float64))) / 2.0).astype(np.int64)
    v -= v * (v - 1) // 2 > idx
    v += (v + 1) * v // 2 <= idx
    u = idx - v * (v - 1) // 2
    return u, v


def sample_gnp(n: int, p: float, seed: int, stream_id: int = 0) -> GnpSample:
    """Sample G(n,p) deterministically on the stream (seed, stream_id).

    Each unordered pair is present independently with probability p. The
    same (n, p, seed, stream_id) always reproduces the same bit pattern.
    """
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must be in [0, 1], got {p}")
    gen = rng.generator(seed, stream_id)
    npairs = n * (n - 1) // 2
    if p == 0.0 or npairs == 0:
        idx = np.empty(0, dtype=np.int64)
    elif p == 1.0:
        idx = np.arange(npairs, dtype=np.int64)
    elif p < SPARSE_P:
        # geometric skipping over the flattened pair indices
        hits = []
        pos = -1
        # E[draws] = npairs * p; draw in chunks to stay vectorised
        while True:
            chunk = gen.geometric(p, size=max(16, int(npairs * p * 1.5) + 16))
            for g in chunk.tolist():
                pos += g
                if pos >= npairs:
                    break
                hits.append(pos)
            if pos >= npairs:
                break
        idx = np.asarray(hits, dtype=np.int64)
    else:
        u32 = gen.integers(0, 1 << 32, size=npairs, dtype=np.uint64)
        idx = np.nonzero(u32 < round(p * (1 << 32)))[0].astype(np.int64)
    us, vs = _pairs_from_indices(idx)
    rows = _rows_from_pairs(n, us, vs)
    return GnpSample(n=n, p=float(p), seed=int(seed), stream_id=int(stream_id), rows=rows)


def count_triangles(g: GnpSample) -> int:
    """Triangle count via bitset row intersection (the production path)."""
    return int(kernels.count_triangles_bitset(g.rows, g.n))


def count_triangles_naive(g: GnpSample) -> int:
    """O(n^3) triple loop over the dense adjacency; oracle for the bitset path."""
    a = g.to_dense()
    n = g.n
    t = 0
    for u in range(n):
        for v in range(u + 1, n):
            if a[u, v]:
                for w in range(v + 1, n):
                    if a[u, w] and a[v, w]:
                        t += 1
    return t


def moments(n: int, p: float) -> Moments:
    """Exact mean and variance of the triangle count.

    mu = C(n,3) p^3 and
    sigma^2 = C(n,3)(p^3 - p^6) + 2 C(n,2) C(n-2,2)(p^5 - p^6),
    the edge-overlap decomposition (pairs of triangles sharing one edge).
    Validated against the exhaustive oracle for n <= 6 in the test suite.
    """
    if n < 3:
        raise InvalidParameterError(f"n must be >= 3, got {n}")
    if not 0.0 < p < 1.0:
        raise InvalidParameterError(f"p must be in (0, 1), got {p}")
    c3 = math.comb(n, 3)
    mu = c3 * p**3
    sigma2 = c3 * (p**3 - p**6) + 2.0 * math.comb(n, 2) * math.comb(n - 2, 2) * (
        p**5 - p**6
    )
    return Moments(n=n, p=float(p), mu=mu, sigma2=sigma2, sigma=math.sqrt(sigma2))


def standardize(k: int, m: Moments) -> LatticePoint:
    """Map a raw count onto the lattice point x = (k - mu) / sigma."""
    if m.sigma <= 0.0:
        raise DegenerateDistributionError("sigma must be positive")
    return LatticePoint(k=int(k), x=(k - m.mu) / m.sigma)


def unstandardize(x: float, m: Moments) -> int:
    """Inverse of standardize: recover the integer count by rounding."""
    return int(round(x * m.sigma + m.mu))


def triangle_count_samples(
    n: int,
    p: float,
    seed: int,
    samples: int,
    workers: int = 1,
    base_stream: int = 0,
    min_blocks: int = 1,
) -> np.ndarray:
    """Triangle counts of `samples` independent G(n,p) graphs.

    Work is split into fixed blocks; block i draws from stream
    base_stream + i, so the output is identical for any worker count.
    """
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must be in [0, 1], got {p}")
    if samples < 1:
        raise InvalidParameterError("samples must be >= 1")
    k0, k1 = kernels.philox_key(seed)
    thresh = np.uint64(round(p * (1 << 32)))
    sizes = rng.split_blocks(samples, min_blocks=min_blocks)

    def job(i, b):
        out = np.empty(b, dtype=np.int64)
        kernels.triangle_count_block(
            n, thresh, p, k0, k1, np.uint64(base_stream + i), b, out
        )
        return out

    return np.concatenate(rng.run_blocks(job, sizes, workers=workers))
