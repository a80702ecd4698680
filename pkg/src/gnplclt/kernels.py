"""Compiled hot loops: counter-based RNG, G(n,p) sampling and triangle counts.

Everything here is deterministic given (seed, stream_id): randomness comes
from a Philox4x32-10 block cipher keyed by a SplitMix64 hash of the seed,
with the 128-bit counter carrying (draw index, stream id). Samples drawn
from distinct streams are independent and reproducible regardless of how
work is scheduled across threads.

Adjacency lives in machine-word bitset rows; triangle counting is
AND + popcount over the tail w > v of each edge uv, so every triangle is
counted exactly once.
"""

import math

import numpy as np
from llvmlite import ir
from numba import int64, njit, uint32, uint64
from numba.extending import intrinsic


@intrinsic
def _popcnt64(typingctx, x):
    sig = uint64(uint64)

    def codegen(context, builder, signature, args):
        fn = builder.module.declare_intrinsic("llvm.ctpop", [ir.IntType(64)])
        return builder.call(fn, args)

    return sig, codegen


@intrinsic
def _cttz64(typingctx, x):
    sig = uint64(uint64)

    def codegen(context, builder, signature, args):
        i64 = ir.IntType(64)
        fnty = ir.FunctionType(i64, [i64, ir.IntType(1)])
        fn = builder.module.declare_intrinsic("llvm.cttz", [i64], fnty)
        return builder.call(fn, [args[0], ir.Constant(ir.IntType(1), 1)])

    return sig, codegen


_PHILOX_M0 = uint64(0xD2511F53)
_PHILOX_M1 = uint64(0xCD9E8D57)
_PHILOX_W0 = uint32(0x9E3779B9)
_PHILOX_W1 = uint32(0xBB67AE85)
_FULL = uint64(0xFFFFFFFFFFFFFFFF)


def philox_key(seed):
    """Fold a 64-bit seed into the two 32-bit Philox key words (SplitMix64)."""
    z = (int(seed) + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z = z ^ (z >> 31)
    return np.uint32(z & 0xFFFFFFFF), np.uint32(z >> 32)


_MASK64 = 0xFFFFFFFFFFFFFFFF


@njit(inline="always", cache=True)
def _philox4(c0, c1, c2, c3, k0, k1):
    # Philox4x32-10: counter (c0..c3), key (k0, k1), ten rounds.
    for _ in range(10):
        p0 = _PHILOX_M0 * uint64(c0)
        p1 = _PHILOX_M1 * uint64(c2)
        n0 = uint32(uint32(p1 >> uint64(32)) ^ c1 ^ k0)
        n1 = uint32(p1)
        n2 = uint32(uint32(p0 >> uint64(32)) ^ c3 ^ k1)
        n3 = uint32(p0)
        c0, c1, c2, c3 = n0, n1, n2, n3
        k0 = uint32(k0 + _PHILOX_W0)
        k1 = uint32(k1 + _PHILOX_W1)
    return c0, c1, c2, c3


@njit(inline="always", cache=True)
def _draw_block(idx, s_lo, s_hi, k0, k1):
    """Four uint32 draws for draw-block `idx` of stream (s_lo, s_hi)."""
    return _philox4(uint32(idx), uint32(idx >> uint64(32)), s_lo, s_hi, k0, k1)


@njit(cache=True)
def philox_uint32(k0, k1, stream, count):
    """Materialise `count` uint32 draws from one stream (test/support path)."""
    out = np.empty(count, dtype=np.uint32)
    s_lo = uint32(stream)
    s_hi = uint32(stream >> uint64(32))
    nblk = (count + 3) // 4
    for b in range(nblk):
        r0, r1, r2, r3 = _draw_block(uint64(b), s_lo, s_hi, k0, k1)
        i = 4 * b
        if i < count:
            out[i] = r0
        if i + 1 < count:
            out[i + 1] = r1
        if i + 2 < count:
            out[i + 2] = r2
        if i + 3 < count:
            out[i + 3] = r3
    return out


@njit(inline="always", cache=True)
def _binom_inv(n_trials, p, u):
    """Exact binomial sampling by pmf inversion outward from the mode.

    Deterministic given the uniform u in [0,1); expected work O(sqrt(n p q)).
    """
    if p <= 0.0:
        return 0
    if p >= 1.0:
        return n_trials
    mode = int(math.floor((n_trials + 1) * p))
    if mode > n_trials:
        mode = n_trials
    logp = math.log(p)
    logq = math.log1p(-p)
    lg = (
        math.lgamma(n_trials + 1.0)
        - math.lgamma(mode + 1.0)
        - math.lgamma(n_trials - mode + 1.0)
        + mode * logp
        + (n_trials - mode) * logq
    )
    pmode = math.exp(lg)
    cum = pmode
    if u < cum:
        return mode
    # two-sided outward sweep, multiplicative pmf updates
    ratio = p / (1.0 - p)
    kl = mode
    kr = mode
    pl = pmode
    pr = pmode
    while kl > 0 or kr < n_trials:
        if kr < n_trials:
            pr = pr * ratio * (n_trials - kr) / (kr + 1.0)
            kr += 1
            cum += pr
            if u < cum:
                return kr
        if kl > 0:
            pl = pl * (1.0 / ratio) * kl / (n_trials - kl + 1.0)
            kl -= 1
            cum += pl
            if u < cum:
                return kl
    return mode


@njit(inline="always", cache=True)
def _pair_from_index(i):
    """Map linear index i to the pair (u, v), u < v, ordered by v then u."""
    v = int((1.0 + math.sqrt(1.0 + 8.0 * i)) * 0.5)
    while v * (v - 1) // 2 > i:
        v -= 1
    while (v + 1) * v // 2 <= i:
        v += 1
    u = i - v * (v - 1) // 2
    return u, v


@njit(inline="always", cache=True)
def _count_above(rows, nw, u, v):
    """Number of common neighbours w > v of the edge u < v."""
    hi = v + 1
    j0 = hi >> 6
    acc = uint64(0)
    if j0 < nw:
        mask = _FULL << uint64(hi & 63)
        acc += _popcnt64(rows[u, j0] & rows[v, j0] & mask)
        for j in range(j0 + 1, nw):
            acc += _popcnt64(rows[u, j] & rows[v, j])
    return acc


_BURST = 16384  # uniform draws prefetched per refill (multiple of 4)


@njit(inline="always", cache=True)
def _refill(buf, blk, s_lo, s_hi, k0, k1):
    nblk = buf.shape[0] // 4
    for b in range(nblk):
        r0, r1, r2, r3 = _draw_block(blk + uint64(b), s_lo, s_hi, k0, k1)
        buf[4 * b] = r0
        buf[4 * b + 1] = r1
        buf[4 * b + 2] = r2
        buf[4 * b + 3] = r3
    return blk + uint64(nblk)


@njit(nogil=True, cache=True)
def triangle_count_block(n, thresh, p, k0, k1, stream, nsamples, out):
    """Sample `nsamples` G(n,p) graphs on one stream; write triangle counts.

    thresh is round(p * 2^32) as uint64. Adjacency is kept upper-triangular
    (row u holds only neighbours w > u), which is all the tail-counting pass
    needs: common neighbours w > v of the edge uv are exactly the set bits
    of rows[u] & rows[v], since rows[v] is empty below v + 1.

    For p > 0.05 every pair is sampled densely into word accumulators; at
    the sparse end a Bin(C(n,2), p) edge count plus uniform distinct-edge
    placement (equivalent to independent edges) skips the non-edges.
    """
    nw = (n + 63) // 64
    npairs = n * (n - 1) // 2
    rows = np.zeros((n, nw), dtype=np.uint64)
    buf = np.empty(_BURST, dtype=np.uint32)
    s_lo = uint32(stream)
    s_hi = uint32(stream >> uint64(32))
    blk = uint64(0)
    pos = _BURST  # force initial refill
    # Lemire rejection threshold for unbiased indices in [0, npairs)
    np64 = uint64(npairs)
    rej = uint64((2**32 - npairs) % npairs) if npairs > 0 else uint64(0)
    use_subset = p <= 0.05 and npairs > 0
    for s in range(nsamples):
        for i in range(n):
            for j in range(nw):
                rows[i, j] = uint64(0)
        t = int64(0)
        if use_subset:
            if pos + 2 > _BURST:
                blk = _refill(buf, blk, s_lo, s_hi, k0, k1)
                pos = 0
            u64 = (uint64(buf[pos]) << uint64(32)) | uint64(buf[pos + 1])
            pos += 2
            uni = u64 * 5.421010862427522e-20  # 2^-64
            m_edges = _binom_inv(npairs, p, uni)
            nedges = 0
            while nedges < m_edges:
                if pos >= _BURST:
                    blk = _refill(buf, blk, s_lo, s_hi, k0, k1)
                    pos = 0
                m64 = uint64(buf[pos]) * np64
                pos += 1
                if uint32(m64) < rej:
                    continue
                pi = int64(m64 >> uint64(32))
                u, v = _pair_from_index(pi)
                bit = uint64(1) << uint64(v & 63)
                if rows[u, v >> 6] & bit:
                    continue
                rows[u, v >> 6] |= bit
                nedges += 1
        else:
            for u in range(n - 1):
                j0 = (u + 1) >> 6
                for j in range(j0, nw):
                    lo = u + 1 if j == j0 else j << 6
                    hi = min(n, (j + 1) << 6)
                    w = uint64(0)
                    for v in range(lo, hi):
                        if pos >= _BURST:
                            blk = _refill(buf, blk, s_lo, s_hi, k0, k1)
                            pos = 0
                        w |= uint64(uint64(buf[pos]) < thresh) << uint64(v & 63)
                        pos += 1
                    rows[u, j] |= w
        # tail-counting pass over the extracted edges
        for u in range(n - 1):
            for j in range((u + 1) >> 6, nw):
                w = rows[u, j]
                while w:
                    v = (j << 6) + int(_cttz64(w))
                    w &= w - uint64(1)
                    acc = uint64(0)
                    for jj in range((v + 1) >> 6, nw):
                        acc += _popcnt64(rows[u, jj] & rows[v, jj])
                    t += int64(acc)
        out[s] = t
    return out


@njit(nogil=True, cache=True)
def count_triangles_bitset(rows, n):
    """Exact triangle count of a bitset adjacency (n rows of 64-bit words)."""
    nw = rows.shape[1]
    t = int64(0)
    for u in range(n):
        for v in range(u + 1, n):
            if (rows[u, v >> 6] >> uint64(v & 63)) & uint64(1):
                t += _count_above(rows, nw, u, v)
    return t


@njit(nogil=True, cache=True)
def enumerate_masks(n, tri_masks, table):
    """Exhaust all edge subsets of K_n; bin counts by (triangles, edges).

    tri_masks: one C(n,2)-bit mask per vertex triple. table is indexed
    [k, m] and incremented in place.
    """
    npairs = n * (n - 1) // 2
    ntri = tri_masks.shape[0]
    total = uint64(1) << uint64(npairs)
    mask = uint64(0)
    while mask < total:
        k = 0
        for t in range(ntri):
            tm = tri_masks[t]
            if mask & tm == tm:
                k += 1
        m = int(_popcnt64(mask))
        table[k, m] += 1
        mask += uint64(1)
    return table
