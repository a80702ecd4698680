"""Reproducible stream management.

Two consumers share the (seed, stream_id) convention:

* object-level sampling and trial loops use numpy's Philox bit generator
  keyed directly by the pair, via :func:`generator`;
* compiled kernels use the in-package Philox4x32 implementation
  (see kernels.py) keyed by the same pair.

Both are counter-based, so streams never depend on thread scheduling.
Monte Carlo drivers split work into fixed-size blocks and give block i the
stream ``base_stream + i``; results are merged in block order, which makes
outputs byte-identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK_SAMPLES = 65536


def generator(seed: int, stream_id: int) -> np.random.Generator:
    """A numpy Generator on the Philox stream (seed, stream_id)."""
    key = (int(seed) & 0xFFFFFFFFFFFFFFFF, int(stream_id) & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.Philox(key=key))


def split_blocks(total: int, min_blocks: int = 1, block: int = BLOCK_SAMPLES):
    """Deterministic partition of `total` items into near-equal blocks.

    The partition depends only on (total, min_blocks, block), never on the
    worker count.
    """
    nblocks = max(min_blocks, -(-total // block))
    base = total // nblocks
    rem = total % nblocks
    return [base + (1 if i < rem else 0) for i in range(nblocks)]


def run_blocks(fn, block_sizes, workers: int = 1):
    """Apply fn(block_index, block_size) per block; collect in block order."""
    if workers <= 1:
        return [fn(i, b) for i, b in enumerate(block_sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, i, b) for i, b in enumerate(block_sizes)]
        return [f.result() for f in futures]
