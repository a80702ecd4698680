"""The alpha-function decoupling machinery.

Two independent samples G0, G1 of G(n,p) and an m-endowed vertex partition
P1, P2, P3 define, for each cross pair f = uv in A = P1 x P2,

    alpha_f = sum over w in P3 of (x0_uw - x1_uw)(x0_vw - x1_vw),

a signed count of common neighbours of u, v inside P3 within the symmetric
difference of the two samples. Conditioned on the P3-edges, the inner
characteristic function of alpha = sum_f alpha_f x0_f factors into a
product of Bernoulli characteristic functions, which makes the decoupling
inequality |E e^(itX/sigma)|^4 <= E |E e^(it alpha/sigma)| checkable, and
at tiny sizes checkable exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import enumeration, rng
from .errors import DomainError, InvalidParameterError
from .graphs import GnpSample, moments, triangle_count_samples

# typical-set window constants: the symmetric-difference count alpha_f is
# typical when its size is of order sqrt(E alpha_f^2) = 2 p (1-p) sqrt(m)
SIGNED_WINDOW = (0.5, 8.0)  # multiples of sqrt(E alpha_f^2), signed alpha_f
ABS_WINDOW = (0.5, 16.0)  # multiples of sqrt(p^2 m), |alpha_f|
TYPICAL_FRACTION = 1.0 / 2.0**7  # claimed lower bound on |A'| / |A|


@dataclass(frozen=True)
class EndowedPartition:
    """Vertex partition with |P1| = floor((n-m)/2), |P2| = ceil((n-m)/2), |P3| = m."""

    n: int
    m: int
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray

    @property
    def a_size(self) -> int:
        return self.p1.size * self.p2.size

    @property
    def b_size(self) -> int:
        return (self.n - self.m) * self.m


@dataclass(frozen=True)
class AlphaProfile:
    partition: EndowedPartition
    alphas: np.ndarray  # shape (|P1|, |P2|), integers in [-m, m]
    a_prime: np.ndarray  # boolean mask over A, default |alpha_f| window
    expected_alpha_sq: float  # 4 p^2 (1-p)^2 m
    p: float


@dataclass(frozen=True)
class FrequencyReport:
    n: int
    m: int
    p: float
    trials: int
    a_size: int  # |A| = |P1| |P2|
    freq_signed: float  # P(|A'| >= |A|/2^7), signed-window convention
    freq_abs: float  # same, |alpha_f|-window convention
    ratios_signed: np.ndarray  # |A'|/|A| per trial
    ratios_abs: np.ndarray
    expected_alpha_sq: float
    empirical_alpha_sq: float
    threshold: float  # |A|/2^7 scaled to a ratio, i.e. 1/2^7


@dataclass(frozen=True)
class SingleVertexReport:
    n: int
    p: float
    trials: int
    a_size: int  # |A| = |P1| |P2|
    freq: float  # P(|A'| >= (pn)^2 / 2^4), A' = {f : |alpha_f| = 1}
    threshold: float  # (pn)^2 / 2^4
    bound: float  # 1 - exp(-pn / 2^4)
    a_prime_sizes: np.ndarray  # |A'| per trial
    sym_diff_sizes: np.ndarray  # |N_G0(w) delta N_G1(w)| per trial
    sym_diff_mean_expected: float  # (n-1) 2p(1-p)


def make_partition(n: int, m: int, seed: int) -> EndowedPartition:
    """Uniformly random m-endowed partition, deterministic given the seed."""
    if not 1 <= m < n:
        raise InvalidParameterError(f"need 1 <= m < n, got m={m}, n={n}")
    perm = rng.generator(seed, 0).permutation(n)
    s1 = (n - m) // 2
    s2 = (n - m + 1) // 2
    return EndowedPartition(
        n=n,
        m=m,
        p1=np.sort(perm[:s1]),
        p2=np.sort(perm[s1 : s1 + s2]),
        p3=np.sort(perm[s1 + s2 :]),
    )


def _edge_matrix(g: GnpSample, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    dense = g.to_dense()
    return dense[np.ix_(rows, cols)].astype(np.int8)


def compute_alphas(
    g0: GnpSample, g1: GnpSample, part: EndowedPartition
) -> AlphaProfile:
    """alpha_f for every f in A = P1 x P2, from the P3-edges of both samples."""
    if g0.n != g1.n or g0.n != part.n:
        raise InvalidParameterError("mismatched vertex counts")
    if g0.p != g1.p:
        raise InvalidParameterError("mismatched edge probabilities")
    d1 = _edge_matrix(g0, part.p1, part.p3) - _edge_matrix(g1, part.p1, part.p3)
    d2 = _edge_matrix(g0, part.p2, part.p3) - _edge_matrix(g1, part.p2, part.p3)
    alphas = d1.astype(np.int64) @ d2.astype(np.int64).T
    p = g0.p
    e_sq = 4.0 * p * p * (1.0 - p) ** 2 * part.m
    lo, hi = ABS_WINDOW
    root = math.sqrt(p * p * part.m)
    a_prime = (np.abs(alphas) > lo * root) & (np.abs(alphas) < hi * root)
    return AlphaProfile(
        partition=part, alphas=alphas, a_prime=a_prime, expected_alpha_sq=e_sq, p=p
    )


def inner_charfn_product(
    profile: AlphaProfile,
    restrict_to_a_prime: bool,
    p: float,
    t: float,
    sigma: float,
) -> float:
    """|prod over f of (1 - p + p e^(i t alpha_f / sigma))|.

    This is |E e^(it alpha/sigma)| conditioned on the P3-edges, since the
    x0_f for f in A are independent Bernoulli(p). Computed as a log-modulus
    sum so products over tens of thousands of factors cannot underflow.
    """
    if sigma <= 0.0:
        raise InvalidParameterError("sigma must be positive")
    alphas = profile.alphas[profile.a_prime] if restrict_to_a_prime else profile.alphas
    theta = t * alphas.astype(np.float64).ravel() / sigma
    sq = 1.0 - 2.0 * p * (1.0 - p) * (1.0 - np.cos(theta))
    # sq = |1 - p + p e^(i theta)|^2, analytically in [(1-2p)^2, 1]
    sq = np.maximum(sq, 0.0)
    with np.errstate(divide="ignore"):
        return float(np.exp(0.5 * np.log(sq).sum()))


def _sample_diff_matrix(gen: np.random.Generator, shape, p: float) -> np.ndarray:
    """x0 - x1 entries for independent Bernoulli(p) pairs: +-1 w.p. p(1-p)."""
    u = gen.random(shape)
    q = p * (1.0 - p)
    return (u < q).astype(np.float64) - (u >= 1.0 - q)


def verify_decoupling(
    n: int,
    m: int,
    p: float,
    t: float,
    outer_samples: int,
    seed: int,
    lhs_samples: int = 100000,
    workers: int = 1,
) -> tuple[float, float, float]:
    """Monte Carlo check of |E e^(itX/sigma)|^4 <= E |E e^(it alpha/sigma)|.

    Returns (lhs, rhs, margin) with margin = rhs - lhs^4. The left side is
    estimated from independent triangle-count samples, the right side by
    averaging the closed-form inner product over (G0, G1) pairs.
    """
    part = make_partition(n, m, seed)
    mom = moments(n, p)
    counts = triangle_count_samples(n, p, seed + 1, lhs_samples, workers=workers)
    lhs = float(np.abs(np.exp(1j * t * counts / mom.sigma).mean()))
    gen = rng.generator(seed + 2, 0)
    s1, s2 = part.p1.size, part.p2.size
    acc = 0.0
    for _ in range(outer_samples):
        d1 = _sample_diff_matrix(gen, (s1, m), p)
        d2 = _sample_diff_matrix(gen, (s2, m), p)
        alphas = d1 @ d2.T
        theta = t * alphas.ravel() / mom.sigma
        sq = np.maximum(1.0 - 2.0 * p * (1.0 - p) * (1.0 - np.cos(theta)), 0.0)
        with np.errstate(divide="ignore"):
            acc += float(np.exp(0.5 * np.log(sq).sum()))
    rhs = acc / outer_samples
    return lhs, rhs, rhs - lhs**4


def verify_decoupling_exact(
    n: int, m: int, p: float, t_grid, table=None
) -> list[tuple[float, float, float, float]]:
    """Exact check of the decoupling inequality at enumerable sizes.

    Both sides are computed without sampling: the left from the exact
    triangle-count law, the right by enumerating every value of the
    difference matrix x0_B - x1_B (3 outcomes per B-pair, since the inner
    product depends on the P3-edges only through the differences).
    Returns (t, lhs^4, rhs, margin) per grid point.
    """
    nb = (n - m) * m
    if 3 ** nb > 20_000_000:
        raise InvalidParameterError(
            f"exact enumeration needs 3^{nb} outcomes; too large"
        )
    if table is None:
        table = enumeration.build_table(n)
    part = make_partition(n, m, seed=0)
    mom = moments(n, p)
    q = p * (1.0 - p)
    probs = np.array([q, 1.0 - 2.0 * q, q])  # D = -1, 0, +1
    s1, s2 = part.p1.size, part.p2.size
    results = []
    # enumerate D in {-1,0,1}^((n-m) x m) with product weights
    outcomes = list(itertools.product((-1, 0, 1), repeat=nb))
    d_all = np.asarray(outcomes, dtype=np.float64).reshape(len(outcomes), n - m, m)
    w_all = np.prod(probs[np.asarray(outcomes, dtype=np.int64) + 1], axis=1)
    d1 = d_all[:, :s1, :]
    d2 = d_all[:, s1:, :]
    alphas = np.einsum("owm,ovm->owv", d1, d2)  # (outcomes, s1, s2)
    for t in np.asarray(t_grid, dtype=np.float64):
        lhs = abs(enumeration.exact_charfn(table, p, t / mom.sigma))
        theta = t * alphas / mom.sigma
        sq = np.maximum(1.0 - 2.0 * q * (1.0 - np.cos(theta)), 0.0)
        inner = np.exp(0.5 * np.log(np.maximum(sq, 1e-300)).sum(axis=(1, 2)))
        rhs = float((w_all * inner).sum())
        results.append((float(t), lhs**4, rhs, rhs - lhs**4))
    return results


def typical_alpha_trial(
    n: int,
    m: int,
    p: float,
    trials: int,
    seed: int,
    signed_window: tuple[float, float] = SIGNED_WINDOW,
    abs_window: tuple[float, float] = ABS_WINDOW,
) -> FrequencyReport:
    """Empirical frequency of {|A'| >= |A|/2^7} under both window conventions.

    The signed convention takes A' = {f : alpha_f in (c_lo r, c_hi r)} with
    r = sqrt(E alpha_f^2); the absolute convention takes
    A' = {f : |alpha_f| in (c_lo s, c_hi s)} with s = sqrt(p^2 m). Both
    windows' constants are parameters.
    """
    if m < 1.0 / (p * p * (1.0 - p) ** 2):
        raise DomainError(
            f"m={m} below the lower bound p^-2 (1-p)^-2 = "
            f"{1.0 / (p * p * (1.0 - p) ** 2):.6g}"
        )
    if m > n / 2.0:
        raise DomainError(f"m={m} above the upper bound n/2 = {n / 2.0}")
    gen = rng.generator(seed, 0)
    s1 = (n - m) // 2
    s2 = (n - m + 1) // 2
    a_size = s1 * s2
    e_sq = 4.0 * p * p * (1.0 - p) ** 2 * m
    r_signed = math.sqrt(e_sq)
    r_abs = math.sqrt(p * p * m)
    ratios_signed = np.empty(trials)
    ratios_abs = np.empty(trials)
    sq_sum = 0.0
    for i in range(trials):
        d1 = _sample_diff_matrix(gen, (s1, m), p)
        d2 = _sample_diff_matrix(gen, (s2, m), p)
        alphas = d1 @ d2.T
        sq_sum += float((alphas * alphas).mean())
        in_signed = (alphas > signed_window[0] * r_signed) & (
            alphas < signed_window[1] * r_signed
        )
        aa = np.abs(alphas)
        in_abs = (aa > abs_window[0] * r_abs) & (aa < abs_window[1] * r_abs)
        ratios_signed[i] = in_signed.sum() / a_size
        ratios_abs[i] = in_abs.sum() / a_size
    return FrequencyReport(
        n=n,
        m=m,
        p=float(p),
        trials=trials,
        a_size=a_size,
        freq_signed=float((ratios_signed >= TYPICAL_FRACTION).mean()),
        freq_abs=float((ratios_abs >= TYPICAL_FRACTION).mean()),
        ratios_signed=ratios_signed,
        ratios_abs=ratios_abs,
        expected_alpha_sq=e_sq,
        empirical_alpha_sq=sq_sum / trials,
        threshold=TYPICAL_FRACTION,
    )


def single_vertex_trial(n: int, p: float, trials: int, seed: int) -> SingleVertexReport:
    """The m = 1 case: P3 is one vertex w, A' = {f : |alpha_f| = 1}.

    With a single endowed vertex, alpha_uv = D_u D_v where D_i records the
    symmetric difference of w's neighbourhoods, so |A'| is the product of
    the difference counts inside P1 and P2, and |N_G0(w) delta N_G1(w)| is
    Bin(n-1, 2p(1-p)).
    """
    if not 0.0 < p < 0.5:
        raise DomainError(f"p must be in (0, 1/2), got {p}")
    if n < 3:
        raise InvalidParameterError(f"n must be >= 3, got {n}")
    gen = rng.generator(seed, 0)
    s1 = (n - 1) // 2
    s2 = n // 2
    threshold = (p * n) ** 2 / 2.0**4
    hits = 0
    sym_diff = np.empty(trials, dtype=np.int64)
    a_prime_sizes = np.empty(trials, dtype=np.int64)
    for i in range(trials):
        d = _sample_diff_matrix(gen, n - 1, p)
        nz = d != 0.0
        sym_diff[i] = int(nz.sum())
        a_prime_sizes[i] = int(nz[:s1].sum()) * int(nz[s1:].sum())
        hits += a_prime_sizes[i] >= threshold
    return SingleVertexReport(
        n=n,
        p=float(p),
        trials=trials,
        a_size=s1 * s2,
        freq=hits / trials,
        threshold=threshold,
        bound=1.0 - math.exp(-p * n / 2.0**4),
        a_prime_sizes=a_prime_sizes,
        sym_diff_sizes=sym_diff,
        sym_diff_mean_expected=(n - 1) * 2.0 * p * (1.0 - p),
    )
