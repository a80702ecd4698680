"""Monte Carlo characteristic-function estimation and t-regime bounds.

The estimated object is phi(t) = E e^(i t X*) with X* = (X - mu)/sigma.
Three t-ranges carry distinct bounds: the Stein range |t| <= K where phi
tracks e^(-t^2/2), a mid range ((2^21 p^2 n)^(1/2+gamma), sigma/2^10) with
bound exp(-t^(2 gamma)), and an edge range (sigma/2^12, pi sigma] with
bound exp(-c_edge sqrt(n)). The interval-covering construction that
justifies the mid-range bound is checked numerically as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoverageError, DomainError, InvalidParameterError
from .graphs import Moments, moments, triangle_count_samples

BATCHES = 30


@dataclass(frozen=True)
class CharFnSeries:
    n: int
    p: float
    t_grid: np.ndarray  # ascending
    estimates: np.ndarray  # complex, one per t
    ci_radius: np.ndarray  # 95% radius on the complex estimate (and modulus)
    samples_used: int


@dataclass(frozen=True)
class RegimeClassification:
    t: float
    regime: str  # stein | mid | edge | uncovered
    bound_value: float | None
    parameters: tuple[float, float, float]  # (K, gamma, c_edge)


@dataclass(frozen=True)
class SteinReport:
    discrepancy: float  # sup over gridded |t| <= K of |phi(t) - e^(-t^2/2)|
    t_at_max: float
    predictor: float  # c_stein * K / (n sqrt(p)), the stated error order
    c_stein: float


@dataclass(frozen=True)
class CoverReport:
    n: int
    p: float
    gamma: float
    delta: float
    m_lo: int  # first m checked
    m_hi: int  # last m checked
    empty_intervals: int
    overlap_failures: int
    target: tuple[float, float]  # ((2^21 p^2 n)^(1/2+gamma), sigma/2^10)
    target_nonempty: bool
    covered: bool
    last_right_below_mid_cap: bool  # right end of I_(n/2) < sigma/2^10
    witnesses: list = field(default_factory=list)  # (t, m) samples


def delta_from_gamma(gamma: float) -> float:
    """The exponent substitution 1/2 + gamma = 1/(2 - delta), solved for delta."""
    if not 0.0 < gamma < 0.125:
        raise InvalidParameterError(f"gamma must be in (0, 1/8), got {gamma}")
    return 2.0 - 1.0 / (0.5 + gamma)


def mid_interval(n: int, p: float, gamma: float, sigma: float) -> tuple[float, float]:
    """The mid-regime t-range ((2^21 p^2 n)^(1/2+gamma), sigma/2^10)."""
    if not 0.0 < gamma < 0.125:
        raise InvalidParameterError(f"gamma must be in (0, 1/8), got {gamma}")
    return ((2.0**21 * p * p * n) ** (0.5 + gamma), sigma / 2.0**10)


def default_stein_cutoff(n: int, p: float, gamma: float) -> float:
    """K = (log n)^(8/gamma) (p^2 n)^(1/2+gamma), the default Stein range end."""
    return math.log(n) ** (8.0 / gamma) * (p * p * n) ** (0.5 + gamma)


def estimate_charfn(
    n: int,
    p: float,
    t_grid,
    num_samples: int,
    seed: int,
    workers: int = 1,
    counts: np.ndarray | None = None,
) -> CharFnSeries:
    """Estimate E e^(i t X*) at every grid t from shared samples.

    All grid points are evaluated on the same triangle-count samples, so
    estimates at +-t are exact complex conjugates. Confidence radii come
    from batch means over 30 batches. Precomputed counts may be passed to
    share samples across calls; they must be drawn at the same (n, p).
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.size == 0:
        raise InvalidParameterError("t_grid must be nonempty")
    if not np.isfinite(t_grid).all():
        raise InvalidParameterError("t values must be finite")
    if num_samples < 1000:
        raise InvalidParameterError("num_samples must be >= 1000")
    order = np.argsort(t_grid, kind="stable")
    ts = t_grid[order]
    if counts is None:
        counts = triangle_count_samples(n, p, seed, num_samples, workers=workers)
    else:
        counts = np.asarray(counts)[:num_samples]
        if counts.size < num_samples:
            raise InvalidParameterError("fewer precomputed counts than samples")
    m = moments(n, p)
    x = (counts - m.mu) / m.sigma
    edges = np.linspace(0, num_samples, BATCHES + 1).astype(np.int64)
    batch_len = np.diff(edges).astype(np.float64)
    est = np.empty(ts.size, dtype=np.complex128)
    ci = np.empty(ts.size, dtype=np.float64)
    # evaluate each |t| once and mirror, so conjugate symmetry is exact
    cache: dict[float, tuple[complex, float]] = {}
    for i, t in enumerate(ts):
        at = abs(float(t))
        if at not in cache:
            if at == 0.0:
                cache[at] = (1.0 + 0.0j, 0.0)
            else:
                z = np.cos(at * x) + 1j * np.sin(at * x)
                sums = np.add.reduceat(z, edges[:-1])
                bmean = sums / batch_len
                grand = complex(z.mean())
                dev = bmean - grand
                var = (np.var(dev.real) + np.var(dev.imag)) / BATCHES
                cache[at] = (grand, 1.96 * math.sqrt(var))
        z0, r0 = cache[at]
        est[i] = z0 if t >= 0 else z0.conjugate()
        ci[i] = r0
    return CharFnSeries(
        n=n,
        p=float(p),
        t_grid=ts,
        estimates=est,
        ci_radius=ci,
        samples_used=int(num_samples),
    )


def stein_discrepancy(
    n: int, p: float, k_cut: float, series: CharFnSeries, c_stein: float = 1.0
) -> SteinReport:
    """Sup over gridded |t| <= K of |phi(t) - e^(-t^2/2)|, plus the K/(n sqrt p) order."""
    sel = np.abs(series.t_grid) <= k_cut
    if not sel.any() or series.t_grid[sel].max() < k_cut * (1.0 - 1e-9):
        raise CoverageError(f"grid does not reach K={k_cut}")
    ts = series.t_grid[sel]
    diffs = np.abs(series.estimates[sel] - np.exp(-(ts * ts) / 2.0))
    i = int(np.argmax(diffs))
    return SteinReport(
        discrepancy=float(diffs[i]),
        t_at_max=float(ts[i]),
        predictor=c_stein * k_cut / (n * math.sqrt(p)),
        c_stein=c_stein,
    )


def classify_regime(
    n: int,
    p: float,
    t: float,
    gamma: float,
    k_cut: float | None = None,
    c_edge: float = 1.0,
    c_stein: float = 1.0,
    m: Moments | None = None,
) -> RegimeClassification:
    """Assign t to the regime whose interval contains it.

    Overlaps resolve to the smaller bound value; the Stein range carries
    the implied bound e^(-t^2/2) + c_stein K/(n sqrt p) for this purpose.
    Gaps between the ranges are reported as `uncovered` with no bound.
    """
    if not 0.0 < gamma < 0.125:
        raise InvalidParameterError(f"gamma must be in (0, 1/8), got {gamma}")
    if m is None:
        m = moments(n, p)
    if k_cut is None:
        k_cut = default_stein_cutoff(n, p, gamma)
    sigma = m.sigma
    at = abs(t)
    mid_lo, mid_hi = mid_interval(n, p, gamma, sigma)
    candidates = []
    if at <= k_cut:
        candidates.append(
            ("stein", math.exp(-at * at / 2.0) + c_stein * k_cut / (n * math.sqrt(p)))
        )
    if mid_lo < at < mid_hi:
        candidates.append(("mid", math.exp(-(at**(2.0 * gamma)))))
    if sigma / 2.0**12 < at <= math.pi * sigma:
        candidates.append(("edge", math.exp(-c_edge * math.sqrt(n))))
    if not candidates:
        return RegimeClassification(
            t=float(t), regime="uncovered", bound_value=None,
            parameters=(k_cut, gamma, c_edge),
        )
    regime, bound = min(candidates, key=lambda rb: rb[1])
    return RegimeClassification(
        t=float(t), regime=regime, bound_value=bound,
        parameters=(k_cut, gamma, c_edge),
    )


def edge_rate_candidates(n: int, p: float, c_edge: float = 1.0) -> dict[str, float]:
    """Both candidate decay rates for the edge range.

    The stated rate is exp(-c sqrt(n)) with no constant; the proof route
    produces exp(-p n / 2^6) as one term. Both are reported, neither is
    asserted.
    """
    return {
        "exp_minus_c_sqrt_n": math.exp(-c_edge * math.sqrt(n)),
        "exp_minus_pn_over_64": math.exp(-p * n / 2.0**6),
    }


def build_t_grid(
    n: int,
    p: float,
    gamma: float,
    k_cut: float | None = None,
    points_per_regime: int = 24,
    m: Moments | None = None,
) -> np.ndarray:
    """Geometric t-grid per regime plus the exact boundary points.

    Boundaries K, sigma/2^12, sigma/2^10 and pi sigma are always included
    (clipped to (0, pi sigma]) because the claimed bounds change shape
    there.
    """
    if m is None:
        m = moments(n, p)
    if k_cut is None:
        k_cut = default_stein_cutoff(n, p, gamma)
    sigma = m.sigma
    t_max = math.pi * sigma
    mid_lo, mid_hi = mid_interval(n, p, gamma, sigma)
    pts = [t for t in (k_cut, sigma / 2.0**12, mid_hi, t_max) if 0.0 < t <= t_max]
    segments = [
        (min(1e-3, k_cut / 10.0), min(k_cut, t_max)),
        (mid_lo, min(mid_hi, t_max)),
        (sigma / 2.0**12, t_max),
    ]
    for lo, hi in segments:
        if 0.0 < lo < hi:
            pts.extend(np.geomspace(lo, hi, points_per_regime).tolist())
    grid = np.unique(np.asarray(pts, dtype=np.float64))
    return grid[(grid > 0.0) & (grid <= t_max)]


def interval_cover_check(
    n: int, p: float, gamma: float, num_witnesses: int = 16
) -> CoverReport:
    """Numerically verify the covering of the mid range by the intervals I_m.

    I_m = ((2^19 p^2 n^2 / m)^(1/(2-delta)), sigma/(2^8 p sqrt(m))) for
    integer m in (4/p^2, n/2); consecutive intervals must overlap and their
    union must contain the whole mid range.
    """
    if not 0.0 < gamma < 0.125:
        raise InvalidParameterError(f"gamma must be in (0, 1/8), got {gamma}")
    if not 4.0 / math.sqrt(n) < p < 0.5:
        raise DomainError(f"p={p} outside (4 n^(-1/2), 1/2) for n={n}")
    delta = delta_from_gamma(gamma)
    m_lo = math.floor(4.0 / (p * p)) + 1
    m_hi = math.ceil(n / 2.0) - 1
    if m_lo > m_hi:
        raise DomainError(
            f"no integer m in (4/p^2, n/2) = ({4.0 / (p * p)}, {n / 2.0})"
        )
    sigma = moments(n, p).sigma
    ms = np.arange(m_lo, m_hi + 1, dtype=np.float64)
    lefts = (2.0**19 * p * p * n * n / ms) ** (1.0 / (2.0 - delta))
    rights = sigma / (2.0**8 * p * np.sqrt(ms))
    nonempty = lefts < rights
    empty_intervals = int((~nonempty).sum())
    # consecutive overlap: I_(m+1) starts before I_m ends, both nonempty
    overlaps = (lefts[1:] < rights[:-1]) & nonempty[1:] & nonempty[:-1]
    overlap_failures = int((~overlaps).sum())
    target = mid_interval(n, p, gamma, sigma)
    target_nonempty = target[0] < target[1]
    covered = False
    witnesses: list[tuple[float, int]] = []
    if target_nonempty:
        # classic sweep: endpoints decrease in m, so iterate m descending
        # (left to right spatially) and extend the reachable prefix
        reach = target[0]
        for i in range(len(ms) - 1, -1, -1):
            if not nonempty[i]:
                continue
            if lefts[i] > reach:
                break  # gap before this interval
            if rights[i] > reach:
                reach = rights[i]
            if reach >= target[1]:
                break
        covered = reach >= target[1]
        for t in np.geomspace(target[0], target[1], num_witnesses):
            hit = np.nonzero(nonempty & (lefts < t) & (t < rights))[0]
            witnesses.append((float(t), int(ms[hit[0]]) if hit.size else -1))
    last_right = sigma / (2.0**8 * p * math.sqrt(n // 2))
    return CoverReport(
        n=n,
        p=float(p),
        gamma=float(gamma),
        delta=float(delta),
        m_lo=m_lo,
        m_hi=m_hi,
        empty_intervals=empty_intervals,
        overlap_failures=overlap_failures,
        target=(float(target[0]), float(target[1])),
        target_nonempty=bool(target_nonempty),
        covered=bool(covered),
        last_right_below_mid_cap=bool(last_right < sigma / 2.0**10),
        witnesses=witnesses,
    )
