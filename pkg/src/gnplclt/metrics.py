"""Lattice Fourier inversion and distances to the Gaussian.

The headline statistics: the sup distance between sigma P(X* = x) and the
standard normal density over the lattice x = (k - mu)/sigma, the l1
distance between the integer pmf and the discretized Gaussian, and the
anti-concentration statistic sigma max_k P(X = k), whose Gaussian limit is
1/sqrt(2 pi).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .enumeration import TriangleEdgeTable, exact_pmf
from .errors import CoverageError, InvalidParameterError, NumericError
from .graphs import Moments, moments, triangle_count_samples

GAUSS_RANGE = 10.0  # |x| cap; Gaussian mass beyond is < 1e-22


@dataclass(frozen=True)
class Pmf:
    n: int
    p: float
    support: np.ndarray  # integer k values carrying the listed mass
    probs: np.ndarray
    source: str  # exact-oracle | monte-carlo | inversion
    k_lo: int  # the contiguous k-range actually measured:
    k_hi: int  # k in [k_lo, k_hi] missing from support has mass zero
    ci: np.ndarray | None = None
    clipped: float = 0.0  # total negative mass clipped to zero (inversion)
    samples: int = 0  # Monte Carlo sample count; 0 for exact sources

    def mass_at(self, k: int) -> float:
        idx = np.searchsorted(self.support, k)
        if idx < self.support.size and self.support[idx] == k:
            return float(self.probs[idx])
        return 0.0


@dataclass(frozen=True)
class L1Result:
    total: float  # inside + gaussian_outside
    inside: float  # sum over covered k of |gaussian(k) - P(X=k)|
    gaussian_outside: float  # Gaussian mass beyond the covered range


@dataclass(frozen=True)
class DistanceReport:
    n: int
    p: float
    epsilon: float
    sup_lattice: float
    l1: float
    anticoncentration: float
    predicted_bound: float  # n^(-1/2+epsilon) p^(1/2)
    source: str
    samples: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "p": self.p,
                "epsilon": self.epsilon,
                "sup_lattice": self.sup_lattice,
                "l1": self.l1,
                "anticoncentration": self.anticoncentration,
                "predicted_bound": self.predicted_bound,
                "source": self.source,
                "samples": self.samples,
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "DistanceReport":
        d = json.loads(text)
        return DistanceReport(**d)


def invert_charfn(
    charfn,
    n: int,
    p: float,
    k_range: tuple[int, int] | None = None,
    tol: float = 1e-12,
    max_panels: int = 1 << 22,
) -> Pmf:
    """Recover the integer pmf from its characteristic function.

    Uses P(X=k) = (1/2 pi) integral over (-pi, pi] of phi(theta) e^(-i
    theta k) d theta, evaluated by the M-point trapezoid rule, which for a
    2 pi periodic integrand is a DFT and is exact once M exceeds the
    support span. M is doubled until two successive panel counts agree to
    `tol` at every k; failure to converge raises with panel diagnostics.
    """
    max_k = math.comb(n, 3)
    if k_range is None:
        k_range = (0, max_k)
    k_lo, k_hi = int(k_range[0]), int(k_range[1])
    if not 0 <= k_lo <= k_hi <= max_k:
        raise InvalidParameterError(f"k_range {k_range} outside [0, {max_k}]")
    m_panels = 64
    while m_panels <= max_k:
        m_panels *= 2
    prev = None
    while m_panels <= max_panels:
        thetas = 2.0 * math.pi * np.arange(m_panels) / m_panels
        phi = np.asarray([charfn(th) for th in thetas], dtype=np.complex128)
        mass = np.fft.fft(phi).real / m_panels
        cur = mass[k_lo : k_hi + 1]
        if prev is not None and np.abs(cur - prev).max() < tol:
            clipped = float(-cur[cur < 0].sum())
            probs = np.maximum(cur, 0.0)
            return Pmf(
                n=n,
                p=float(p),
                support=np.arange(k_lo, k_hi + 1, dtype=np.int64),
                probs=probs,
                source="inversion",
                k_lo=k_lo,
                k_hi=k_hi,
                clipped=clipped,
            )
        prev = cur
        m_panels *= 2
    raise NumericError(
        f"inversion did not converge to {tol} by {max_panels} panels "
        f"(last delta {np.abs(cur - prev).max() if prev is not None else 'n/a'})"
    )


def mc_pmf(
    n: int,
    p: float,
    num_samples: int,
    seed: int,
    workers: int = 1,
    counts: np.ndarray | None = None,
) -> Pmf:
    """Empirical pmf with per-k normal-approximation confidence radii.

    Radii are floored at 1/num_samples, so never reported as zero.
    """
    if num_samples < 10**4:
        raise InvalidParameterError("num_samples must be >= 10^4")
    if counts is None:
        counts = triangle_count_samples(n, p, seed, num_samples, workers=workers)
    else:
        counts = np.asarray(counts)[:num_samples]
        if counts.size < num_samples:
            raise InvalidParameterError("fewer precomputed counts than samples")
    freq = np.bincount(counts, minlength=1)
    support = np.nonzero(freq)[0].astype(np.int64)
    probs = freq[support] / num_samples
    ci = np.maximum(
        1.96 * np.sqrt(probs * (1.0 - probs) / num_samples), 1.0 / num_samples
    )
    return Pmf(
        n=n,
        p=float(p),
        support=support,
        probs=probs,
        source="monte-carlo",
        k_lo=0,
        k_hi=math.comb(n, 3),
        ci=ci,
        samples=int(num_samples),
    )


def oracle_pmf(table: TriangleEdgeTable, p: float) -> Pmf:
    """The exact pmf of the triangle count, packaged for the distance ops."""
    masses = exact_pmf(table, p)
    support = np.arange(table.max_triangles + 1, dtype=np.int64)
    probs = np.array([masses[k] for k in support])
    return Pmf(
        n=table.n,
        p=float(p),
        support=support,
        probs=probs,
        source="exact-oracle",
        k_lo=0,
        k_hi=table.max_triangles,
    )


def _gauss_window(m: Moments, max_k: int) -> tuple[int, int]:
    """Integer k-range covering |x| <= GAUSS_RANGE, clamped to [0, max_k]."""
    lo = max(0, math.ceil(m.mu - GAUSS_RANGE * m.sigma))
    hi = min(max_k, math.floor(m.mu + GAUSS_RANGE * m.sigma))
    return lo, hi


def _check_coverage(pmf: Pmf, lo: int, hi: int) -> None:
    if pmf.k_lo > lo or pmf.k_hi < hi:
        raise CoverageError(
            f"pmf covers [{pmf.k_lo}, {pmf.k_hi}] but [{lo}, {hi}] is needed"
        )


def _dense_mass(pmf: Pmf, ks: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Mass per k over `ks`, zero outside the measured range [lo, hi]."""
    mass = np.zeros(ks.size)
    inside = (ks >= lo) & (ks <= hi)
    idx = np.searchsorted(pmf.support, ks[inside])
    idx_c = np.minimum(idx, pmf.support.size - 1)
    valid = pmf.support[idx_c] == ks[inside]
    vals = np.where(valid, pmf.probs[idx_c], 0.0)
    mass[inside] = vals
    return mass


def sup_lattice_distance(pmf: Pmf, m: Moments) -> float:
    """sup over lattice points x of |N(x) - sigma P(X* = x)|, N the std normal density.

    The sup runs over all integers k with |(k - mu)/sigma| <= 10; counts
    outside [0, C(n,3)] carry zero mass but still contribute their Gaussian
    density, so a narrow law is correctly penalized.
    """
    max_k = math.comb(pmf.n, 3)
    lo, hi = _gauss_window(m, max_k)
    _check_coverage(pmf, lo, hi)
    ks = np.arange(
        math.ceil(m.mu - GAUSS_RANGE * m.sigma),
        math.floor(m.mu + GAUSS_RANGE * m.sigma) + 1,
        dtype=np.int64,
    )
    x = (ks - m.mu) / m.sigma
    dens = np.exp(-x * x / 2.0) / math.sqrt(2.0 * math.pi)
    mass = _dense_mass(pmf, ks, lo, hi)
    return float(np.abs(dens - m.sigma * mass).max())


def l1_distance(pmf: Pmf, m: Moments) -> L1Result:
    """Sum over integers k of |gaussian density at k - P(X = k)|.

    The sum covers |x| <= 10; the Gaussian mass outside that window is
    reported separately and included in the total.
    """
    max_k = math.comb(pmf.n, 3)
    lo, hi = _gauss_window(m, max_k)
    _check_coverage(pmf, lo, hi)
    ks = np.arange(
        math.ceil(m.mu - GAUSS_RANGE * m.sigma),
        math.floor(m.mu + GAUSS_RANGE * m.sigma) + 1,
        dtype=np.int64,
    )
    x = (ks - m.mu) / m.sigma
    dens = np.exp(-x * x / 2.0) / (math.sqrt(2.0 * math.pi) * m.sigma)
    mass = _dense_mass(pmf, ks, lo, hi)
    inside = float(np.abs(dens - mass).sum())
    # Gaussian mass beyond |x| <= 10 plus any trimmed by the [0, C(n,3)] clamp
    outside = float(2.0 * _gauss_upper_tail(GAUSS_RANGE))
    return L1Result(total=inside + outside, inside=inside, gaussian_outside=outside)


def _gauss_upper_tail(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def anticoncentration_stat(pmf: Pmf, m: Moments) -> float:
    """sigma max_k P(X = k); approaches 1/sqrt(2 pi) when the local CLT holds."""
    if pmf.probs.size == 0:
        raise InvalidParameterError("empty pmf")
    return float(m.sigma * pmf.probs.max())


def predicted_bound(n: int, p: float, epsilon: float) -> float:
    """The claimed decay order n^(-1/2+epsilon) p^(1/2)."""
    return n ** (-0.5 + epsilon) * math.sqrt(p)


def distance_report(
    pmf: Pmf, m: Moments, epsilon: float = 0.1
) -> DistanceReport:
    """Bundle the three statistics and the predicted order for one (n, p)."""
    return DistanceReport(
        n=pmf.n,
        p=pmf.p,
        epsilon=float(epsilon),
        sup_lattice=sup_lattice_distance(pmf, m),
        l1=l1_distance(pmf, m).total,
        anticoncentration=anticoncentration_stat(pmf, m),
        predicted_bound=predicted_bound(pmf.n, pmf.p, epsilon),
        source=pmf.source,
        samples=pmf.samples,
    )
