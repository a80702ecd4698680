"""Concentration and characteristic-function inequalities, with verifiers.

Each bound is implemented exactly as stated; where a constant is left
unspecified upstream it is exposed as a parameter (default 1) and every
comparison against it is reported, never asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegenerateDistributionError, DomainError, InvalidParameterError


@dataclass(frozen=True)
class DerivativeProfile:
    """Maximum expected partial derivatives E_j of the triangle polynomial.

    e[j] = max over edge sets A with |A| >= j of E(d_A X), j in 0..3.
    """

    n: int
    p: float
    e0: float
    e1: float
    e2: float
    e3: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.e0, self.e1, self.e2, self.e3)


def nearest_int_dist(x: float) -> float:
    """Distance from x to the nearest integer, in [0, 1/2]."""
    if not math.isfinite(x):
        raise InvalidParameterError(f"x must be finite, got {x}")
    return abs(x - round(x))


def binomial_charfn_bound(p: float, t: float) -> float:
    """Upper bound 1 - 8 p (1-p) ||t / 2pi||^2 for |1 - p + p e^(it)|."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must be in [0, 1], got {p}")
    return 1.0 - 8.0 * p * (1.0 - p) * nearest_int_dist(t / (2.0 * math.pi)) ** 2


def bernoulli_charfn_modulus(p: float, t: float) -> float:
    """|1 - p + p e^(it)|, the quantity binomial_charfn_bound dominates."""
    return abs(1.0 - p + p * complex(math.cos(t), math.sin(t)))


def chernoff_bound(mean: float, t: float) -> float:
    """Two-sided tail bound 2 exp(-t^2 / (2 mean + t)).

    At mean = t = 0 the exponent is 0/0; the bound is vacuous there and 2
    is returned.
    """
    if mean < 0.0 or t < 0.0:
        raise InvalidParameterError("mean and t must be nonnegative")
    if t == 0.0:
        return 2.0
    return 2.0 * math.exp(-(t * t) / (2.0 * mean + t))


def binomial_two_sided_tail(n: int, p: float, t: float) -> float:
    """Exact P(|Y - np| >= t) for Y ~ Bin(n, p); oracle for chernoff_bound."""
    mean = n * p
    total = 0.0
    for k in range(n + 1):
        if abs(k - mean) >= t:
            total += math.comb(n, k) * p**k * (1.0 - p) ** (n - k)
    return total


def triangle_derivative_profile(n: int, p: float) -> DerivativeProfile:
    """E_j of the triangle polynomial by derivative-set shape.

    A nonzero derivative set A is a sub-multiset of some triangle's edges,
    so only four shapes matter: empty (the mean), one edge, two incident
    edges, three edges of a triangle. E(d_A X) is C(n,3)p^3, (n-2)p^2, p, 1
    respectively, and E_j takes the max over |A| >= j.
    """
    if n < 3:
        raise InvalidParameterError(f"n must be >= 3, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must be in [0, 1], got {p}")
    mean = math.comb(n, 3) * p**3
    one_edge = (n - 2) * p**2
    two_edges = p
    three_edges = 1.0
    e3 = three_edges
    e2 = max(two_edges, e3)
    e1 = max(one_edge, e2)
    e0 = max(mean, e1)
    return DerivativeProfile(n=n, p=float(p), e0=e0, e1=e1, e2=e2, e3=e3)


def triangle_derivative_profile_bruteforce(n: int, p: float) -> DerivativeProfile:
    """E_j by explicit enumeration of all edge subsets A (oracle, n <= 6).

    d_A X is the sum over triangles containing A of the product of the
    triangle's edges outside A; its mean is (number of such triangles
    grouped by missing-edge count) weighted by powers of p.
    """
    if n > 6:
        raise InvalidParameterError("brute-force oracle limited to n <= 6")
    edges = list(combinations(range(n), 2))
    triangles = [
        frozenset({(u, v), (u, w), (v, w)})
        for u, v, w in combinations(range(n), 3)
    ]
    best = [0.0, 0.0, 0.0, 0.0]
    for size in range(0, 4):
        for a in combinations(edges, size):
            aset = frozenset(a)
            ev = 0.0
            for tri in triangles:
                if aset <= tri:
                    ev += p ** len(tri - aset)
            for j in range(0, size + 1):
                if ev > best[j]:
                    best[j] = ev
    return DerivativeProfile(
        n=n, p=float(p), e0=best[0], e1=best[1], e2=best[2], e3=best[3]
    )


def kimvu_bound(n: int, p: float, r: float, c3: float = 1.0) -> tuple[float, float]:
    """Deviation threshold and tail bound for the triangle count (degree 3).

    Returns (c3 r^3 sqrt(e0 e1), exp(-r + 2 log n)). c3 is the theorem's
    unspecified degree-3 constant, surfaced so reports can show it.
    """
    if r <= 1.0:
        raise InvalidParameterError(f"r must be > 1, got {r}")
    prof = triangle_derivative_profile(n, p)
    threshold = c3 * r**3 * math.sqrt(prof.e0 * prof.e1)
    tail = math.exp(-r + 2.0 * math.log(n))
    return threshold, tail


def paley_zygmund_check(
    sample_values, theta: float
) -> tuple[float, float, bool]:
    """P(S > theta E S) >= (1-theta)^2 (E S)^2 / E(S^2) on the empirical law.

    The inequality is pointwise true for any distribution, so it must hold
    exactly (up to rounding) on the empirical measure itself.
    """
    if not 0.0 < theta < 1.0:
        raise InvalidParameterError(f"theta must be in (0, 1), got {theta}")
    vals = np.asarray(sample_values, dtype=np.float64)
    if vals.size == 0 or (vals < 0).any():
        raise InvalidParameterError("sample must be nonempty and nonnegative")
    if not (vals > 0).any():
        raise DegenerateDistributionError("all-zero sample")
    # both sides are scale invariant; rescale so squaring cannot underflow
    vals = vals / vals.max()
    es = float(vals.mean())
    es2 = float((vals * vals).mean())
    lhs = float((vals > theta * es).mean())
    rhs = (1.0 - theta) ** 2 * es * es / es2
    return lhs, rhs, lhs >= rhs - 1e-12


def gaussian_tail(k: float) -> float:
    """Bound e^(-K^2/2) / K on the upper Gaussian tail integral, K >= 2.

    The chain tail <= e^(-K^2/2)/K <= e^(-K) needs K >= 2, hence the domain
    restriction.
    """
    if k < 2.0:
        raise DomainError(f"K must be >= 2, got {k}")
    return math.exp(-k * k / 2.0) / k
