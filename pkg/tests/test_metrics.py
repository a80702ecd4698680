import json
import math

import numpy as np
import pytest

from gnplclt import enumeration, graphs, metrics
from gnplclt.errors import CoverageError, InvalidParameterError


def test_invert_point_mass():
    pmf = metrics.invert_charfn(lambda th: 1.0 + 0.0j, 4, 0.5)
    assert pmf.mass_at(0) == pytest.approx(1.0, abs=1e-12)
    assert sum(pmf.probs) == pytest.approx(1.0, abs=1e-10)


def test_invert_bernoulli():
    p = 0.3
    pmf = metrics.invert_charfn(
        lambda th: 1 - p**3 + p**3 * np.exp(1j * th), 3, p
    )
    assert pmf.mass_at(1) == pytest.approx(p**3, abs=1e-12)
    assert pmf.mass_at(0) == pytest.approx(1 - p**3, abs=1e-12)


def test_invert_oracle_round_trip(tables):
    for n, table in tables.items():
        for p in [0.1 * i for i in range(1, 10)]:
            exact = enumeration.exact_pmf(table, p)
            pmf = metrics.invert_charfn(
                lambda th: enumeration.exact_charfn(table, p, th), n, p
            )
            for k, q in exact.items():
                assert abs(pmf.mass_at(k) - q) < 1e-10
            assert pmf.source == "inversion"


def test_invert_k_range_validation():
    with pytest.raises(InvalidParameterError):
        metrics.invert_charfn(lambda th: 1.0 + 0j, 4, 0.5, k_range=(0, 100))


def test_mc_pmf_basics(tables):
    with pytest.raises(InvalidParameterError):
        metrics.mc_pmf(3, 0.5, 100, seed=1)
    pmf = metrics.mc_pmf(3, 0.5, 10**5, seed=21)
    assert pmf.probs.sum() == pytest.approx(1.0)
    ci1 = pmf.ci[pmf.support == 1][0]
    assert abs(pmf.mass_at(1) - 0.125) < 3 * ci1
    assert (pmf.ci >= 1.0 / 10**5).all()
    # total-variation distance against the oracle at n=6
    pmf6 = metrics.mc_pmf(6, 0.3, 10**5, seed=22)
    exact = enumeration.exact_pmf(tables[6], 0.3)
    tv = 0.5 * sum(abs(pmf6.mass_at(k) - q) for k, q in exact.items())
    assert tv <= 3 * 0.5 * pmf6.ci.sum()


def test_distances_zero_for_gaussian_discretization():
    m = graphs.moments(60, 0.3)
    ks = np.arange(
        math.ceil(m.mu - 10 * m.sigma), math.floor(m.mu + 10 * m.sigma) + 1
    )
    dens = np.exp(-(((ks - m.mu) / m.sigma) ** 2) / 2) / (
        math.sqrt(2 * math.pi) * m.sigma
    )
    syn = metrics.Pmf(
        n=60, p=0.3, support=ks, probs=dens, source="exact-oracle",
        k_lo=int(ks[0]), k_hi=int(ks[-1]),
    )
    assert metrics.sup_lattice_distance(syn, m) < 1e-12
    assert metrics.l1_distance(syn, m).inside < 1e-12
    assert metrics.anticoncentration_stat(syn, m) == pytest.approx(
        1.0 / math.sqrt(2 * math.pi), abs=1e-3
    )


def test_sup_distance_matches_hand_computation_for_two_point_law(tables):
    # n=3: X is Bernoulli(p^3); the sup can be evaluated by hand over the
    # integer window |(k - mu)/sigma| <= 10
    p = 0.5
    m = graphs.moments(3, p)
    pmf = metrics.oracle_pmf(tables[3], p)
    d = metrics.sup_lattice_distance(pmf, m)
    mass = {0: 1.0 - p**3, 1: p**3}
    expected = 0.0
    for k in range(math.ceil(m.mu - 10 * m.sigma), math.floor(m.mu + 10 * m.sigma) + 1):
        x = (k - m.mu) / m.sigma
        dens = math.exp(-x * x / 2.0) / math.sqrt(2.0 * math.pi)
        expected = max(expected, abs(dens - m.sigma * mass.get(k, 0.0)))
    assert d == pytest.approx(expected)
    assert d > 0.05


def test_l1_regression_pin(tables):
    # fixed deterministic value for the n=6, p=0.3 exact law
    m = graphs.moments(6, 0.3)
    pmf = metrics.oracle_pmf(tables[6], 0.3)
    res = metrics.l1_distance(pmf, m)
    assert res.total == pytest.approx(0.6105279648940534, abs=1e-9)
    assert res.gaussian_outside < 1e-20
    d = metrics.sup_lattice_distance(pmf, m)
    assert d == pytest.approx(0.25438972920980524, abs=1e-9)


def test_l1_triangle_inequality_bound(tables):
    # |dens - mass| summed is at most (sum of densities) + (total mass);
    # with sigma < 1 the density Riemann sum can exceed 1, so 2 is not a cap
    for p in (0.1, 0.5, 0.9):
        m = graphs.moments(5, p)
        res = metrics.l1_distance(metrics.oracle_pmf(tables[5], p), m)
        ks = np.arange(
            math.ceil(m.mu - 10 * m.sigma), math.floor(m.mu + 10 * m.sigma) + 1
        )
        x = (ks - m.mu) / m.sigma
        dens_sum = float(
            (np.exp(-x * x / 2.0) / (math.sqrt(2.0 * math.pi) * m.sigma)).sum()
        )
        assert 0.0 <= res.total <= dens_sum + 1.0 + 1e-9


def test_coverage_error():
    m = graphs.moments(60, 0.3)
    narrow = metrics.Pmf(
        n=60, p=0.3, support=np.array([100]), probs=np.array([1.0]),
        source="exact-oracle", k_lo=100, k_hi=100,
    )
    with pytest.raises(CoverageError):
        metrics.sup_lattice_distance(narrow, m)
    with pytest.raises(CoverageError):
        metrics.l1_distance(narrow, m)


def test_anticoncentration_point_mass():
    m = graphs.moments(6, 0.3)
    point = metrics.Pmf(
        n=6, p=0.3, support=np.array([2]), probs=np.array([1.0]),
        source="exact-oracle", k_lo=0, k_hi=20,
    )
    assert metrics.anticoncentration_stat(point, m) == pytest.approx(m.sigma)


def test_distance_report_serialization(tables):
    m = graphs.moments(6, 0.3)
    rep = metrics.distance_report(metrics.oracle_pmf(tables[6], 0.3), m)
    d = json.loads(rep.to_json())
    assert list(d) == [
        "n", "p", "epsilon", "sup_lattice", "l1",
        "anticoncentration", "predicted_bound", "source", "samples",
    ]
    assert d["predicted_bound"] == pytest.approx(6**-0.4 * math.sqrt(0.3))
    back = metrics.DistanceReport.from_json(rep.to_json())
    assert back == rep
