import math

import numpy as np
import pytest

from gnplclt import decoupling, graphs
from gnplclt.errors import DomainError, InvalidParameterError


def rows_from_edges(n, edges):
    rows = np.zeros((n, (n + 63) // 64), dtype=np.uint64)
    for u, v in edges:
        rows[u, v >> 6] |= np.uint64(1) << np.uint64(v & 63)
        rows[v, u >> 6] |= np.uint64(1) << np.uint64(u & 63)
    return rows


def sample_from_edges(n, p, edges):
    return graphs.GnpSample(
        n=n, p=p, seed=0, stream_id=0, rows=rows_from_edges(n, edges)
    )


def fixed_partition(n, m, p1, p2, p3):
    return decoupling.EndowedPartition(
        n=n, m=m, p1=np.array(p1), p2=np.array(p2), p3=np.array(p3)
    )


def test_partition_sizes():
    part = decoupling.make_partition(5, 1, seed=3)
    assert (part.p1.size, part.p2.size, part.p3.size) == (2, 2, 1)
    part = decoupling.make_partition(6, 3, seed=3)
    assert (part.p1.size, part.p2.size, part.p3.size) == (1, 2, 3)
    allv = np.sort(np.concatenate([part.p1, part.p2, part.p3]))
    assert (allv == np.arange(6)).all()
    assert part.a_size == 2
    assert part.b_size == 9


def test_partition_deterministic():
    a = decoupling.make_partition(20, 5, seed=9)
    b = decoupling.make_partition(20, 5, seed=9)
    assert (a.p1 == b.p1).all() and (a.p3 == b.p3).all()
    with pytest.raises(InvalidParameterError):
        decoupling.make_partition(5, 5, seed=0)


def test_alpha_single_vertex_cases():
    # P3 = {2}, A = {(0, 1)}; alpha tracks the signed product of differences
    part = fixed_partition(3, 1, [0], [1], [2])
    both_in_g0 = decoupling.compute_alphas(
        sample_from_edges(3, 0.5, [(0, 2), (1, 2)]),
        sample_from_edges(3, 0.5, []),
        part,
    )
    assert both_in_g0.alphas[0, 0] == 1
    split = decoupling.compute_alphas(
        sample_from_edges(3, 0.5, [(0, 2)]),
        sample_from_edges(3, 0.5, [(1, 2)]),
        part,
    )
    assert split.alphas[0, 0] == -1
    shared = decoupling.compute_alphas(
        sample_from_edges(3, 0.5, [(0, 2), (1, 2)]),
        sample_from_edges(3, 0.5, [(0, 2)]),
        part,
    )
    assert shared.alphas[0, 0] == 0


def test_alpha_bounds_and_expected_sq():
    g0 = graphs.sample_gnp(12, 0.4, seed=1)
    g1 = graphs.sample_gnp(12, 0.4, seed=2)
    part = decoupling.make_partition(12, 4, seed=3)
    prof = decoupling.compute_alphas(g0, g1, part)
    assert (np.abs(prof.alphas) <= part.m).all()
    assert prof.expected_alpha_sq == pytest.approx(4 * 0.4**2 * 0.6**2 * 4)
    with pytest.raises(InvalidParameterError):
        decoupling.compute_alphas(g0, graphs.sample_gnp(11, 0.4, seed=2), part)


def test_inner_product_basics():
    part = fixed_partition(4, 1, [0], [1], [3])
    zero = decoupling.AlphaProfile(
        partition=part, alphas=np.zeros((1, 1), dtype=np.int64),
        a_prime=np.ones((1, 1), dtype=bool), expected_alpha_sq=1.0, p=0.5,
    )
    assert decoupling.inner_charfn_product(zero, False, 0.5, 3.0, 2.0) == 1.0
    one = decoupling.AlphaProfile(
        partition=part, alphas=np.ones((1, 1), dtype=np.int64),
        a_prime=np.ones((1, 1), dtype=bool), expected_alpha_sq=1.0, p=0.5,
    )
    for t, sigma in [(1.0, 1.0), (2.5, 3.0)]:
        got = decoupling.inner_charfn_product(one, False, 0.5, t, sigma)
        assert got == pytest.approx(abs(math.cos(t / (2 * sigma))))


def test_inner_product_dominated_by_factor_bound():
    from gnplclt import bounds

    g0 = graphs.sample_gnp(14, 0.3, seed=5)
    g1 = graphs.sample_gnp(14, 0.3, seed=6)
    part = decoupling.make_partition(14, 4, seed=7)
    prof = decoupling.compute_alphas(g0, g1, part)
    sigma = graphs.moments(14, 0.3).sigma
    for t in (0.7, 2.0, 5.0):
        got = decoupling.inner_charfn_product(prof, False, 0.3, t, sigma)
        cap = 1.0
        for a in prof.alphas.ravel():
            cap *= bounds.binomial_charfn_bound(0.3, t * a / sigma)
        assert got <= cap + 1e-12


def test_inner_product_swap_invariance():
    g0 = graphs.sample_gnp(14, 0.3, seed=8)
    g1 = graphs.sample_gnp(14, 0.3, seed=9)
    part = decoupling.make_partition(14, 5, seed=1)
    a = decoupling.compute_alphas(g0, g1, part)
    b = decoupling.compute_alphas(g1, g0, part)
    # alpha_f multiplies two entries of D, so negating D leaves it fixed
    assert (b.alphas == a.alphas).all()
    sigma = graphs.moments(14, 0.3).sigma
    for t in (0.9, 3.3):
        assert decoupling.inner_charfn_product(
            a, False, 0.3, t, sigma
        ) == pytest.approx(decoupling.inner_charfn_product(b, False, 0.3, t, sigma))


def test_decoupling_trivial_at_t_zero():
    lhs, rhs, margin = decoupling.verify_decoupling(
        10, 2, 0.3, 0.0, outer_samples=5, seed=1, lhs_samples=2000
    )
    assert (lhs, rhs) == (1.0, 1.0)
    assert margin == pytest.approx(0.0)


def test_decoupling_exact_small_sizes(tables):
    for n, m in [(5, 1), (5, 2), (6, 1), (6, 2)]:
        for p in (0.3, 0.5):
            sigma = graphs.moments(n, p).sigma
            grid = np.linspace(math.pi * sigma / 16, math.pi * sigma, 16)
            res = decoupling.verify_decoupling_exact(
                n, m, p, grid, table=tables[n]
            )
            for t, lhs4, rhs, margin in res:
                assert 0.0 <= rhs <= 1.0 + 1e-12
                assert margin >= -1e-12, (n, m, p, t)


def test_decoupling_monte_carlo():
    lhs, rhs, margin = decoupling.verify_decoupling(
        20, 4, 0.3, 5.0, outer_samples=300, seed=7, lhs_samples=30000
    )
    assert 0.0 <= rhs <= 1.0
    assert margin >= -0.05


def test_alpha_mean_zero():
    # alpha = sum_f alpha_f x_f^0 has mean 0 over (g0, g1, x_A) jointly
    gen = np.random.Generator(np.random.Philox(key=(5, 0)))
    n, m, p, trials = 30, 6, 0.3, 4000
    part = decoupling.make_partition(n, m, seed=2)
    vals = np.empty(trials)
    for i in range(trials):
        g0 = graphs.sample_gnp(n, p, seed=100, stream_id=2 * i)
        g1 = graphs.sample_gnp(n, p, seed=100, stream_id=2 * i + 1)
        prof = decoupling.compute_alphas(g0, g1, part)
        x_a = gen.random(prof.alphas.shape) < p
        vals[i] = float((prof.alphas * x_a).sum())
    se = vals.std() / math.sqrt(trials)
    assert abs(vals.mean()) < 4 * se


def test_empirical_alpha_sq_matches_closed_form():
    rep = decoupling.typical_alpha_trial(400, 100, 0.2, trials=10**4, seed=12)
    assert rep.expected_alpha_sq == pytest.approx(4 * 0.04 * 0.64 * 100)
    assert abs(rep.empirical_alpha_sq / rep.expected_alpha_sq - 1.0) < 0.05


def test_typical_alpha_domain_errors():
    with pytest.raises(DomainError):
        decoupling.typical_alpha_trial(400, 30, 0.2, trials=10, seed=1)
    with pytest.raises(DomainError):
        decoupling.typical_alpha_trial(400, 300, 0.2, trials=10, seed=1)


def test_single_vertex_trial():
    rep = decoupling.single_vertex_trial(500, 0.1, trials=400, seed=4)
    assert rep.threshold == pytest.approx(50.0**2 / 16.0)
    assert rep.bound == pytest.approx(1.0 - math.exp(-500 * 0.1 / 16.0))
    mean = rep.sym_diff_sizes.mean()
    se = rep.sym_diff_sizes.std() / math.sqrt(rep.trials)
    assert abs(mean - rep.sym_diff_mean_expected) < 4 * se
    with pytest.raises(DomainError):
        decoupling.single_vertex_trial(500, 0.6, trials=10, seed=1)
