import math

import numpy as np
import pytest

from manyoutcomes.families import power_law
from manyoutcomes.polydist import from_coeffs, from_probs, variance_exact
from manyoutcomes.sampler import (
    draw_sample_mean,
    loglog_fit,
    mc_variance_of_mean,
    sample_means,
    sweep,
    unit_rng,
)


def test_atom_sample_mean_is_constant():
    atom = from_probs(5, [0, 0, 0, 1, 0, 0], exact=True)
    for seed in (0, 42):
        assert draw_sample_mean(atom, 20, unit_rng(seed, 0)) == 3.0


def test_uniform_sample_mean_lln_sanity():
    d = from_coeffs(10, [1] + [0] * 10, exact=True)
    n = 40000
    mean = draw_sample_mean(d, n, unit_rng(7, 0))
    sigma = math.sqrt(float(variance_exact(d)))
    assert abs(mean - 5.0) <= 4 * sigma / math.sqrt(n)


def test_fixed_seed_bit_identical():
    d = power_law(200, 2)
    a = sample_means(d, 10, 5000, seed=42)
    b = sample_means(d, 10, 5000, seed=42)
    assert np.array_equal(a, b)
    c = sample_means(d, 10, 5000, seed=43)
    assert not np.array_equal(a, c)


def test_unit_streaming_is_chunk_invariant():
    # totals beyond one unit still reproduce: the stream is keyed by unit index
    d = power_law(50, 2)
    big = sample_means(d, 3, 5000, seed=9)
    again = sample_means(d, 3, 5000, seed=9)
    assert np.array_equal(big, again)


def test_mc_variance_consistency_uniform():
    d = from_coeffs(6, [1] + [0] * 6, exact=True)
    est = mc_variance_of_mean(d, 10, 20000, seed=11)
    assert est.consistent_with(0.4, k_sigma=4.0)
    assert est.standard_error > 0


def test_mc_variance_atom_zero():
    atom = from_probs(4, [0, 1, 0, 0, 0], exact=True)
    est = mc_variance_of_mean(atom, 5, 500, seed=3)
    assert est.variance_of_sample_mean == 0.0


def test_mc_trials_guard():
    d = from_coeffs(4, [1, 0, 0, 0, 0], exact=True)
    with pytest.raises(ValueError):
        mc_variance_of_mean(d, 2, 50, seed=0)


def test_loglog_fit_exact_model():
    pts = [(m, 3.5 * m * m) for m in (100, 200, 400, 800, 1600)]
    c0, c1, c2 = loglog_fit(pts, degree=2)
    assert abs(c0 - math.log(3.5)) < 1e-9
    assert abs(c1 - 2.0) < 1e-9
    assert abs(c2) < 1e-9
    with pytest.raises(ValueError):
        loglog_fit([(10, 1.0), (20, -1.0), (30, 1.0), (40, 1.0)])
    with pytest.raises(ValueError):
        loglog_fit(pts[:3], degree=2)


def test_sweep_power_law_slope():
    result = sweep(lambda m: power_law(m, 2), list(range(2000, 10001, 2000)), N=1)
    assert 1.95 < result.fit[1] < 2.05
    assert [m for m, _ in result.points] == list(range(2000, 10001, 2000))


def test_sweep_scales_by_sample_size():
    grid = [100, 200, 400, 800]
    one = sweep(lambda m: power_law(m, 2), grid, N=1)
    ten = sweep(lambda m: power_law(m, 2), grid, N=10)
    for (m1, v1), (m2, v10) in zip(one.points, ten.points):
        assert v10 == pytest.approx(v1 / 10)


def test_sweep_worker_count_does_not_change_output():
    grid = [100, 200, 400, 800]
    serial = sweep(lambda m: power_law(m, 2), grid, N=1, workers=1)
    threaded = sweep(lambda m: power_law(m, 2), grid, N=1, workers=4)
    assert serial == threaded


def test_sweep_grid_validation():
    with pytest.raises(ValueError):
        sweep(lambda m: power_law(m, 2), [100, 100, 200, 300])
    with pytest.raises(ValueError):
        sweep(lambda m: power_law(m, 2), [100, 200, 300, 400], N=0)
