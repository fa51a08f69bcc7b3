import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from manyoutcomes.families import power_law
from manyoutcomes.percentiles import (
    autoconvolution,
    autoconvolution_brute,
    cdf_exact,
    cdf_series_approx,
    convolve_pmf,
    percentile,
)
from manyoutcomes.polydist import from_coeffs, from_probs, moment, variance_exact


def _uniform(M):
    return from_coeffs(M, [1] + [0] * M, exact=True)


def test_convolve_identity_at_n1():
    d = _uniform(4)
    pmf = convolve_pmf(d, 1)
    assert pmf.probs == d.normalized


def test_convolve_bernoulli_pair():
    d = _uniform(1)
    pmf = convolve_pmf(d, 2)
    assert pmf.probs == (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))


def test_convolve_matches_enumeration():
    d = _uniform(2)
    pmf = convolve_pmf(d, 3)
    counts = [0] * 7
    for tup in itertools.product(range(3), repeat=3):
        counts[sum(tup)] += 1
    assert pmf.probs == tuple(Fraction(c, 27) for c in counts)


def test_convolve_caps():
    with pytest.raises(ValueError):
        convolve_pmf(_uniform(101), 101)  # exact cap
    with pytest.raises(ValueError):
        convolve_pmf(power_law(10**6, 2), 2)  # float cap


def test_convolution_conserves_mean_and_variance():
    d = from_coeffs(5, [1, 2, 1, 0, 0, 0], exact=True)
    for N in (2, 3, 4):
        pmf = convolve_pmf(d, N)
        mean = sum(Fraction(l) * p for l, p in enumerate(pmf.probs))
        second = sum(Fraction(l * l) * p for l, p in enumerate(pmf.probs))
        assert mean == N * moment(d, 1)
        assert second - mean * mean == N * variance_exact(d)


def test_cdf_exact_support_boundaries():
    d = _uniform(3)
    mu = moment(d, 1)
    assert cdf_exact(d, 2, 3 - mu) == 0  # above support
    assert cdf_exact(d, 2, -mu - Fraction(1, 10)) == 1  # below support


def test_cdf_exact_strict_boundary_enumeration():
    d = _uniform(2)
    # P(S_2 > 2) = P(3) + P(4) = 2/9 + 1/9
    assert cdf_exact(d, 2, 0) == Fraction(1, 3)


@pytest.mark.parametrize("M,N", [(2, 2), (3, 3), (4, 4), (4, 2)])
def test_cdf_exact_matches_full_enumeration(M, N):
    d = from_coeffs(M, [1, 1] + [0] * (M - 1), exact=True)
    mu = moment(d, 1)
    probs = d.normalized
    zs = [Fraction(l, N) - mu + Fraction(1, 3 * N) for l in range(-1, N * M + 1)]
    zs += [Fraction(l, N) - mu for l in range(0, N * M + 1)]
    for z in zs:
        brute = Fraction(0)
        for tup in itertools.product(range(M + 1), repeat=N):
            if Fraction(sum(tup), N) - mu > z:
                p = Fraction(1)
                for t in tup:
                    p *= probs[t]
                brute += p
        assert cdf_exact(d, N, z) == brute, z


def test_cdf_exact_monotone():
    d = power_law(30, 2, exact=True)
    pmf = convolve_pmf(d, 3)
    mu = moment(d, 1)
    values = [cdf_exact(d, 3, Fraction(l, 3) - mu, pmf=pmf) for l in range(0, 91)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert values[0] <= 1 and values[-1] == 0


def test_autoconvolution_n1_and_constant():
    coeffs = [Fraction(1), Fraction(3), Fraction(2)]
    for p in range(3):
        assert autoconvolution(coeffs, 1, p) == coeffs[p] * math.factorial(p)
    const = [Fraction(1), Fraction(0), Fraction(0)]
    assert autoconvolution(const, 4, 0) == 1


@given(
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=1, max_value=2),
    st.lists(st.integers(min_value=-3, max_value=3), min_size=2, max_size=4),
)
@settings(max_examples=40, deadline=None)
def test_autoconvolution_matches_brute(N, p_seed, raw):
    coeffs = [Fraction(c) for c in raw]
    p = p_seed % (N * (len(coeffs) - 1) + 1)
    assert autoconvolution(coeffs, N, p) == autoconvolution_brute(coeffs, N, p)


def test_autoconvolution_bounds():
    with pytest.raises(ValueError):
        autoconvolution([Fraction(1), Fraction(1)], 2, 5)


def test_series_approx_exact_at_n1():
    for dist in (_uniform(6), power_law(12, 3, exact=True)):
        mu = moment(dist, 1)
        for l in range(0, dist.M + 1):
            z = Fraction(l) - mu
            assert cdf_series_approx(dist, 1, z) == pytest.approx(
                float(cdf_exact(dist, 1, z)), abs=1e-12
            )


def test_series_approx_above_support_residual():
    d = _uniform(5)
    assert cdf_series_approx(d, 2, 10) == 0.0  # empty-sum regime


def test_series_approx_monotone_on_grid():
    d = _uniform(100)
    mu = moment(d, 1)
    vals = [cdf_series_approx(d, 2, Fraction(l, 2) - mu) for l in range(0, 201, 10)]
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


def test_series_approx_gap_shrinks_with_m():
    gaps = []
    for M in (10, 40):
        d = power_law(M, 2, exact=True)
        mu = moment(d, 1)
        z = Fraction(M, 4)
        exact_val = float(cdf_exact(d, 2, z))
        approx_val = cdf_series_approx(d, 2, z)
        gaps.append(abs(approx_val - exact_val))
    assert gaps[1] < gaps[0] + 0.05  # diagnostic trend, loose by design


def test_percentile_symmetric_median():
    d = from_probs(4, [1, 2, 3, 2, 1], exact=True)
    for N in (2, 3):
        z50 = percentile(d, N, 50)
        assert abs(z50) <= Fraction(1, N)


def test_percentile_atom():
    atom = from_probs(5, [0, 0, 1, 0, 0, 0], exact=True)
    for p in (5, 33.3, 50, 95):
        assert percentile(atom, 3, p) == 0


def test_percentile_boundary_tie():
    d = _uniform(2)
    # strict tail of S_2 at l=2 is exactly 1/3
    assert percentile(d, 2, Fraction(100, 3)) == 0
    assert percentile(d, 2, 33.33) == Fraction(1, 2)
    with pytest.raises(ValueError):
        percentile(d, 2, 0)
    with pytest.raises(ValueError):
        percentile(d, 2, 100)


def test_percentile_spread_grows_with_m():
    spreads = []
    for M in (20, 40, 80):
        d = power_law(M, 2)
        pmf = convolve_pmf(d, 10)
        spread = percentile(d, 10, 5, pmf=pmf) - percentile(d, 10, 95, pmf=pmf)
        spreads.append(spread)
    assert spreads[0] < spreads[1] < spreads[2]
