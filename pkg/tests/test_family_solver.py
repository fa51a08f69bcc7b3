import random
from fractions import Fraction

import numpy as np
import pytest

from manyoutcomes.family_solver import (
    chain_mode_basis,
    lagrange_extension,
    matrix_element,
    mode_basis,
    mode_distribution_weights,
    mode_variance_leading_coefficients,
    q_poly_check,
    s_coefficient,
    s_coefficient_brute,
    signed_variance,
    solve_constrained,
)
from manyoutcomes.polydist import from_probs


def test_s_coefficient_values():
    assert s_coefficient(7, 3, 1) == 22  # (M-s) * (M/2 + (1+s)/2) = 4 * 5.5
    assert s_coefficient(5, 4, 3) == 5**3  # s = M-1 collapses to M**x
    assert s_coefficient(5, 5, 0) == 1  # empty product convention
    assert s_coefficient(5, 5, 2) == 0
    assert s_coefficient(6, 4, 1) == 5 + 6
    assert s_coefficient(6, 4, 2) == 25 + 30 + 36


@pytest.mark.parametrize("M,s,x", [(5, 2, 2), (6, 1, 3), (7, 4, 2), (8, 5, 1), (4, 0, 3)])
def test_s_coefficient_matches_brute(M, s, x):
    assert s_coefficient(M, s, x) == s_coefficient_brute(M, s, x)


@pytest.mark.parametrize("M,s,x", [(8, 2, 3), (9, 4, 2), (6, 1, 4), (10, 7, 3)])
def test_s_coefficient_recursion(M, s, x):
    recursed = sum(j * s_coefficient(j, s, x - 1) for j in range(s + 1, M + 1))
    assert s_coefficient(M, s, x) == recursed


def test_q_poly_rows():
    assert q_poly_check(0, 5)["ok"]
    res = q_poly_check(1, 3)
    assert res["ok"] and res["q_row"] == (Fraction(1, 2), Fraction(2))
    assert q_poly_check(2, 4)["ok"]
    assert q_poly_check(3, 2)["ok"]
    with pytest.raises(ValueError):
        q_poly_check(4, 2)


def test_matrix_element_diagonal_and_bounds():
    for M in (3, 4, 5, 6, 7):
        for i in (M, max(1, M - 2)):
            assert matrix_element(i, i, M) == (-1) ** M
    assert matrix_element(4, 4, 4) == 1  # even M
    with pytest.raises(ValueError):
        matrix_element(3, 5, 6)


def test_solve_constrained_matches_lagrange_oracle():
    rng = random.Random(11)
    for _ in range(10):
        M = rng.randint(3, 14)
        s = rng.randint(1, M - 1)
        p0 = Fraction(rng.randint(-3, 5))
        anchors = [Fraction(rng.randint(-6, 6)) for _ in range(s)]
        assert solve_constrained(M, s, p0, anchors) == lagrange_extension(M, s, p0, anchors)


def test_solve_constrained_linear_family():
    assert solve_constrained(5, 1, 0, [1]) == tuple(Fraction(j) for j in range(6))


def test_solve_constrained_degenerate_anchors():
    assert solve_constrained(6, 2, 3, [3, 3]) == tuple([Fraction(3)] * 7)


def test_solution_decomposes_below_order():
    rng = random.Random(23)
    for _ in range(5):
        M = rng.randint(4, 12)
        s = rng.randint(1, min(4, M - 1))
        coef = [Fraction(rng.randint(0, 4)) for _ in range(s + 1)]
        coef[s] += 1  # ensure genuine order s, nonneg weights
        anchors = [sum(c * q**n for n, c in enumerate(coef)) for q in range(1, s + 1)]
        sol = solve_constrained(M, s, coef[0], anchors)
        d = from_probs(M, sol, exact=True)
        assert all(c == 0 for c in d.coeffs[s + 1 :])
        assert list(d.coeffs[: s + 1]) == coef
        assert sol[1 : s + 1] == tuple(anchors)


def test_mode_basis_reconstruction():
    M, s = 11, 3
    basis = mode_basis(M, s)
    p0 = Fraction(2)
    anchors = [Fraction(5), Fraction(3), Fraction(9)]
    sol = solve_constrained(M, s, p0, anchors)
    for j in range(s + 1, M + 1):
        recon = p0 + sum(
            basis.mode(q)[j - s - 1] * Fraction(j, q) * (anchors[q - 1] - p0)
            for q in range(1, s + 1)
        )
        assert recon == sol[j]


def test_mode_weights_are_lagrange_basis_values():
    M, s = 9, 3
    for q in range(1, s + 1):
        w = mode_distribution_weights(M, s, q)
        for j, val in zip(range(s + 1, M + 1), w):
            ell = Fraction(1)
            for k in range(s + 1):
                if k != q:
                    ell *= Fraction(j - k, q - k)
            assert val == ell


def test_chain_paths_agree_exactly():
    for M, s in [(6, 2), (8, 3), (4, 3)]:
        assert chain_mode_basis(M, s, "substitution") == chain_mode_basis(M, s, "expansion")


def test_chain_single_step_system():
    # M = s+1: one unknown, one matrix-element ratio
    M, s = 5, 4
    cb = chain_mode_basis(M, s, "substitution")
    sign = Fraction((-1) ** (M + 1))
    for q in range(1, s + 1):
        assert cb.mode(q) == (sign * matrix_element(M, q, M),)


def test_chain_expansion_cap():
    with pytest.raises(ValueError):
        chain_mode_basis(30, 2, "expansion")  # j - q up to 29 > cap


def test_chain_machinery_annihilates_geometric_sequences():
    """The printed triangular rows are (-1)^M-scaled Stirling-first-kind rows:
    sum_j (n, j) q**(j-1) = 0 for q = 1..n-1.  (This is the documented reason
    the chain construction is kept separate from the polynomial solver.)"""
    M = 7
    for n in range(3, M + 1):
        for q in range(1, n):
            total = sum(matrix_element(n, j, M) * q ** (j - 1) for j in range(1, n + 1))
            assert total == 0, (n, q)


def test_signed_variance_guards():
    with pytest.raises(ValueError):
        signed_variance([1, 2], [Fraction(1), Fraction(-1)])
    assert signed_variance([0, 2], [Fraction(1), Fraction(1)]) == 1


def test_mode_variance_quadratic_scaling_small():
    s = 4
    lead = mode_variance_leading_coefficients(s, range(s + 2, 26))
    theory = (s + 1) / ((s + 3) * (s + 2) ** 2)
    assert len(lead) == s
    for c in lead:
        assert abs(c / theory - 1) < 0.15
