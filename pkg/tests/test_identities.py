from fractions import Fraction
from math import comb

import pytest

from manyoutcomes.identities import (
    binomial_identity,
    border_sum,
    bulk_sum,
    chu_vandermonde,
    gen_vandermonde_example,
    gen_vandermonde_step,
    hypergeometric_identity,
    run_identity_suite,
    simplex_I,
    simplex_II_brute_coeffs,
    simplex_II_general_form,
    simplex_II_special,
    simplex_III,
    simplex_IV,
    simplex_V,
)


def test_suite_all_pass():
    reports = run_identity_suite()
    assert {r.name for r in reports} == {
        "simplex_I",
        "simplex_II_special",
        "simplex_III",
        "simplex_IV",
        "simplex_V",
        "binomial_identity",
        "hypergeometric_identity",
        "bulk_border_sums",
        "chu_vandermonde",
        "gen_vandermonde",
    }
    for rep in reports:
        assert rep.passed, (rep.name, rep.first_counterexample)


def test_suite_only_selector():
    (rep,) = run_identity_suite(only="chu_vandermonde")
    assert rep.name == "chu_vandermonde" and rep.passed
    with pytest.raises(ValueError):
        run_identity_suite(only="nonsense")


def test_simplex_I_single_part_exact():
    lhs, rhs = simplex_I([3], 1, 17)
    assert lhs == rhs == 17**3


def test_simplex_I_ratio_improves():
    g100 = simplex_I([1, 1], 2, 100)
    g1000 = simplex_I([1, 1], 2, 1000)
    assert abs(g1000[0] / g1000[1] - 1) < abs(g100[0] / g100[1] - 1)


def test_simplex_I_zero_powers_document_gap():
    lhs, rhs = simplex_I([0, 0], 2, 10)
    assert lhs == 11 and rhs == 10  # the O(1/l) offset the form ignores


def test_simplex_II_exact_lines():
    for s in (2, 3, 4, 5):
        brute = simplex_II_brute_coeffs(s)
        assert simplex_II_special(s, 2 * s) == brute[2 * s]
        assert simplex_II_special(s, 2 * s - 1) == brute[2 * s - 1]


def test_simplex_II_deep_lines_match_general_form_not_truth():
    # the deep resummed lines faithfully resum the printed general formula,
    # and both deviate from the true coefficients (recorded source defect)
    for s in (2, 3, 4):
        brute = simplex_II_brute_coeffs(s)
        for m in (2 * s - 2, 2 * s - 3):
            printed = simplex_II_special(s, m)
            assert printed == simplex_II_general_form(s, m)
            assert printed != brute[m]


def test_simplex_II_general_form_depth_one_exact():
    for s in (2, 3, 4, 5):
        brute = simplex_II_brute_coeffs(s)
        assert simplex_II_general_form(s, 2 * s) == brute[2 * s]
        assert simplex_II_general_form(s, 2 * s - 1) == brute[2 * s - 1]


def test_simplex_III_examples():
    lhs, rhs = simplex_III(2, 7, 2, (1, 2))
    assert lhs == rhs
    # a = 0 degenerates to the unshifted simplex
    lhs, rhs = simplex_III(0, 6, 2, (1, 1))
    assert lhs == rhs
    # s = 1, linear exponent: plain arithmetic series
    lhs, rhs = simplex_III(3, 9, 1, (1,))
    assert lhs == rhs == sum(range(3, 10))


def test_simplex_IV_values():
    lhs, rhs = simplex_IV(1, 5, 1)
    assert lhs == rhs
    assert simplex_IV(2, 8, 0) == (comb(7, 1), comb(7, 1))
    lhs, rhs = simplex_IV(2, 8, 2)
    assert lhs == rhs
    with pytest.raises(ValueError):
        simplex_IV(1, 3, 3)


def test_simplex_V_reduces_and_restricts():
    assert simplex_V(2, 9, 1, 0, 0) == simplex_IV(2, 9, 1)
    lhs, rhs = simplex_V(1, 9, 1, 1, 0)
    assert lhs == rhs == 246  # full 254 minus the C(8,1) boundary chain
    lhs, rhs = simplex_V(1, 10, 1, 1, 1)
    assert lhs == rhs
    with pytest.raises(ValueError):
        simplex_V(1, 5, 1, 2, 2)


def test_binomial_identity_three_forms():
    for M in (2, 7, 13):
        a, b, c = binomial_identity(1, 6, 7, M)
        assert a == b == c
    a, b, c = binomial_identity(3, -1, 4, 9)
    assert a == b == c == comb(9 - 3 + 4, 5)


def test_hypergeometric_identity_cases():
    lhs, rhs = hypergeometric_identity(0, [1], 1)
    assert lhs == rhs == 1
    lhs, rhs = hypergeometric_identity(1, [0, 1], 4)
    assert lhs == rhs
    lhs, rhs = hypergeometric_identity(2, [1, 0, 1], 5)
    assert lhs == rhs


def test_bulk_and_border_values():
    brute, closed = bulk_sum(2, 2)
    assert brute == closed == 2  # single tuple (1, 2)
    for s in range(4, 11):
        brute, closed = border_sum(4, 2, s)
        assert brute == closed
    with pytest.raises(ValueError):
        bulk_sum(8, 9)
    with pytest.raises(ValueError):
        border_sum(4, 9, 10)


def test_chu_vandermonde_values():
    assert chu_vandermonde((5,), 2) == (comb(5, 2), comb(5, 2))
    assert chu_vandermonde((3, 4), 3) == (35, 35)
    assert chu_vandermonde((2, 2, 2), 4) == (15, 15)


def test_gen_vandermonde_examples():
    lhs, rhs = gen_vandermonde_example(1, 2, 1, 1, (1, 2))
    assert lhs == rhs == (2 - 1) * (1 + 2)
    lhs, rhs = gen_vandermonde_example(1, 3, 2, 1, (1, 4, 6))
    assert lhs == rhs
    lhs, rhs = gen_vandermonde_example(2, 4, 2, 2, (1, 2, 3, 5))
    assert lhs == rhs
    lhs, rhs = gen_vandermonde_example(1, 3, 1, 1, (2, 2, 5))
    assert lhs == rhs == 0
    with pytest.raises(ValueError):
        gen_vandermonde_example(1, 3, 1, 2, (1, 2, 3))  # example 1 needs delta = 1
    with pytest.raises(ValueError):
        gen_vandermonde_example(3, 3, 1, 1, (1, 2, 3))


def test_gen_vandermonde_step_cases():
    lhs, rhs = gen_vandermonde_step(4, (1, 2), (1, 1), (1, 2, 3, 5))
    assert lhs == rhs
    lhs, rhs = gen_vandermonde_step(3, (1,), (2,), (Fraction(1, 2), 2, 3))
    assert lhs == rhs
    lhs, rhs = gen_vandermonde_step(4, (), (), (1, 2, 4, 7))
    assert lhs == rhs
    with pytest.raises(ValueError):
        gen_vandermonde_step(3, (2, 1), (1, 1), (1, 2, 3))
