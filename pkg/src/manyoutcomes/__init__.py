"""Exact inverse-Vandermonde machinery, polynomial representations of finite
discrete distributions, and the scaling of the sample-mean variance with the
number of outcomes."""

__version__ = "0.1.0"

from .exactnum import Rational, bernoulli, power_sum, power_sum_brute
from .families import counterexample, exp_variance_approx, exponential, power_law, sqrt_power
from .polydist import (
    DivergenceCase,
    DivergenceReport,
    PolyDist,
    classify,
    from_coeffs,
    from_probs,
    moment,
    sample_mean_variance,
    variance_asymptotic,
    variance_beta,
    variance_exact,
)
from .vandermonde import (
    ExactMatrix,
    inverse_closed_form,
    inverse_gauss,
    inverse_harmonic_form,
    p_polynomials,
    simple_row,
    vandermonde_matrix,
)

__all__ = [
    "Rational",
    "bernoulli",
    "power_sum",
    "power_sum_brute",
    "PolyDist",
    "DivergenceCase",
    "DivergenceReport",
    "from_coeffs",
    "from_probs",
    "moment",
    "variance_exact",
    "variance_beta",
    "variance_asymptotic",
    "sample_mean_variance",
    "classify",
    "power_law",
    "sqrt_power",
    "exponential",
    "exp_variance_approx",
    "counterexample",
    "ExactMatrix",
    "vandermonde_matrix",
    "inverse_closed_form",
    "inverse_harmonic_form",
    "inverse_gauss",
    "p_polynomials",
    "simple_row",
    "__version__",
]
