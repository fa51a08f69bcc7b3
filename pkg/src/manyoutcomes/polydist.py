"""Finite discrete distributions on {0..M} in polynomial form.

A distribution is stored through its unnormalized weights P_j >= 0 together
with (when available) the coefficients a~_0..a~_M of the representation
P_j = sum_n a~_n j**n (0**0 := 1, so P_0 = a~_0).  Coefficients and weights
convert to each other exactly in Rational mode via the closed-form inverse
Vandermonde matrix; Real (float) mode exists for sweep-scale M where exact
arithmetic is infeasible and is always requested explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .exactnum import ensure_finite
from .vandermonde import inverse_closed_form

__all__ = [
    "PolyDist",
    "DivergenceCase",
    "DivergenceReport",
    "from_coeffs",
    "from_probs",
    "moment",
    "variance_exact",
    "variance_beta",
    "variance_asymptotic",
    "continuum_power_variance",
    "sample_mean_variance",
    "coeff_ratio",
    "classify",
]

# relative threshold for order detection in float mode; the inverse-Vandermonde
# conversion amplifies rounding noise, exact mode needs none of this
_ORDER_EPS = 1e-9


class PolyDist:
    """Immutable distribution on outcomes {0..M} with polynomial weight data.

    Use the module-level factories ``from_coeffs`` / ``from_probs`` (or the
    family constructors) rather than instantiating directly.
    """

    __slots__ = ("M", "exact", "coeffs", "probs", "norm", "order", "__dict__")

    def __init__(self, M, exact, coeffs, probs, norm, order):
        self.M = M
        self.exact = exact
        self.coeffs = coeffs
        self.probs = probs
        self.norm = norm
        self.order = order

    @cached_property
    def normalized(self):
        """P_j / N as a tuple (exact) or ndarray (float)."""
        if self.exact:
            return tuple(p / self.norm for p in self.probs)
        return self.probs / self.norm

    @cached_property
    def cdf_table(self) -> np.ndarray:
        """Float cumulative table for inverse-CDF sampling (built once)."""
        p = np.asarray([float(x) for x in self.normalized], dtype=np.float64)
        c = np.cumsum(p)
        c[-1] = 1.0
        return c

    def mean(self):
        return moment(self, 1)

    def variance(self):
        return variance_exact(self)

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"PolyDist(M={self.M}, order={self.order}, mode={mode})"


def _detect_order_exact(coeffs: Sequence[Fraction]) -> int:
    s = 0
    for n, c in enumerate(coeffs):
        if c != 0:
            s = n
    return s


def _detect_order_float(coeffs: np.ndarray) -> int:
    mags = np.abs(coeffs)
    top = mags.max()
    if top == 0.0:
        return 0
    idx = np.nonzero(mags > _ORDER_EPS * top)[0]
    return int(idx[-1]) if idx.size else 0


def from_coeffs(M: int, coeffs, exact: bool = True) -> PolyDist:
    """Build the distribution with weights P_j = sum_n a~_n j**n.

    ``coeffs`` must have M+1 entries.  Raises ValueError if any weight comes
    out negative or all coefficients vanish.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    coeffs = list(coeffs)
    if len(coeffs) != M + 1:
        raise ValueError(f"need M+1 = {M + 1} coefficients, got {len(coeffs)}")
    if exact:
        cs = tuple(Fraction(c) for c in coeffs)
        if all(c == 0 for c in cs):
            raise ValueError("all-zero coefficient vector")
        probs = []
        for j in range(M + 1):
            acc = Fraction(0)
            for c in reversed(cs):
                acc = acc * j + c
            probs.append(acc)
        if any(p < 0 for p in probs):
            raise ValueError("coefficients produce a negative weight")
        norm = sum(probs)
        if norm <= 0:
            raise ValueError("zero total weight")
        return PolyDist(M, True, cs, tuple(probs), norm, _detect_order_exact(cs))
    cs = np.asarray([ensure_finite(c, "coefficient") for c in coeffs], dtype=np.float64)
    if not cs.any():
        raise ValueError("all-zero coefficient vector")
    j = np.arange(M + 1, dtype=np.float64)
    probs = np.zeros(M + 1)
    for c in cs[::-1]:
        probs = probs * j + c
    top = np.abs(probs).max()
    if (probs < -1e-12 * top).any():
        raise ValueError("coefficients produce a negative weight")
    probs = np.maximum(probs, 0.0)
    norm = float(probs.sum())
    if norm <= 0:
        raise ValueError("zero total weight")
    return PolyDist(M, False, cs, probs, norm, _detect_order_float(cs))


def from_probs(M: int, probs, exact: bool = True) -> PolyDist:
    """Recover coefficients from weights: a~_0 = P_0 and, for n >= 1, a~_n is
    row n of the inverse Vandermonde matrix applied to the reduced weights
    (P_j - P_0)/j.  (The documented source formula sums the inverse against
    its first index; the round-trip with from_coeffs, which this method
    satisfies exactly in Rational mode, requires the transposed orientation
    used here.)
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    probs = list(probs)
    if len(probs) != M + 1:
        raise ValueError(f"need M+1 = {M + 1} weights, got {len(probs)}")
    inv = inverse_closed_form(M)
    if exact:
        ps = tuple(Fraction(p) for p in probs)
        if any(p < 0 for p in ps):
            raise ValueError("negative weight")
        norm = sum(ps)
        if norm <= 0:
            raise ValueError("zero total weight")
        reduced = [(ps[j] - ps[0]) / j for j in range(1, M + 1)]
        coeffs = [ps[0]]
        for n in range(1, M + 1):
            coeffs.append(sum(inv.at(n, j) * reduced[j - 1] for j in range(1, M + 1)))
        cs = tuple(coeffs)
        return PolyDist(M, True, cs, ps, norm, _detect_order_exact(cs))
    ps = np.asarray([ensure_finite(p, "weight") for p in probs], dtype=np.float64)
    if (ps < 0).any():
        raise ValueError("negative weight")
    norm = float(ps.sum())
    if norm <= 0:
        raise ValueError("zero total weight")
    inv_f = np.array([[float(e) for e in row] for row in inv.entries])
    reduced = (ps[1:] - ps[0]) / np.arange(1, M + 1)
    coeffs = np.concatenate([[ps[0]], inv_f @ reduced])
    return PolyDist(M, False, coeffs, ps, norm, _detect_order_float(coeffs))


def _float_dist(M: int, probs: np.ndarray, order: int, coeffs=None) -> PolyDist:
    """Internal factory for family generators with log-domain weights."""
    norm = float(probs.sum())
    if norm <= 0:
        raise ValueError("zero total weight")
    return PolyDist(M, False, coeffs, probs, norm, order)


def moment(dist: PolyDist, k: int):
    """<j**k> by direct summation (exact in Rational mode)."""
    if k < 0:
        raise ValueError("moment order must be >= 0")
    if dist.exact:
        return sum(Fraction(j**k) * p for j, p in enumerate(dist.probs)) / dist.norm
    j = np.arange(dist.M + 1, dtype=np.float64)
    return float((j**k * dist.probs).sum() / dist.norm)


def variance_exact(dist: PolyDist):
    """sigma^2 = <j^2> - <j>^2; two-pass central form in float mode."""
    if dist.exact:
        m1 = moment(dist, 1)
        return moment(dist, 2) - m1 * m1
    j = np.arange(dist.M + 1, dtype=np.float64)
    mu = float((j * dist.probs).sum() / dist.norm)
    return float((dist.probs * (j - mu) ** 2).sum() / dist.norm)


def sample_mean_variance(dist: PolyDist, N: int):
    """Variance of the mean of N i.i.d. draws: sigma^2 / N."""
    if N < 1:
        raise ValueError("sample size N must be >= 1")
    return variance_exact(dist) / N


def _faulhaber_poly(n: int) -> dict[int, Fraction]:
    """Coefficients of sum_{j<=M} j**n as a polynomial in (M+1): degree -> coeff."""
    from .exactnum import bernoulli

    if n == 0:
        return {1: Fraction(1)}
    out: dict[int, Fraction] = {}
    for k in range(n + 1):
        bk = bernoulli(k)
        if bk:
            out[n + 1 - k] = Fraction(math.comb(n + 1, k)) * bk / (n + 1)
    return out


def variance_beta(dist: PolyDist) -> Fraction:
    """sigma^2 through the Bernoulli-weighted coefficient convolutions.

    Builds the numerator/denominator polynomials in (M+1) whose coefficients
    are double convolutions of the a~_n with Faulhaber/Bernoulli factors, then
    evaluates the ratio.  Exact cross-check path: must equal variance_exact.
    The power-sum expansions are truncated at k <= n (the top Bernoulli term
    is excluded), which is what makes the identity exact rather than
    approximate near n ~ M.
    """
    if not dist.exact:
        raise ValueError("variance_beta is the exact cross-check; Rational mode only")
    if dist.M > 40:
        raise ValueError("variance_beta quadruple convolution capped at M <= 40")
    M = dist.M
    nz = [(n, c) for n, c in enumerate(dist.coeffs) if c != 0]
    beta1: dict[int, Fraction] = {}
    beta2: dict[int, Fraction] = {}
    fp = {n: _faulhaber_poly(n) for n in range(M + 3)}
    for n1, c1 in nz:
        for n2, c2 in nz:
            w = c1 * c2
            for d1, f1 in fp[n1].items():
                for d2, f2 in fp[n2 + 2].items():
                    beta1[d1 + d2] = beta1.get(d1 + d2, Fraction(0)) + w * f1 * f2
            for d1, f1 in fp[n1 + 1].items():
                for d2, f2 in fp[n2 + 1].items():
                    beta1[d1 + d2] = beta1.get(d1 + d2, Fraction(0)) - w * f1 * f2
            for d1, f1 in fp[n1].items():
                for d2, f2 in fp[n2].items():
                    beta2[d1 + d2] = beta2.get(d1 + d2, Fraction(0)) + w * f1 * f2
    base = Fraction(M + 1)
    num = sum(c * base**d for d, c in beta1.items())
    den = sum(c * base**d for d, c in beta2.items())
    return num / den


def variance_asymptotic(s, ratio, M) -> float:
    """Two-leading-order variance for an order-s family:

    ((s+1) / ((s+3)(s+2)^2)) * [M^2 + 2M*ratio/s + M + 2*ratio/s],
    with ratio = a~_{s-1}/a~_s.  s may be non-integer (e.g. s ~ sqrt(M)).
    """
    s = float(s)
    if s <= 0:
        raise ValueError("asymptotic form assumes order s > 0")
    ratio = ensure_finite(float(ratio), "ratio")
    M = float(M)
    bracket = M * M + 2.0 * M * ratio / s + M + 2.0 * ratio / s
    return (s + 1.0) / ((s + 3.0) * (s + 2.0) ** 2) * bracket


def continuum_power_variance(M, n):
    """Variance of the *continuous* density x**n on [0, M]:
    M^2 (n+1) / ((n+3)(n+2)^2).

    This is the value the exponent-n weight family is often compared against;
    it agrees with the discrete variance only while n stays small relative
    to M (see the family docs for where that breaks down).
    """
    M = float(M)
    n = float(n)
    return M * M * (n + 1.0) / ((n + 3.0) * (n + 2.0) ** 2)


def coeff_ratio(dist: PolyDist):
    """a~_{s-1}/a~_s for the detected order s; None when s = 0."""
    s = dist.order
    if s == 0:
        return None
    if dist.coeffs is None:
        raise ValueError("distribution carries no coefficient data")
    return dist.coeffs[s - 1] / dist.coeffs[s]


class DivergenceCase(str, Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"
    CASE4 = "case4"
    ORDER_ZERO = "constant-order-zero"


@dataclass(frozen=True)
class DivergenceReport:
    case_label: DivergenceCase
    m_grid: tuple[int, ...]
    ratio_sequence: tuple[float, ...]
    predicted_exponent: float

    def to_dict(self) -> dict:
        return {
            "case": self.case_label.value,
            "m_grid": list(self.m_grid),
            "ratio_sequence": list(self.ratio_sequence),
            "predicted_exponent": self.predicted_exponent,
        }


# classifier thresholds; the source cases are stated only as limits, so the
# finite-grid operationalization is necessarily a heuristic.  |r| counts as
# unbounded when it grows strictly along the grid with a log-log slope of at
# least _GROWTH_SLOPE and at least a factor-2 overall rise (a pure
# median-multiple test cannot separate ~M growth from boundedness on the
# short exact-mode grids the high-order families allow).
_GROWTH_SLOPE = 0.25
_GROWTH_FRACTION = 0.5


def classify(family: Callable[[int], PolyDist], M_grid: Sequence[int]) -> DivergenceReport:
    """Label the family's divergence regime from the ratio r(M) = (a~_{s-1}/a~_s)/s.

    case1: |r| bounded (no sustained growth trend along the grid);
    case2: |r| unbounded but 2|r|/M below 1/2 at the largest grid point;
    case3/case4: r -> +/-inf with 2|r|/M >= 1/2 there.
    Also fits the exponent alpha of variance ~ M^alpha on the grid.
    """
    grid = [int(m) for m in M_grid]
    if len(grid) < 4 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("M_grid must be strictly increasing with at least 4 points")
    ratios: list[float] = []
    variances: list[float] = []
    orders: list[int] = []
    for m in grid:
        dist = family(m)
        orders.append(dist.order)
        variances.append(float(variance_exact(dist)))
        if dist.order == 0:
            ratios.append(0.0)
        else:
            ratios.append(float(coeff_ratio(dist)) / dist.order)
    lnm = np.log(np.asarray(grid, dtype=np.float64))
    lnv = np.log(np.asarray(variances, dtype=np.float64))
    exponent = float(np.polyfit(lnm, lnv, 1)[0])
    if all(s == 0 for s in orders):
        return DivergenceReport(DivergenceCase.ORDER_ZERO, tuple(grid), tuple(ratios), exponent)
    if any(s == 0 for s in orders):
        raise ValueError("order s = 0 at some but not all grid points; classifier undefined")
    r_last = ratios[-1]
    abs_r = np.abs(np.asarray(ratios))
    growing = bool(np.all(np.diff(abs_r) > 0)) and abs_r[-1] >= 2.0 * abs_r[0] > 0
    if growing:
        slope = float(np.polyfit(lnm, np.log(abs_r), 1)[0])
        growing = slope >= _GROWTH_SLOPE
    if not growing:
        label = DivergenceCase.CASE1
    elif 2.0 * abs(r_last) / grid[-1] >= _GROWTH_FRACTION:
        label = DivergenceCase.CASE3 if r_last > 0 else DivergenceCase.CASE4
    else:
        label = DivergenceCase.CASE2
    return DivergenceReport(label, tuple(grid), tuple(ratios), exponent)
