"""Distribution of the sample mean: exact convolution CDF and percentiles.

For Z = (sum of N draws)/N - mu, the exact tail P(Z > z) is a partial sum of
the N-fold convolution of the normalized pmf.  The truncated-series tail
(``cdf_series_approx``) evaluates the companion expansion built from the
normalized autoconvolution of the coefficient sequence a_n = a~_n n!; it
rests on a large-argument simplex-sum approximation and is exposed as a
diagnostic only (it is exact at N = 1, which the tests pin down).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, floor

import numpy as np

from .polydist import PolyDist, moment

__all__ = [
    "SampleSumPmf",
    "convolve_pmf",
    "cdf_exact",
    "autoconvolution",
    "autoconvolution_brute",
    "cdf_series_approx",
    "percentile",
]

_FLOAT_CAP = 10**6
_EXACT_CAP = 10**4


@dataclass(frozen=True)
class SampleSumPmf:
    """Exact pmf of the sum of N draws, supported on 0..N*M."""

    N: int
    M: int
    exact: bool
    probs: tuple  # Fractions (exact) or ndarray (float)

    def tail_from(self, l0: int) -> Fraction | float:
        """P(S >= l0)."""
        if l0 <= 0:
            return Fraction(1) if self.exact else 1.0
        if self.exact:
            return sum(self.probs[l0:], Fraction(0))
        return float(np.sum(self.probs[l0:]))


def convolve_pmf(dist: PolyDist, N: int) -> SampleSumPmf:
    """N-fold convolution of the normalized pmf by iterated pairwise convolution."""
    if N < 1:
        raise ValueError("N must be >= 1")
    size = N * dist.M
    if dist.exact:
        if size > _EXACT_CAP:
            raise ValueError(f"exact convolution capped at N*M <= {_EXACT_CAP}")
        base = list(dist.normalized)
        acc = base
        for _ in range(N - 1):
            out = [Fraction(0)] * (len(acc) + dist.M)
            for i, a in enumerate(acc):
                if a:
                    for j, b in enumerate(base):
                        if b:
                            out[i + j] += a * b
            acc = out
        return SampleSumPmf(N, dist.M, True, tuple(acc))
    if size > _FLOAT_CAP:
        raise ValueError(f"float convolution capped at N*M <= {_FLOAT_CAP}")
    base = np.asarray(dist.normalized, dtype=np.float64)
    acc = base
    for _ in range(N - 1):
        acc = np.convolve(acc, base)
    return SampleSumPmf(N, dist.M, False, acc)


def _strict_tail_start(x) -> int:
    """Smallest integer l with l > x (exact for Fraction arguments)."""
    if isinstance(x, Fraction):
        return int(floor(x)) + 1
    fx = floor(x)
    # float boundary: treat values within 1e-9 of an integer as that integer
    if abs(x - round(x)) < 1e-9:
        fx = int(round(x))
    return int(fx) + 1


def cdf_exact(dist: PolyDist, N: int, z, pmf: SampleSumPmf | None = None):
    """P(Z > z) with Z = S_N/N - mu, strict boundary: sums pmf entries with
    l > (z + mu) N (ceiling on non-integer bounds, next integer on integer ones)."""
    if pmf is None:
        pmf = convolve_pmf(dist, N)
    mu = moment(dist, 1)
    if dist.exact:
        x = (Fraction(z) + mu) * N
    else:
        x = (float(z) + mu) * N
    l0 = _strict_tail_start(x)
    if l0 <= 0:
        return Fraction(1) if dist.exact else 1.0
    if l0 > N * dist.M:
        return Fraction(0) if dist.exact else 0.0
    return pmf.tail_from(l0)


def autoconvolution(coeffs, N: int, p: int) -> Fraction:
    """Normalized N-th autoconvolution of the coefficient sequence:

    (1/C(N-1+p, p)) * sum over compositions n_1+..+n_N = p of prod a_{n_q},
    with a_n = a~_n * n! (the n!-scaled polynomial coefficients).
    Computed as the x**p coefficient of (sum_n a_n x**n)**N.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    a = [Fraction(c) * factorial(n) for n, c in enumerate(coeffs)]
    Mloc = len(a) - 1
    if not 0 <= p <= N * Mloc:
        raise ValueError(f"p must lie in 0..{N * Mloc}")
    acc = a
    for _ in range(N - 1):
        out = [Fraction(0)] * (len(acc) + Mloc)
        for i, u in enumerate(acc):
            if u:
                for j, v in enumerate(a):
                    if v:
                        out[i + j] += u * v
        acc = out
    return acc[p] / comb(N - 1 + p, p)


def autoconvolution_brute(coeffs, N: int, p: int) -> Fraction:
    """Composition-enumeration oracle for autoconvolution (small sizes)."""
    a = [Fraction(c) * factorial(n) for n, c in enumerate(coeffs)]
    Mloc = len(a) - 1

    def rec(q: int, remaining: int) -> Fraction:
        if q == N - 1:
            return a[remaining] if remaining <= Mloc else Fraction(0)
        return sum((a[t] * rec(q + 1, remaining - t) for t in range(min(Mloc, remaining) + 1)), Fraction(0))

    return rec(0, p) / comb(N - 1 + p, p)


def cdf_series_approx(dist: PolyDist, N: int, z) -> float:
    """Truncated-series tail approximation of P(Z > z):

    (1/Norm**N) sum_{l > (z+mu)N}^{MN} l**(N-1)/(N-1)! * sum_p a^{xN}_p l**p / p!.

    Diagnostic only: the inner resummation drops the per-draw upper supports
    and uses a simplex-sum form valid for large arguments, so no accuracy is
    promised for N >= 2 (at N = 1 it reduces to the exact tail).  Evaluated
    in exact rational arithmetic and capped at N*M <= 2000.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if dist.coeffs is None:
        raise ValueError("series approximation needs coefficient data")
    size = N * dist.M
    if size > 2000:
        raise ValueError("series approximation capped at N*M <= 2000")
    coeffs = [Fraction(c) for c in dist.coeffs]
    a = [c * factorial(n) for n, c in enumerate(coeffs)]
    # x**p coefficients of (sum a_n x**n)**N, kept as the raw (unnormalized) values
    acc = a
    for _ in range(N - 1):
        out = [Fraction(0)] * (len(acc) + dist.M)
        for i, u in enumerate(acc):
            if u:
                for j, v in enumerate(a):
                    if v:
                        out[i + j] += u * v
        acc = out
    nonzero = [(p, c) for p, c in enumerate(acc) if c]
    mu = moment(dist, 1) if dist.exact else Fraction(float(moment(dist, 1)))
    x = (Fraction(z) + mu) * N
    l0 = max(_strict_tail_start(x), 0)
    norm = Fraction(dist.norm) if not dist.exact else dist.norm
    total = Fraction(0)
    fN1 = factorial(N - 1)
    for l in range(l0, size + 1):
        inner = Fraction(0)
        for p, c in nonzero:
            inner += c * Fraction(l**p, factorial(p))
        total += Fraction(l ** (N - 1), fN1) * inner
    return float(total / norm**N)


def percentile(dist: PolyDist, N: int, p: float, pmf: SampleSumPmf | None = None):
    """The value z_p with P(Z > z_p) = p/100, resolved on the attainable
    lattice z = l/N - mu: smallest lattice value whose strict tail drops to
    or below p/100 (ties toward smaller z)."""
    if not 0 < p < 100:
        raise ValueError("percentile level must lie strictly between 0 and 100")
    if pmf is None:
        pmf = convolve_pmf(dist, N)
    mu = moment(dist, 1)
    if dist.exact:
        # decimal levels are taken at face value: 33.33 means 3333/10000
        target = (Fraction(p) if not isinstance(p, float) else Fraction(str(p))) / 100
    else:
        target = p / 100.0
    size = N * dist.M
    # P(Z > l/N - mu) = P(S > l) = tail_from(l + 1), non-increasing in l
    for l in range(0, size + 1):
        tail = pmf.tail_from(l + 1)
        if tail <= target:
            if dist.exact:
                return Fraction(l, N) - mu
            return l / N - float(mu)
    raise AssertionError("tail never dropped below target")  # unreachable: tail at top is 0
