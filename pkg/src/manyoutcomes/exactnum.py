"""Exact numeric substrate: rationals, Bernoulli numbers, Faulhaber power sums.

Every exact quantity in this package is a ``fractions.Fraction`` (always in
canonical reduced form with positive denominator), aliased here as
``Rational``.  Floats ("Real" values) are used only for large-grid sweeps and
Monte Carlo, and are validated to be finite at module boundaries.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial, isfinite

Rational = Fraction

__all__ = [
    "Rational",
    "bernoulli",
    "power_sum",
    "power_sum_brute",
    "double_factorial",
    "ensure_finite",
    "rational_to_str",
    "rational_from_str",
]


# Bernoulli cache: grow-only list guarded by a lock, so concurrent readers see
# a consistent prefix and insertion happens at most once per index.
_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(k: int) -> Fraction:
    """Bernoulli number B_k as an exact Fraction, with B_1 = -1/2.

    Computed from the recurrence sum_{j=0}^{k} C(k+1, j) B_j = 0 for k >= 1.
    The B_1 = -1/2 convention is the unique choice under which Faulhaber's
    expansion reproduces sum_{j=0}^{M} j = M(M+1)/2; results are memoized.
    """
    if k < 0:
        raise ValueError("Bernoulli index must be >= 0")
    if k < len(_bernoulli_cache):
        return _bernoulli_cache[k]
    with _bernoulli_lock:
        while len(_bernoulli_cache) <= k:
            m = len(_bernoulli_cache)
            if m > 1 and m % 2 == 1:
                _bernoulli_cache.append(Fraction(0))
                continue
            acc = Fraction(0)
            for j in range(m):
                bj = _bernoulli_cache[j]
                if bj:
                    acc += comb(m + 1, j) * bj
            _bernoulli_cache.append(-acc / (m + 1))
    return _bernoulli_cache[k]


def power_sum(M: int, n: int) -> Fraction:
    """sum_{j=0}^{M} j**n via the Faulhaber expansion, exactly.

    Uses 0**0 := 1, so power_sum(M, 0) == M + 1.  The expansion is
    (1/(n+1)) * sum_{k=0}^{n} C(n+1, k) B_k (M+1)**(n+1-k).
    """
    if M < 0 or n < 0:
        raise ValueError("power_sum requires M >= 0 and n >= 0")
    if n == 0:
        return Fraction(M + 1)
    base = M + 1
    acc = Fraction(0)
    # descending powers of (M+1); odd Bernoulli terms beyond B_1 vanish
    for k in range(n + 1):
        bk = bernoulli(k)
        if bk:
            acc += comb(n + 1, k) * bk * base ** (n + 1 - k)
    return acc / (n + 1)


def power_sum_brute(M: int, n: int) -> Fraction:
    """Direct-summation oracle for power_sum (0**0 := 1)."""
    if M < 0 or n < 0:
        raise ValueError("power_sum_brute requires M >= 0 and n >= 0")
    if n == 0:
        return Fraction(M + 1)
    return Fraction(sum(j**n for j in range(1, M + 1)))


def double_factorial(n: int) -> int:
    """n!! for n >= -1, with (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError("double_factorial defined here for n >= -1 only")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def ensure_finite(x: float, what: str = "value") -> float:
    """Reject NaN/inf at module boundaries."""
    x = float(x)
    if not isfinite(x):
        raise ValueError(f"{what} must be finite, got {x!r}")
    return x


def rational_to_str(x: Fraction | int) -> str:
    """Serialize as "num/den" (canonical reduced form)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str) -> Fraction:
    """Parse the "num/den" serialization; round-trips losslessly."""
    num, _, den = s.partition("/")
    if not den:
        return Fraction(int(num))
    return Fraction(int(num), int(den))


def falling_product(M: int, j: int) -> int:
    """prod_{p=-1}^{j-1} (M - p) = (M+1) M (M-1) ... (M-j+1)."""
    out = 1
    for p in range(-1, j):
        out *= M - p
    return out


_factorial = factorial  # re-export point for callers that want the cache story in one place
