"""Named weight families: fixed power law, sqrt-order power, geometric decay,
and the concentrating high-power family used as the convergence counterexample.

Power-type weights at sweep scale are computed in the log domain relative to
the top outcome, w_j = exp(s (ln j - ln M)) = (j/M)**s, because raw powers
j**s overflow float64 long before the grids of interest.  Rescaling by the
positive constant M**(-s) leaves the normalized distribution unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import exp, factorial, sqrt

import numpy as np

from .polydist import PolyDist, _float_dist, from_coeffs

__all__ = [
    "FamilySpec",
    "power_law",
    "sqrt_power",
    "exponential",
    "exp_variance_approx",
    "exponential_taylor_coeffs",
    "counterexample",
    "family_from_name",
]


def _log_power_weights(M: int, s: float) -> np.ndarray:
    j = np.arange(M + 1, dtype=np.float64)
    w = np.zeros(M + 1)
    if s == 0:
        return np.ones(M + 1)
    w[1:] = np.exp(s * (np.log(j[1:]) - np.log(float(M))))
    return w


def power_law(M: int, s: int, exact: bool = False) -> PolyDist:
    """Weights P_j = j**s (single coefficient a~_s = 1)."""
    if not 1 <= s <= M:
        raise ValueError("power law requires 1 <= s <= M")
    if exact:
        coeffs = [Fraction(0)] * (M + 1)
        coeffs[s] = Fraction(1)
        return from_coeffs(M, coeffs, exact=True)
    # Log-domain weights carry an overall M**-s rescale, so the stored float
    # coefficient vector is defined up to that positive scale; order detection
    # and coefficient ratios are scale-invariant, which is all float mode uses.
    coeffs = np.zeros(M + 1)
    coeffs[s] = 1.0
    return _float_dist(M, _log_power_weights(M, s), order=s, coeffs=coeffs)


def round_half_up(x: float) -> int:
    from math import floor

    return int(floor(x + 0.5))


def sqrt_power(M: int, gamma: float, exact: bool = False) -> PolyDist:
    """Weights P_j = j**s* with order s* = round(gamma * sqrt(M)), ties up."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    s_star = round_half_up(gamma * sqrt(M))
    if not 1 <= s_star <= M:
        raise ValueError(f"rounded order {s_star} outside [1, {M}]")
    return power_law(M, s_star, exact=exact)


def exponential(M: int, alpha: float) -> PolyDist:
    """Geometrically decaying pmf P-bar_j = e**(-j alpha) (1-e**-alpha)/(1-e**-(M+1)alpha).

    Float mode only: the weights are irrational.  The polynomial-coefficient
    view of this family is the truncated Taylor vector (see
    ``exponential_taylor_coeffs``), which is an approximation and is exposed
    separately rather than being used to build the distribution.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    j = np.arange(M + 1, dtype=np.float64)
    w = np.exp(-alpha * j)
    return _float_dist(M, w, order=M, coeffs=None)


def exponential_taylor_coeffs(M: int, alpha: float) -> tuple[float, ...]:
    """Coefficient view a~_n = (-alpha)**n / n! for n = 0..M (M <= 20 only).

    The truncation is a poor pointwise approximation once alpha*M is large,
    which is why the pmf view is primary; capped at M <= 20.
    """
    if not 1 <= M <= 20:
        raise ValueError("Taylor coefficient view provided for M <= 20 only")
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    return tuple((-alpha) ** n / factorial(n) for n in range(M + 1))


def exp_variance_approx(M: int, alpha: float) -> float:
    """Truncated-expansion variance of the decaying family:

    (1/alpha^2) (1 - e^{-aM}(1 + aM + (aM)^2/2 + (aM)^3/6)) / (1 - e^{-aM}(1 + aM)).
    Tends to 1/alpha^2 as M grows.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    am = alpha * M
    damp = exp(-am)
    num = 1.0 - damp * (1.0 + am + am * am / 2.0 + am**3 / 6.0)
    den = 1.0 - damp * (1.0 + am)
    return num / den / (alpha * alpha)


def exp_variance_continuum(M: int, alpha: float) -> float:
    """Variance of the continuous density e**(-alpha x) on [0, M] (incomplete-
    gamma moments); the reference the truncated form actually converges to."""
    am = alpha * M
    damp = exp(-am)
    i0 = (1.0 - damp) / alpha
    i1 = (1.0 - damp * (1.0 + am)) / alpha**2
    i2 = (2.0 - damp * (2.0 + 2.0 * am + am * am)) / alpha**3
    mu = i1 / i0
    return i2 / i0 - mu * mu


def counterexample(M: int, x: float = 2.0, exact: bool = False) -> PolyDist:
    """Concentrating family P_j = j**(M**x), default x = 2.

    Weights are computed as (j/M)**(M**x) in the log domain.  Nearly all mass
    sits on the top outcome once M**x >> M, so the variance *decreases* with
    M.  Exact mode (integer weights j**(M**x), integer exponent) is available
    at small M so the coefficient decomposition can be taken exactly.
    """
    if M < 2:
        raise ValueError("M must be >= 2")
    if x <= 1.0:
        raise ValueError("exponent power x must exceed 1")
    n = M**x
    if exact:
        if x != int(x):
            raise ValueError("exact mode needs an integer exponent M**x")
        if M > 60:
            raise ValueError("exact counterexample capped at M <= 60")
        from .polydist import from_probs

        return from_probs(M, [Fraction(j ** int(n)) for j in range(M + 1)], exact=True)
    return _float_dist(M, _log_power_weights(M, float(n)), order=M, coeffs=None)


@dataclass(frozen=True)
class FamilySpec:
    """Parsed family selector shared by the CLI subcommands.

    kind: one of "power" (s), "sqrt" (gamma), "exp" (alpha), "counter" (x),
    or "custom" with an explicit coefficient vector.
    """

    kind: str
    s: int | None = None
    gamma: float | None = None
    alpha: float | None = None
    x: float = 2.0
    coeffs: tuple | None = None

    def build(self, M: int, exact: bool = False) -> PolyDist:
        if self.kind == "power":
            if self.s is None:
                raise ValueError("power family needs --s")
            return power_law(M, self.s, exact=exact)
        if self.kind == "sqrt":
            if self.gamma is None:
                raise ValueError("sqrt family needs --gamma")
            return sqrt_power(M, self.gamma, exact=exact)
        if self.kind == "exp":
            if self.alpha is None:
                raise ValueError("exp family needs --alpha")
            return exponential(M, self.alpha)
        if self.kind == "counter":
            return counterexample(M, x=self.x, exact=exact)
        if self.kind == "custom":
            if self.coeffs is None:
                raise ValueError("custom family needs coefficients")
            return from_coeffs(M, list(self.coeffs), exact=exact)
        raise ValueError(f"unknown family kind {self.kind!r}")

    def label(self) -> str:
        params = {
            "power": f"s={self.s}",
            "sqrt": f"gamma={self.gamma}",
            "exp": f"alpha={self.alpha}",
            "counter": f"x={self.x}",
            "custom": "coeffs",
        }[self.kind]
        return f"{self.kind}({params})"


def family_from_name(kind: str, s=None, gamma=None, alpha=None, x=2.0, coeffs=None) -> FamilySpec:
    kind = kind.lower()
    if kind not in {"power", "sqrt", "exp", "counter", "custom"}:
        raise ValueError(f"unknown family kind {kind!r}")
    return FamilySpec(
        kind=kind,
        s=None if s is None else int(s),
        gamma=None if gamma is None else float(gamma),
        alpha=None if alpha is None else float(alpha),
        x=float(x),
        coeffs=None if coeffs is None else tuple(coeffs),
    )
