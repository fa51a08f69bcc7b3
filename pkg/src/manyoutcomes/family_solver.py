"""Distributions whose polynomial coefficients vanish beyond a chosen order s.

Requiring a~_n = 0 for n = s+1..M pins the reduced weights y_j = (P_j-P_0)/j
to a degree-(s-1) polynomial in j, so the full weight vector is the unique
degree-s extension of the anchors P_0..P_s.  ``solve_constrained`` obtains it
by exact elimination of the actual constraint rows (rows n > s of the inverse
Vandermonde matrix applied to the reduced weights); ``lagrange_extension``
is the closed-form interpolation oracle the tests compare against, and
``mode_basis`` carries the per-anchor basis vectors V_{q,j} of the family.

A second, formula-level layer (``s_coefficient``, ``matrix_element``,
``chain_mode_basis``) implements the *printed* eliminated system and its
alternating chain expansion verbatim.  Its rows turn out to be signed
Stirling-first-kind vectors, which annihilate geometric sequences q**j
rather than polynomials -- the documented source formulas carry a transposed
index convention -- so this layer is kept self-consistent (substitution and
expansion paths agree exactly) but is not used to build distributions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .vandermonde import inverse_closed_form, p_polynomials

__all__ = [
    "ModeBasis",
    "s_coefficient",
    "s_coefficient_brute",
    "q_poly_check",
    "matrix_element",
    "solve_constrained",
    "lagrange_extension",
    "mode_basis",
    "chain_mode_basis",
    "mode_distribution_weights",
    "signed_variance",
    "mode_variance_leading_coefficients",
]

_EXPANSION_CAP = 22  # the explicit chain expansion has 2**(j-q)-ish terms


def s_coefficient(M: int, s: int, x: int) -> Fraction:
    """Complete homogeneous sum S^M_s(x) = sum over compositions of x of
    prod_{q=s+1}^{M} q**theta_q, via the alternating closed form

    ((-1)**(M-s-1)/(M-s-1)!) sum_q (-1)**q C(M-s-1, q) (s+q+1)**(x+M-s-1).
    """
    if x < 0:
        return Fraction(0)
    if not 0 <= s <= M:
        raise ValueError("need 0 <= s <= M")
    if s == M:
        # empty variable set: h_0 = 1, h_x = 0 for x > 0
        return Fraction(int(x == 0))
    d = M - s - 1
    acc = 0
    for q in range(d + 1):
        term = comb(d, q) * (s + q + 1) ** (x + d)
        acc += -term if (q % 2) else term
    if d % 2:
        acc = -acc
    return Fraction(acc, factorial(d))


def s_coefficient_brute(M: int, s: int, x: int) -> Fraction:
    """Composition-enumeration oracle for s_coefficient (small x only)."""
    vals = list(range(s + 1, M + 1))
    if not vals:
        return Fraction(int(x == 0))

    def rec(idx: int, remaining: int) -> int:
        if idx == len(vals) - 1:
            return vals[idx] ** remaining
        return sum(vals[idx] ** t * rec(idx + 1, remaining - t) for t in range(remaining + 1))

    return Fraction(rec(0, x))


# tabulated Q rows for the product form S = prod_{q=0}^{x-1}(M-s+q) * sum_q M**(x-q) Q_q^x(s)
def _q_row(x: int, s: int) -> tuple[Fraction, ...]:
    s = Fraction(s)
    if x == 0:
        return (Fraction(1),)
    if x == 1:
        return (Fraction(1, 2), (1 + s) / 2)
    if x == 2:
        return (Fraction(1, 8), (6 * s + 7) / 24, (3 * s * s + 5 * s + 2) / 24)
    if x == 3:
        return (
            Fraction(1, 48),
            (3 * s + 4) / 48,
            (3 * s * s + 6 * s + 3) / 48,
            (s**3 + 2 * s * s + s) / 48,
        )
    raise ValueError("Q rows tabulated for x <= 3 only")


def q_poly_check(x: int, s: int, M_values=None) -> dict:
    """Verify the product form against s_coefficient for the tabulated Q row.

    Returns {"q_row": .., "checks": [(M, product_value, direct_value), ..],
    "ok": bool}; raises for x > 3 (rows beyond the table are not implemented).
    """
    row = _q_row(x, s)
    if M_values is None:
        M_values = range(max(s + 1, x + 1), max(s + 1, x + 1) + 8)
    checks = []
    ok = True
    for M in M_values:
        prefactor = Fraction(1)
        for q in range(x):
            prefactor *= M - s + q
        total = prefactor * sum(Fraction(M) ** (x - q) * row[q] for q in range(x + 1))
        direct = s_coefficient(M, s, x)
        checks.append((M, total, direct))
        ok = ok and total == direct
    return {"q_row": row, "checks": checks, "ok": ok}


@lru_cache(maxsize=None)
def _h_table(M: int) -> tuple[tuple[int, ...], ...]:
    """h[i][x] = S^M_{i-1}(x) = complete homogeneous sum of degree x over {i..M},
    for i = 1..M+1 and x = 0..M-1; integer DP h[i][x] = h[i+1][x] + i*h[i][x-1]."""
    xmax = M - 1
    table: list[tuple[int, ...]] = [tuple()] * (M + 2)
    table[M + 1] = tuple(1 if x == 0 else 0 for x in range(xmax + 1))
    for i in range(M, 0, -1):
        above = table[i + 1]
        row = [1] + [0] * xmax
        for x in range(1, xmax + 1):
            row[x] = above[x] + i * row[x - 1]
        table[i] = tuple(row)
    return tuple(table)


@lru_cache(maxsize=200_000)
def matrix_element(i: int, j: int, M: int) -> int:
    """Printed eliminated-system entry for j <= i:

        (i, j) = sum_{p=M+j-i}^{M} (-1)**p P_p(M) S^M_{i-1}(p-j+i-M),

    with (i, i) = (-1)**M on the diagonal.  These integers are (-1)**M times
    the signed Stirling numbers of the first kind s(i, j); the row
    sum_j (i, j) y_j therefore annihilates geometric sequences y_j = q**(j-1)
    with q = 1..i-1 (not polynomial ones), see the module docstring.
    """
    if not 1 <= j <= i <= M:
        raise ValueError("need 1 <= j <= i <= M")
    pvals = p_polynomials(M).values  # pvals[k] = P_{M-k}(M)
    h = _h_table(M)[i]
    acc = 0
    for p in range(M + j - i, M + 1):
        term = pvals[M - p] * h[p - j + i - M]
        acc += -term if (p % 2) else term
    return acc


# ---------------------------------------------------------------------------
# the actual constrained family: exact solve of the coefficient constraints


@lru_cache(maxsize=64)
def _unit_mode_matrix(M: int, s: int) -> tuple[tuple[Fraction, ...], ...]:
    """V[q-1][j-s-1] = y_j of the solution with unit anchors y_t = [t == q].

    Obtained by one exact Gaussian elimination of the constraint rows
    (rows n = s+1..M of the inverse Vandermonde matrix) with all s unit
    right-hand sides carried simultaneously.
    """
    if not 1 <= s < M:
        raise ValueError("need 1 <= s < M")
    inv = inverse_closed_form(M)
    k = M - s
    # unknown block: columns j = s+1..M; RHS: -(anchor columns) for each unit anchor
    rows = []
    for n in range(s + 1, M + 1):
        r = inv.row(n)
        lhs = [r[j - 1] for j in range(s + 1, M + 1)]
        rhs = [-r[q - 1] for q in range(1, s + 1)]
        rows.append(lhs + rhs)
    width = k + s
    # forward elimination with partial (first nonzero) pivoting
    for col in range(k):
        piv = next((r for r in range(col, k) if rows[r][col] != 0), None)
        if piv is None:
            raise ValueError("constraint system unexpectedly singular")
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
        prow = rows[col]
        pval = prow[col]
        for r in range(col + 1, k):
            f = rows[r][col] / pval
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], prow)]
    # back substitution, one pass for all s right-hand sides
    sol = [[Fraction(0)] * s for _ in range(k)]
    for r in range(k - 1, -1, -1):
        for t in range(s):
            acc = rows[r][k + t]
            for c in range(r + 1, k):
                acc -= rows[r][c] * sol[c][t]
            sol[r][t] = acc / rows[r][r]
    return tuple(tuple(sol[r][t] for r in range(k)) for t in range(s))


def solve_constrained(M: int, s: int, p0, anchors) -> tuple[Fraction, ...]:
    """Full unnormalized vector (P_0..P_M) through the anchors P_0, (P_q)_{q<=s}
    with every coefficient beyond order s equal to zero, by exact elimination.

    Degenerate anchors (all equal to P_0) give the constant extension.  The
    result may carry signed entries; hand it to ``polydist.from_probs`` when a
    genuine distribution is required.
    """
    p0 = Fraction(p0)
    anchors = [Fraction(a) for a in anchors]
    if len(anchors) != s:
        raise ValueError(f"need s = {s} anchor weights")
    y_anchor = [(a - p0) / q for q, a in enumerate(anchors, start=1)]
    modes = _unit_mode_matrix(M, s)
    out = [p0] + [p0 + q * y_anchor[q - 1] for q in range(1, s + 1)]
    for j in range(s + 1, M + 1):
        yj = sum(modes[q - 1][j - s - 1] * y_anchor[q - 1] for q in range(1, s + 1))
        out.append(p0 + j * yj)
    return tuple(out)


def lagrange_extension(M: int, s: int, p0, anchors) -> tuple[Fraction, ...]:
    """Independent oracle: the unique degree-s interpolant through
    (0, P_0), (1, P_1), .., (s, P_s) evaluated on 0..M."""
    pts = [Fraction(p0)] + [Fraction(a) for a in anchors]
    if len(pts) != s + 1:
        raise ValueError(f"need s = {s} anchor weights")
    out = list(pts)
    for j in range(s + 1, M + 1):
        acc = Fraction(0)
        for q in range(s + 1):
            term = pts[q]
            for k in range(s + 1):
                if k != q:
                    term *= Fraction(j - k, q - k)
            acc += term
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class ModeBasis:
    """Mode vectors V_q = (V_{q,j})_{j=s+1..M} with y_j = sum_q V_{q,j} y_q."""

    M: int
    s: int
    modes: tuple[tuple[Fraction, ...], ...]

    def mode(self, q: int) -> tuple[Fraction, ...]:
        if not 1 <= q <= self.s:
            raise IndexError(f"mode index {q} outside 1..{self.s}")
        return self.modes[q - 1]


def mode_basis(M: int, s: int) -> ModeBasis:
    """Basis of the constrained family: mode q is the solution with unit
    reduced anchors y_t = [t == q].  Reconstructed members satisfy
    P_j = P_0 + sum_q V_{q,j} (j/q) (P_q - P_0) and decompose with a~_n = 0
    for n > s, exactly."""
    return ModeBasis(M, s, _unit_mode_matrix(M, s))


def chain_mode_basis(M: int, s: int, method: str = "substitution") -> ModeBasis:
    """The printed alternating-chain construction, kept as a formula layer.

    "substitution": forward substitution on the matrix_element rows with
    diagonal (-1)**M.  "expansion": the explicit sum over descending chains
    with 2**(j-q)-ish terms (capped at j - q <= 22).  The two agree exactly;
    neither solves the polynomial-coefficient constraint (see module doc).
    """
    if not 1 <= s < M:
        raise ValueError("need 1 <= s < M")
    if method == "substitution":
        sign = -1 if M % 2 == 0 else 1  # y_n = (-1)**(M+1) * row sum
        modes = []
        for q in range(1, s + 1):
            y: list[Fraction] = [Fraction(int(t == q)) for t in range(1, s + 1)]
            for n in range(s + 1, M + 1):
                acc = Fraction(0)
                for j in range(1, n):
                    e = matrix_element(n, j, M)
                    if e:
                        acc += e * y[j - 1]
                y.append(sign * acc)
            modes.append(tuple(y[s:]))
        return ModeBasis(M, s, tuple(modes))
    if method == "expansion":
        sign_unit = -1 if (M - 1) % 2 else 1  # (-1)**(M-1)
        modes = []
        for q in range(1, s + 1):
            vec = []
            for j in range(s + 1, M + 1):
                if j - q > _EXPANSION_CAP:
                    raise ValueError(
                        f"chain expansion for (q={q}, j={j}) exceeds the 2**{_EXPANSION_CAP} term cap"
                    )
                vec.append(_chain_entry(M, q, j, s, sign_unit))
            modes.append(tuple(vec))
        return ModeBasis(M, s, tuple(modes))
    raise ValueError(f"unknown method {method!r}")


def _chain_entry(M: int, q: int, j: int, s: int, sign_unit: int) -> Fraction:
    """sum over descending chains j > j_0 > .. > j_{t-1} > s (interior drawn
    from {s+1..j-1}) of (-1)**((t+1)(M-1)) prod (j_l, j_{l+1}), ends at q."""
    interior = list(range(j - 1, s, -1))
    total = 0
    for mask in range(1 << len(interior)):
        chain = [j] + [interior[b] for b in range(len(interior)) if mask >> b & 1] + [q]
        prod = 1
        for a, b in zip(chain, chain[1:]):
            prod *= matrix_element(a, b, M)
        t = len(chain) - 2
        sgn = sign_unit ** (t + 1)
        total += sgn * prod
    return Fraction(total)


def mode_distribution_weights(M: int, s: int, q: int, basis: ModeBasis | None = None):
    """Signed weight vector of the q-th mode: V_{q,j} * (j/q) on j = s+1..M.

    These are the per-mode "distributions" whose variance is tracked against
    M; they coincide with the Lagrange basis polynomial values ell_q(j) for
    nodes {0..s}.  Entries may be signed, so this stays out of PolyDist.
    """
    if basis is None:
        basis = mode_basis(M, s)
    v = basis.mode(q)
    return tuple(v[j - s - 1] * Fraction(j, q) for j in range(s + 1, M + 1))


def signed_variance(support, weights) -> Fraction:
    """Variance functional for a signed weight vector with nonzero total."""
    weights = [Fraction(w) for w in weights]
    total = sum(weights)
    if total == 0:
        raise ValueError("signed weights must have nonzero total")
    m1 = sum(Fraction(j) * w for j, w in zip(support, weights)) / total
    m2 = sum(Fraction(j * j) * w for j, w in zip(support, weights)) / total
    return m2 - m1 * m1


def mode_variance_leading_coefficients(s: int, M_values) -> list[float]:
    """For each mode q = 1..s, quadratic-fit leading coefficient of the mode
    distribution's variance as a function of M over ``M_values``."""
    M_values = [int(m) for m in M_values]
    per_mode: list[list[float]] = [[] for _ in range(s)]
    for M in M_values:
        basis = mode_basis(M, s)
        support = range(s + 1, M + 1)
        for q in range(1, s + 1):
            w = mode_distribution_weights(M, s, q, basis)
            per_mode[q - 1].append(float(signed_variance(support, w)))
    ms = np.asarray(M_values, dtype=np.float64)
    return [float(np.polyfit(ms, np.asarray(v), 2)[0]) for v in per_mode]
