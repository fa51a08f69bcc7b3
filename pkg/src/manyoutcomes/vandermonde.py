"""The Vandermonde matrix J[j, n] = j**(n-1) on nodes 1..M and its exact inverse.

Three independent routes to the inverse are provided:

* ``inverse_closed_form`` -- row polynomials P evaluated at the target M
  (the O(M^2)-entry closed form; entries are exact rationals with
  denominator (n-1)!(M-n)!),
* ``inverse_harmonic_form`` -- nested ordered-harmonic-sum representation
  with prefactor (-1)**(j+n) C(M, n),
* ``inverse_gauss`` -- a fraction-free (Bareiss/Montante) elimination oracle
  that works for any nonsingular rational matrix.

All public indices are 1-based, matching the j, n = 1..M convention used in
the documented row formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lcm

from .exactnum import falling_product

__all__ = [
    "ExactMatrix",
    "PPolyTable",
    "vandermonde_matrix",
    "identity_matrix",
    "inverse_gauss",
    "p_polynomials",
    "p_poly_residual",
    "inverse_closed_form",
    "inverse_harmonic_form",
    "simple_row",
]


@dataclass(frozen=True, eq=True)
class ExactMatrix:
    """Dense matrix of exact rationals; row-major, immutable."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match declared shape")

    def at(self, i: int, j: int) -> Fraction:
        """1-based entry access."""
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexError(f"index ({i}, {j}) out of range for {self.rows}x{self.cols}")
        return self.entries[i - 1][j - 1]

    def row(self, i: int) -> tuple[Fraction, ...]:
        if not 1 <= i <= self.rows:
            raise IndexError(f"row {i} out of range")
        return self.entries[i - 1]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        cols = tuple(zip(*other.entries))
        out = tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries
        )
        return ExactMatrix(self.rows, other.cols, out)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == (1 if i == j else 0)
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def to_str_rows(self) -> list[list[str]]:
        """Rows of "num/den" strings (the JSON wire format)."""
        return [[f"{e.numerator}/{e.denominator}" for e in r] for r in self.entries]


def _from_grid(grid) -> ExactMatrix:
    rows = len(grid)
    cols = len(grid[0])
    return ExactMatrix(rows, cols, tuple(tuple(Fraction(e) for e in r) for r in grid))


def vandermonde_matrix(M: int) -> ExactMatrix:
    """M x M matrix with entry (j, n) = j**(n-1), j, n = 1..M."""
    if M < 1:
        raise ValueError("M must be >= 1")
    return _from_grid([[j ** (n - 1) for n in range(1, M + 1)] for j in range(1, M + 1)])


def identity_matrix(M: int) -> ExactMatrix:
    return _from_grid([[1 if i == j else 0 for j in range(M)] for i in range(M)])


def inverse_gauss(A: ExactMatrix) -> ExactMatrix:
    """Exact inverse by fraction-free Bareiss-Jordan elimination.

    The matrix is scaled to integers first; one-step Bareiss updates keep the
    intermediates bounded by minors of the scaled matrix, which avoids the
    rational-gcd blowup of naive Fraction elimination.
    """
    if A.rows != A.cols:
        raise ValueError("inverse requires a square matrix")
    n = A.rows
    scale = lcm(*(e.denominator for r in A.entries for e in r)) if n else 1
    # augmented [scale*A | scale*I]; then X solving (scale A) X = scale I is A^{-1}
    m = [
        [int(e * scale) for e in A.entries[i]] + [scale if k == i else 0 for k in range(n)]
        for i in range(n)
    ]
    width = 2 * n
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if m[r][k] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        pkk = m[k][k]
        for i in range(n):
            if i == k:
                continue
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(width):
                row_i[j] = (pkk * row_i[j] - mik * row_k[j]) // prev
        prev = pkk
    det_like = m[n - 1][n - 1]
    out = [[Fraction(m[i][n + j], det_like) for j in range(n)] for i in range(n)]
    return _from_grid(out)


@dataclass(frozen=True)
class PPolyTable:
    """Values P_{M-j}(M) for j = 0..M-1 of the inverse's row polynomials.

    ``values[j]`` is the integer P_{M-j}(M); ``values[0]`` is P_M(M) = 1.
    The normalized forms P_{M-j}(M) / prod_{p=-1}^{j-1}(M-p) have small fixed
    denominators (1/2, (3M+2)/24, ... for j = 1, 2, ...).
    """

    M: int
    values: tuple[int, ...]

    def p(self, subscript: int) -> int:
        """P_subscript(M) for 1 <= subscript <= M."""
        if not 1 <= subscript <= self.M:
            raise IndexError(f"P_{subscript}({self.M}) outside the table")
        return self.values[self.M - subscript]

    def normalized(self, j: int) -> Fraction:
        """P_{M-j}(M) divided by prod_{p=-1}^{j-1}(M-p)."""
        return Fraction(self.values[j], falling_product(self.M, j))


def _g_column(M: int, jmax: int) -> list[int]:
    """g[j] = P_{M-j}(M) for j = 0..jmax (formal extension for j >= M allowed).

    Recursion in the matrix argument m = 1..M, with the subscript offset j
    held fixed:  g_m[j] = g_{m-1}[j] - sum_{p=1}^{j} g_m[j-p] (-m)**p,
    from g_0 = (1, 0, 0, ...).
    """
    g = [0] * (jmax + 1)
    g[0] = 1
    for m in range(1, M + 1):
        for j in range(1, jmax + 1):
            # Horner in (-m): sum_{p=1}^{j} g[j-p] (-m)**p with updated g[<j]
            acc = 0
            for idx in range(0, j):  # g[0] .. g[j-1] correspond to p = j .. 1
                acc = acc * (-m) + g[idx]
            g[j] -= acc * (-m)
    return g


@lru_cache(maxsize=None)
def p_polynomials(M: int) -> PPolyTable:
    """Solve the row-polynomial recursion downward from P_M(M) = 1, exactly."""
    if M < 1:
        raise ValueError("M must be >= 1")
    return PPolyTable(M, tuple(_g_column(M, M - 1)))


def p_poly_residual(M: int, j: int) -> int:
    """Recursion residual for offset j at argument M; zero for a valid table."""
    if not 1 <= j <= M - 1:
        raise ValueError("residual defined for 1 <= j <= M-1")
    g_m = _g_column(M, j)
    g_m1 = _g_column(M - 1, j)
    acc = 0
    for idx in range(0, j):
        acc = acc * (-M) + g_m[idx]
    acc *= -M
    return g_m[j] - g_m1[j] + acc


def _sign(k: int) -> int:
    return 1 if k % 2 == 0 else -1


@lru_cache(maxsize=None)
def inverse_closed_form(M: int) -> ExactMatrix:
    """Inverse of vandermonde_matrix(M) from the explicit row polynomials.

    Entry (j, n) = (-1)**(j+n) / ((n-1)!(M-n)!) * sum_{p=0}^{M-j} P_{j+p}(M) (-n)**p.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    vals = p_polynomials(M).values  # vals[i] = P_{M-i}(M)
    grid: list[list[Fraction]] = []
    for j in range(1, M + 1):
        # coefficients P_{j+p}(M), p = 0..M-j, highest subscript first for Horner
        coeffs = [vals[M - (j + p)] for p in range(M - j, -1, -1)]  # P_M first
        row: list[Fraction] = []
        for n in range(1, M + 1):
            acc = 0
            for c in coeffs:
                acc = acc * (-n) + c
            row.append(Fraction(_sign(j + n) * acc, factorial(n - 1) * factorial(M - n)))
        grid.append(row)
    return _from_grid(grid)


def _elementary_symmetric(values: list[Fraction], kmax: int) -> list[Fraction]:
    """e_0..e_kmax of the given values (coefficients of prod (1 + v x))."""
    e = [Fraction(0)] * (kmax + 1)
    e[0] = Fraction(1)
    top = 0
    for v in values:
        top = min(top + 1, kmax)
        for k in range(top, 0, -1):
            e[k] += v * e[k - 1]
    return e


def inverse_harmonic_form(M: int) -> ExactMatrix:
    """Same inverse through the nested-harmonic-sum representation.

    Entry (j, n) = (-1)**(j+n) C(M, n) *
        sum_{p=0}^{j-1} e_p(1/1..1/(n-1)) * e_{j-1-p}(1/(n+1)..1/M),
    where e_k is the k-th elementary symmetric polynomial of the reciprocals.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    cols: list[list[Fraction]] = []
    for n in range(1, M + 1):
        lo = _elementary_symmetric([Fraction(1, q) for q in range(1, n)], M - 1)
        hi = _elementary_symmetric([Fraction(1, q) for q in range(n + 1, M + 1)], M - 1)
        cmn = comb(M, n)
        col = []
        for j in range(1, M + 1):
            s = sum(lo[p] * hi[j - 1 - p] for p in range(j))
            col.append(_sign(j + n) * cmn * s)
        cols.append(col)
    grid = [[cols[n][j] for n in range(M)] for j in range(M)]
    return _from_grid(grid)


_SIMPLE_LOW = (1, 2, 3)


def simple_row(M: int, which: int) -> tuple[Fraction, ...]:
    """One row of the inverse from its dedicated short formula.

    ``which`` is one of 1, 2, 3, M-3, M-2, M-1, M.  Rows 1..3 use the
    harmonic/binomial forms; rows M-3..M use the polynomial-in-n ratios to the
    last row.  The printed row-3 source formula conjoins its range indicators
    ambiguously; this implementation uses the reading (both indices high, one
    low/one high, both indices low) that matches the elimination oracle.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if which in _SIMPLE_LOW and which <= M:
        return _simple_row_low(M, which)
    high = {M: 0, M - 1: 1, M - 2: 2, M - 3: 3}
    if which in high and which >= 1:
        return _simple_row_high(M, high[which])
    raise ValueError(f"row {which} has no dedicated formula for M={M}")


def _simple_row_low(M: int, j: int) -> tuple[Fraction, ...]:
    out = []
    for n in range(1, M + 1):
        cmn = comb(M, n)
        if j == 1:
            s = Fraction(1)
        else:
            lo = _elementary_symmetric([Fraction(1, q) for q in range(1, n)], j - 1)
            hi = _elementary_symmetric([Fraction(1, q) for q in range(n + 1, M + 1)], j - 1)
            s = sum(lo[p] * hi[j - 1 - p] for p in range(j))
        out.append(_sign(j + n) * cmn * s)
    return tuple(out)


def _simple_row_high(M: int, k: int) -> tuple[Fraction, ...]:
    """Rows M-k for k = 0..3 via the explicit polynomial-in-n ratio formulas."""
    out = []
    for n in range(1, M + 1):
        last = Fraction(_sign(M + n), factorial(n - 1) * factorial(M - n))
        if k == 0:
            ratio = Fraction(1)
        elif k == 1:
            ratio = -(Fraction(M * (M + 1), 2) - n)
        elif k == 2:
            ratio = (
                Fraction((M - 1) * M * (M + 1) * (2 + 3 * M), 24)
                - Fraction(n * M * (M + 1), 2)
                + n * n
            )
        elif k == 3:
            ratio = -(
                Fraction((M - 2) * (M - 1) * M * M * (M + 1) * (M + 1), 48)
                - Fraction(n * (M - 1) * M * (M + 1) * (2 + 3 * M), 24)
                + Fraction(n * n * M * (M + 1), 2)
                - n**3
            )
        else:  # pragma: no cover
            raise ValueError(k)
        out.append(last * ratio)
    return tuple(out)
