"""Cochran's Q, a chi-square survival function, and Zipf rank-frequency fits.

The chi-square tail is computed from the regularized incomplete gamma
function, by power series for small arguments and by a Lentz-style continued
fraction for large ones. Both converge to well below 1e-10 absolute error for
the degrees of freedom used here, so no statistics library is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 500


class DegenerateInputError(ValueError):
    """The statistic is undefined on this input (no informative variation)."""


def _gamma_p_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x), series expansion."""
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError("incomplete gamma series did not converge")


def _gamma_q_contfrac(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x), continued fraction."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b if b != 0.0 else 1.0 / _TINY
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ArithmeticError("incomplete gamma continued fraction did not converge")


def chi2_sf(x: float, df: int) -> float:
    """P(X >= x) for a chi-square variable with ``df`` degrees of freedom."""
    if df < 1:
        raise ValueError("df must be a positive integer")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0
    a = df / 2.0
    half_x = x / 2.0
    if half_x < a + 1.0:
        return 1.0 - _gamma_p_series(a, half_x)
    return _gamma_q_contfrac(a, half_x)


@dataclass(frozen=True)
class CochranResult:
    statistic: float
    df: int
    p_value: float
    k: int  # number of treatments (columns)
    n_rows: int
    n_informative: int  # rows that are neither all-0 nor all-1


def cochran_q(rows: list[list[int]] | tuple[tuple[int, ...], ...]) -> CochranResult:
    """Cochran's Q over a binary blocks-by-treatments matrix.

    Q = (k - 1) * (k * sum(C_j^2) - (sum C_j)^2) / (k * sum(R_i) - sum(R_i^2))
    with column sums C_j and row sums R_i. Rows with no variation contribute
    nothing to the denominator; if no row varies the statistic is undefined.
    """
    if not rows:
        raise ValueError("matrix has no rows")
    k = len(rows[0])
    if k < 2:
        raise ValueError("matrix needs at least two columns")
    for i, row in enumerate(rows):
        if len(row) != k:
            raise ValueError(f"row {i} has {len(row)} columns, expected {k}")
        if any(v not in (0, 1) for v in row):
            raise ValueError(f"row {i} is not binary")

    col_sums = [sum(row[j] for row in rows) for j in range(k)]
    row_sums = [sum(row) for row in rows]
    sum_c = sum(col_sums)
    sum_c2 = sum(c * c for c in col_sums)
    sum_r = sum(row_sums)
    sum_r2 = sum(r * r for r in row_sums)

    denominator = k * sum_r - sum_r2
    if denominator == 0:
        raise DegenerateInputError(
            "every row is constant; Cochran's Q is undefined"
        )
    q = (k - 1) * (k * sum_c2 - sum_c * sum_c) / denominator
    df = k - 1
    n_informative = sum(1 for r in row_sums if 0 < r < k)
    return CochranResult(statistic=q, df=df, p_value=chi2_sf(q, df), k=k,
                         n_rows=len(rows), n_informative=n_informative)


@dataclass(frozen=True)
class ZipfFit:
    slope: float
    intercept: float
    r_squared: float
    n_points: int


def zipf_fit(counts: list[int] | tuple[int, ...]) -> ZipfFit:
    """Least-squares line through (ln rank, ln count) for positive counts.

    Counts are ranked in descending order (stable for ties) with ranks
    starting at 1. A pure power law comes out as a straight line; equal
    counts come out flat with a perfect fit.
    """
    vals = [c for c in counts if c > 0]
    if len(vals) < 3:
        raise ValueError("need at least three positive counts for a fit")
    vals.sort(reverse=True)  # Python sorts are stable, ties keep input order
    xs = [math.log(rank) for rank in range(1, len(vals) + 1)]
    ys = [math.log(c) for c in vals]
    n = len(vals)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    ss_res = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - mean_y) ** 2 for y in ys)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return ZipfFit(slope=slope, intercept=intercept, r_squared=r_squared,
                   n_points=n)
