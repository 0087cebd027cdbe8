"""Finite-scale comparison of the middle layer against its CLT estimate.

The middle layer size N_{n,D} approaches sqrt(6/(pi (n^2-1) D)) * n^D;
we evaluate that estimate at 50+ significant digits (the plain float
exponent range is exceeded quickly) and compare it to the exact dynamic
program, plus report the headline log2-count sandwich at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .box import GridBox, middle_layer_size

WORKING_DPS = 60


def clt_middle_layer(n: int, dims: int) -> mpmath.mpf:
    """sqrt(6 / (pi (n^2-1) D)) * n^D at high precision."""
    if n < 2:
        raise ValueError("estimate is degenerate for n < 2 (n^2 - 1 = 0)")
    if dims < 1:
        raise ValueError("dimension must be >= 1")
    with mpmath.workdps(WORKING_DPS):
        factor = mpmath.sqrt(6 / (mpmath.pi * (n * n - 1) * dims))
        return factor * mpmath.mpf(n) ** dims


def relative_error(n: int, dims: int) -> float:
    """|estimate - exact| / exact for the middle layer size."""
    exact = middle_layer_size(GridBox(n, dims))
    with mpmath.workdps(WORKING_DPS):
        est = clt_middle_layer(n, dims)
        return float(abs(est - exact) / exact)


@dataclass(frozen=True)
class AsymptoticRow:
    n: int
    dims: int
    exact: int
    estimate: str        # decimal string of the CLT value
    rel_error: float

    def csv_row(self) -> str:
        return f"{self.n},{self.dims},{self.exact},{self.estimate},{self.rel_error:.6e}"


ASYM_CSV_HEADER = "n,D,exact,estimate,rel_error"


def middle_layer_table(n: int, dims_list: list[int]) -> list[AsymptoticRow]:
    rows = []
    for dims in dims_list:
        exact = middle_layer_size(GridBox(n, dims))
        with mpmath.workdps(WORKING_DPS):
            est = clt_middle_layer(n, dims)
            rows.append(AsymptoticRow(
                n=n, dims=dims, exact=exact,
                estimate=mpmath.nstr(est, 20),
                rel_error=float(abs(est - exact) / exact)))
    return rows


@dataclass(frozen=True)
class ExponentReport:
    """The log2-count sandwich N <= log2(count) <= certified bound, next to
    the scale sqrt(6/(D pi)) * n^(D-1) it approaches."""

    n: int
    d: int
    middle_layer: int
    exponent_scale: str
    log2_lower: Fraction
    log2_upper: Fraction | None
    exact_log2: Fraction | None


def exponent_report(n: int, d: int,
                    certified_log2: Fraction | None = None,
                    exact_count: int | None = None) -> ExponentReport:
    """Assemble the sandwich for P_d(n) (counts supplied by the caller)."""
    dims = d + 1
    box = GridBox(n, dims)
    N = middle_layer_size(box)
    with mpmath.workdps(WORKING_DPS):
        scale = mpmath.sqrt(6 / (dims * mpmath.pi)) * mpmath.mpf(n) ** d
        scale_str = mpmath.nstr(scale, 20)
    exact_log2 = None
    if exact_count is not None and exact_count > 1:
        import math
        exact_log2 = Fraction(math.log2(exact_count))
    if certified_log2 is not None and certified_log2 < N:
        raise AssertionError("certified upper bound fell below the trivial lower bound")
    return ExponentReport(n=n, d=d, middle_layer=N, exponent_scale=scale_str,
                          log2_lower=Fraction(N), log2_upper=certified_log2,
                          exact_log2=exact_log2)
