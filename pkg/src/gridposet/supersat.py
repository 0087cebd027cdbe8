"""Comparable-pair counting and the supersaturation inequality.

A set X larger than a*(1 + 3n/D)*N_{n,D} by a slack b must contain at
least b*D^a/(a!*n^a) ordered pairs x < y with rank gap at least a.  The
counting side buckets X by rank so only level pairs with a large enough
gap are compared, and (optionally) uses precomputed dominance bitmasks
for audits that hammer one box with many sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .box import GridBox, Point, iter_points, leq, middle_layer_size, rank


def count_comparable_pairs_with_gap(X: Iterable[Point], a: int) -> int:
    """Ordered pairs x < y inside X with rank(y) - rank(x) >= a (a >= 1)."""
    if a < 1:
        raise ValueError("gap must be >= 1")
    buckets: dict[int, list[Point]] = {}
    for p in X:
        buckets.setdefault(rank(p), []).append(p)
    ranks = sorted(buckets)
    count = 0
    for ri in ranks:
        for rj in ranks:
            if rj - ri < a:
                continue
            for x in buckets[ri]:
                for y in buckets[rj]:
                    if leq(x, y):
                        count += 1
    return count


@dataclass(frozen=True)
class SupersaturationReport:
    """One exact check of the comparable-pair lower bound."""

    n: int
    dims: int
    a: int
    set_size: int
    b: Fraction           # slack |X| - a*(1+3n/D)*N, clamped at 0
    bound: Fraction       # b * D^a / (a! * n^a)
    observed: int

    @property
    def satisfied(self) -> bool:
        return self.b <= 0 or self.observed >= self.bound

    def csv_row(self) -> str:
        return ",".join([
            str(self.n), str(self.dims), str(self.a), str(self.set_size),
            f"{self.b.numerator}/{self.b.denominator}",
            f"{self.bound.numerator}/{self.bound.denominator}",
            str(self.observed),
            "pass" if self.satisfied else "FAIL",
        ])


CSV_HEADER = "n,D,a,set_size,b,bound,observed,result"


def supersaturation_threshold(box: GridBox, a: int) -> Fraction:
    """a * (1 + 3n/D) * N_{n,D}; sets larger than this have positive slack."""
    return a * (1 + Fraction(3 * box.n, box.dims)) * middle_layer_size(box)


def check_supersaturation(box: GridBox, X: Iterable[Point], a: int,
                          observed: int | None = None) -> SupersaturationReport:
    """Exact report for one set; degenerates gracefully when the slack b <= 0.

    ``observed`` short-circuits the pair count when the caller already has
    it (the bitmask audits do).
    """
    Xl = list(X)
    b = max(Fraction(0), len(Xl) - supersaturation_threshold(box, a))
    bound = b * box.dims ** a / (math.factorial(a) * box.n ** a)
    if observed is None:
        observed = count_comparable_pairs_with_gap(Xl, a)
    return SupersaturationReport(n=box.n, dims=box.dims, a=a, set_size=len(Xl),
                                 b=b, bound=bound, observed=observed)


@lru_cache(maxsize=None)
def dominance_masks(box: GridBox, a: int) -> tuple[tuple[Point, ...], tuple[int, ...]]:
    """For each point (lex order), the bitmask of strictly larger points
    with rank gap >= a.  Lets audits count pairs with int popcounts."""
    points = tuple(iter_points(box))
    index = {p: i for i, p in enumerate(points)}
    masks = [0] * len(points)
    for i, x in enumerate(points):
        rx = rank(x)
        for j, y in enumerate(points):
            if rank(y) - rx >= a and leq(x, y):
                masks[i] |= 1 << j
    return points, tuple(masks)


def pair_count_from_mask(box: GridBox, subset_mask: int, a: int) -> int:
    """Comparable pairs with gap >= a inside the subset given as a bitmask
    over the lex-ordered points of the box."""
    _, masks = dominance_masks(box, a)
    count = 0
    t = subset_mask
    while t:
        i = (t & -t).bit_length() - 1
        count += (masks[i] & subset_mask).bit_count()
        t &= t - 1
    return count
