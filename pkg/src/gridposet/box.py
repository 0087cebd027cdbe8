"""The grid poset: the box {0,...,n-1}^D ordered coordinatewise.

Points are plain tuples of ints.  Everything here is a pure function of
immutable inputs; level-size counting is exact (arbitrary precision) via
a dynamic program over dimensions, so it stays cheap even at several
hundred dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

Point = tuple[int, ...]

DEFAULT_LEVEL_CAP = 500_000


class CapExceeded(Exception):
    """An enumeration would materialize more elements than the configured cap."""


@dataclass(frozen=True)
class GridBox:
    """The box {0,...,n-1}^dims with the coordinatewise partial order."""

    n: int
    dims: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"side length must be >= 1, got {self.n}")
        if self.dims < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dims}")

    @property
    def size(self) -> int:
        return self.n ** self.dims

    @property
    def max_rank(self) -> int:
        return (self.n - 1) * self.dims

    @property
    def middle_rank(self) -> int:
        """k = floor((n-1)*dims/2), the rank of the middle level."""
        return (self.n - 1) * self.dims // 2

    def contains(self, x: Point) -> bool:
        return len(x) == self.dims and all(0 <= c < self.n for c in x)

    def require(self, x: Point) -> None:
        if not self.contains(x):
            raise ValueError(f"point {x} not in box n={self.n} dims={self.dims}")


def rank(x: Point) -> int:
    """Coordinate sum of a point."""
    return sum(x)


def leq(x: Point, y: Point) -> bool:
    """True iff x is coordinatewise <= y (same dimension required)."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return all(a <= b for a, b in zip(x, y))


def covers(x: Point, y: Point) -> bool:
    """True iff y covers x: y = x + e_t for a single coordinate t."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    diff = 0
    for a, b in zip(x, y):
        if b - a == 1:
            diff += 1
        elif b != a:
            return False
    return diff == 1


def reflect_point(box: GridBox, x: Point) -> Point:
    """The order-reversing involution x -> (n-1) - x, coordinatewise."""
    return tuple(box.n - 1 - c for c in x)


def upper_covers(box: GridBox, x: Point) -> Iterator[Point]:
    for t in range(box.dims):
        if x[t] + 1 < box.n:
            yield x[:t] + (x[t] + 1,) + x[t + 1:]


def lower_covers(box: GridBox, x: Point) -> Iterator[Point]:
    for t in range(box.dims):
        if x[t] > 0:
            yield x[:t] + (x[t] - 1,) + x[t + 1:]


@lru_cache(maxsize=None)
def level_sizes(box: GridBox) -> tuple[int, ...]:
    """Exact sizes |V_0|, ..., |V_{(n-1)dims}| of all level sets.

    |V_i| counts compositions of i into dims parts from {0,...,n-1};
    computed one dimension at a time (state = partial sum), exact ints.
    """
    n, dims = box.n, box.dims
    sizes = [1]
    for _ in range(dims):
        prev = sizes
        top = len(prev) - 1 + (n - 1)
        sizes = [0] * (top + 1)
        for s, c in enumerate(prev):
            if c:
                for a in range(n):
                    sizes[s + a] += c
    return tuple(sizes)


def level_size(box: GridBox, i: int) -> int:
    """|V_i|, the number of points of rank i."""
    if not 0 <= i <= box.max_rank:
        raise ValueError(f"level {i} out of range [0, {box.max_rank}]")
    return level_sizes(box)[i]


def middle_layer_size(box: GridBox) -> int:
    """|V_k| with k = floor((n-1)*dims/2), the width of the box poset."""
    return level_size(box, box.middle_rank)


def enumerate_level(box: GridBox, i: int, cap: int = DEFAULT_LEVEL_CAP) -> list[Point]:
    """All points of rank i in lexicographic order (deterministic)."""
    if not 0 <= i <= box.max_rank:
        raise ValueError(f"level {i} out of range [0, {box.max_rank}]")
    if level_size(box, i) > cap:
        raise CapExceeded(
            f"level {i} of box n={box.n} dims={box.dims} has "
            f"{level_size(box, i)} points, cap is {cap}")
    n, dims = box.n, box.dims
    out: list[Point] = []
    prefix: list[int] = []

    def build(t: int, remaining: int) -> None:
        if t == dims:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        lo = max(0, remaining - (n - 1) * (dims - t - 1))
        hi = min(n - 1, remaining)
        for a in range(lo, hi + 1):
            prefix.append(a)
            build(t + 1, remaining - a)
            prefix.pop()

    build(0, i)
    return out


def iter_points(box: GridBox, cap: int = DEFAULT_LEVEL_CAP) -> list[Point]:
    """All points of the box in lexicographic order."""
    if box.size > cap:
        raise CapExceeded(f"box has {box.size} points, cap is {cap}")
    from itertools import product
    return [tuple(p) for p in product(range(box.n), repeat=box.dims)]


def middle_window(box: GridBox) -> tuple[Fraction, Fraction]:
    """The rank window [k - (n-1)/2, k + (n+1)/2] around the middle level.

    Chains of a sampled decomposition have their closest-to-middle element
    inside this window; levels outside it carry full matchings.
    """
    k = box.middle_rank
    half = Fraction(box.n - 1, 2)
    return (k - half, k + half + 1)
