"""Exact desk-scale counting: antichains, down-sets, bounded partitions.

Two independent enumeration paths are kept deliberately separate so they
can cross-check each other:

* antichains are counted by a depth-first search over points in
  lexicographic order, pruning on pairwise comparability;
* down-sets are counted by a transfer-matrix / profile dynamic program
  over antitone height maps (with plain subset filtering as a third,
  brute-force path on tiny boxes).

The classical identities (central binomial for 2-boxes, MacMahon's
product for 3-boxes, the down-set/antichain/partition bijections) are
implemented next to the counters so the test suite can pin them against
each other exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator

from .box import CapExceeded, GridBox, Point, iter_points, leq, lower_covers, rank, upper_covers

DEFAULT_COUNT_CAP = 64
SUBSET_FILTER_MAX = 16


# ---------------------------------------------------------------------------
# antichains: lexicographic DFS with comparability bitmasks
# ---------------------------------------------------------------------------

def _comparability_masks(points: list[Point]) -> list[int]:
    """mask[i] has bit j set iff points[i] and points[j] are comparable, i != j."""
    m = len(points)
    masks = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if leq(points[i], points[j]) or leq(points[j], points[i]):
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def _check_count_cap(box: GridBox, cap: int) -> None:
    if box.size > cap:
        raise CapExceeded(
            f"box has {box.size} elements, enumeration cap is {cap}")


def iter_antichains(box: GridBox, cap: int = DEFAULT_COUNT_CAP) -> Iterator[frozenset[Point]]:
    """All antichains of the box, the empty one included.

    The search branches include/exclude per point; a point is includable
    only while incomparable with everything already chosen, so the tree
    has one leaf per antichain and total size O(#antichains * box.size).
    """
    _check_count_cap(box, cap)
    points = iter_points(box, cap=cap)
    masks = _comparability_masks(points)
    m = len(points)

    def walk(idx: int, chosen_mask: int, chosen: list[Point]) -> Iterator[frozenset[Point]]:
        if idx == m:
            yield frozenset(chosen)
            return
        yield from walk(idx + 1, chosen_mask, chosen)
        if not masks[idx] & chosen_mask:
            chosen.append(points[idx])
            yield from walk(idx + 1, chosen_mask | (1 << idx), chosen)
            chosen.pop()

    yield from walk(0, 0, [])


def count_antichains(box: GridBox, cap: int = DEFAULT_COUNT_CAP) -> int:
    """Exact number of antichains (independent sets of the comparability graph)."""
    _check_count_cap(box, cap)
    points = iter_points(box, cap=cap)
    masks = _comparability_masks(points)
    m = len(points)

    def walk(idx: int, chosen_mask: int) -> int:
        if idx == m:
            return 1
        total = walk(idx + 1, chosen_mask)
        if not masks[idx] & chosen_mask:
            total += walk(idx + 1, chosen_mask | (1 << idx))
        return total

    return walk(0, 0)


def max_antichain_size(box: GridBox, cap: int = DEFAULT_COUNT_CAP) -> int:
    """Size of the largest antichain, by exhaustive search."""
    _check_count_cap(box, cap)
    points = iter_points(box, cap=cap)
    masks = _comparability_masks(points)
    m = len(points)
    best = 0

    def walk(idx: int, chosen_mask: int, size: int) -> None:
        nonlocal best
        if idx == m:
            best = max(best, size)
            return
        walk(idx + 1, chosen_mask, size)
        if not masks[idx] & chosen_mask:
            walk(idx + 1, chosen_mask | (1 << idx), size + 1)

    walk(0, 0, 0)
    return best


# ---------------------------------------------------------------------------
# down-sets: profile DP over antitone height maps, plus subset filtering
# ---------------------------------------------------------------------------

def count_antitone_maps(side: int, dims: int, top: int) -> int:
    """Number of maps h: {0,...,side-1}^dims -> {0,...,top} with h antitone.

    Cells are scanned in lexicographic order (last axis fastest) keeping a
    sliding window of the last side^(dims-1) assigned heights; the height of
    a cell is capped by the heights of its immediate predecessors, which all
    live inside the window.  States are memoized per position.
    """
    if dims == 0:
        return top + 1
    window = side ** (dims - 1)
    offsets = [side ** (dims - 1 - t) for t in range(dims)]
    cells = list(product(range(side), repeat=dims))
    frontier: dict[tuple[int, ...], int] = {(top,) * window: 1}
    for cell in cells:
        nxt: dict[tuple[int, ...], int] = {}
        active = [(window - offsets[t]) for t in range(dims) if cell[t] > 0]
        for w, c in frontier.items():
            limit = top
            for pos in active:
                if w[pos] < limit:
                    limit = w[pos]
            for h in range(limit + 1):
                key = w[1:] + (h,)
                nxt[key] = nxt.get(key, 0) + c
        frontier = nxt
    return sum(frontier.values())


def _downset_cover_masks(points: list[Point], box: GridBox) -> list[int]:
    index = {p: i for i, p in enumerate(points)}
    masks = []
    for p in points:
        m = 0
        for q in lower_covers(box, p):
            m |= 1 << index[q]
        masks.append(m)
    return masks


def count_downsets_filter(box: GridBox, cap: int = SUBSET_FILTER_MAX) -> int:
    """Brute-force path: scan all subsets and keep the down-closed ones."""
    if box.size > cap:
        raise CapExceeded(
            f"box has {box.size} elements, subset-filter cap is {cap}")
    points = iter_points(box)
    masks = _downset_cover_masks(points, box)
    m = len(points)
    count = 0
    for s in range(1 << m):
        ok = True
        t = s
        while t:
            i = (t & -t).bit_length() - 1
            if masks[i] & s != masks[i]:
                ok = False
                break
            t &= t - 1
        if ok:
            count += 1
    return count


def iter_downsets(box: GridBox, cap: int = SUBSET_FILTER_MAX) -> Iterator[frozenset[Point]]:
    """All down-sets of a tiny box, by subset filtering."""
    if box.size > cap:
        raise CapExceeded(
            f"box has {box.size} elements, subset-filter cap is {cap}")
    points = iter_points(box)
    masks = _downset_cover_masks(points, box)
    m = len(points)
    for s in range(1 << m):
        ok = True
        t = s
        while t:
            i = (t & -t).bit_length() - 1
            if masks[i] & s != masks[i]:
                ok = False
                break
            t &= t - 1
        if ok:
            yield frozenset(points[i] for i in range(m) if s >> i & 1)


def count_downsets(box: GridBox, method: str = "auto") -> int:
    """Exact number of down-sets (order ideals) of the box.

    method: "profile" (transfer DP), "filter" (subset scan, tiny boxes
    only) or "auto" (filter below the subset cap, profile otherwise).
    Must agree with count_antichains wherever both run: maximal elements
    of a down-set form an antichain and the map is a bijection.
    """
    if method == "auto":
        method = "filter" if box.size <= SUBSET_FILTER_MAX else "profile"
    if method == "filter":
        return count_downsets_filter(box)
    if method == "profile":
        return count_antitone_maps(box.n, box.dims - 1, box.n)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# the two bijections
# ---------------------------------------------------------------------------

def antichain_to_downset(box: GridBox, antichain: frozenset[Point]) -> frozenset[Point]:
    """Down-closure of an antichain."""
    out: set[Point] = set()
    for a in antichain:
        box.require(a)
        out.update(product(*(range(c + 1) for c in a)))
    return frozenset(out)


def downset_to_antichain(box: GridBox, downset: frozenset[Point]) -> frozenset[Point]:
    """The maximal elements of a down-set."""
    return frozenset(
        p for p in downset
        if not any(q in downset for q in upper_covers(box, p)))


def is_antichain(elements: frozenset[Point]) -> bool:
    elems = list(elements)
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if leq(elems[i], elems[j]) or leq(elems[j], elems[i]):
                return False
    return True


def is_downset(box: GridBox, elements: frozenset[Point]) -> bool:
    return all(q in elements for p in elements for q in lower_covers(box, p))


# ---------------------------------------------------------------------------
# bounded partitions and the down-set correspondence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridPartition:
    """A dims-dimensional array of side n with entries in {0,...,n},
    weakly decreasing along every axis.

    Entries are stored flat in lexicographic cell order (last axis
    fastest); dims = 0 is allowed and means a single scalar entry.
    """

    n: int
    dims: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.n ** self.dims:
            raise ValueError("entry count does not match shape")
        if any(not 0 <= e <= self.n for e in self.entries):
            raise ValueError("entries must lie in {0,...,n}")
        if not self._antitone():
            raise ValueError("entries must be weakly decreasing along every axis")

    def _antitone(self) -> bool:
        strides = [self.n ** (self.dims - 1 - t) for t in range(self.dims)]
        for pos, cell in enumerate(product(range(self.n), repeat=self.dims)):
            for t in range(self.dims):
                if cell[t] > 0 and self.entries[pos - strides[t]] < self.entries[pos]:
                    return False
        return True

    def entry(self, cell: Point) -> int:
        pos = 0
        for c in cell:
            pos = pos * self.n + c
        return self.entries[pos]


def downset_to_partition(box: GridBox, downset: frozenset[Point]) -> GridPartition:
    """Read a down-set of the side-n (d+1)-box as a d-dimensional partition.

    The last axis is the value axis: the entry at cell u counts the
    elements of the fiber {(u, s) : s} inside the down-set, i.e. 1 plus
    the largest last coordinate present, or 0 for an empty fiber.
    """
    n, d = box.n, box.dims - 1
    heights: dict[Point, int] = {}
    for p in downset:
        box.require(p)
        cell, s = p[:-1], p[-1]
        if heights.get(cell, -1) < s:
            heights[cell] = s
    entries = tuple(
        heights.get(cell, -1) + 1 for cell in product(range(n), repeat=d))
    return GridPartition(n=n, dims=d, entries=entries)


def partition_to_downset(box: GridBox, part: GridPartition) -> frozenset[Point]:
    """Inverse of downset_to_partition."""
    if part.n != box.n or part.dims != box.dims - 1:
        raise ValueError("partition shape does not match box")
    out: set[Point] = set()
    for cell in product(range(box.n), repeat=part.dims):
        for s in range(part.entry(cell)):
            out.add(cell + (s,))
    return frozenset(out)


# ---------------------------------------------------------------------------
# closed-form counts
# ---------------------------------------------------------------------------

def central_binomial(n: int) -> int:
    """C(2n, n), the number of line partitions in an n x n corner."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.comb(2 * n, n)


def macmahon_product(n: int) -> int:
    """MacMahon's box product over 1 <= i,j,k <= n, evaluated exactly.

    The triple product of (i+j+k-1)/(i+j+k-2) is accumulated in exact
    rationals; a non-integral result would mean an implementation bug and
    raises instead of being rounded away.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    acc = Fraction(1)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                acc *= Fraction(i + j + k - 1, i + j + k - 2)
    if acc.denominator != 1:
        raise ArithmeticError(f"MacMahon product came out non-integral: {acc}")
    return acc.numerator


@lru_cache(maxsize=None)
def partition_count(d: int, n: int) -> int:
    """Number of n x ... x n d-dimensional partitions with entries in {0..n}.

    Equals the number of down-sets of the side-n (d+1)-box; closed forms
    are used for d <= 2, the profile DP otherwise.
    """
    if d < 0 or n < 1:
        raise ValueError("need d >= 0 and n >= 1")
    if d == 0:
        return n + 1
    if d == 1:
        return central_binomial(n)
    if d == 2:
        return macmahon_product(n)
    return count_downsets(GridBox(n, d + 1), method="profile")


def monotone_path_ramsey(d: int, n: int) -> int:
    """Smallest N forcing a monochromatic monotone path of length n in any
    (d+1)-coloring of the complete 3-uniform hypergraph: P_d(n) + 1."""
    return partition_count(d, n) + 1
