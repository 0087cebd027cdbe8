"""Graph containers for antichains, with a certified counting bound.

The container algorithm runs k rounds over the comparability graph of
the box.  Within round r, while the candidate set A is larger than m_r,
the maximum-degree vertex u of G[A] is examined (ties broken by
lexicographically smallest point): if u belongs to the antichain it goes
into the fingerprint and its closed neighborhood leaves A, otherwise u
alone leaves A.  The container of an antichain is the union of its
fingerprints and the final candidate set.

Because every step branches on a single membership query, the complete
container family is the set of leaves of the binary decision tree, which
``build_containers`` enumerates directly; by construction every
antichain follows exactly one root-to-leaf path, so the family covers
all antichains without enumerating them.

The certified bound is a union bound: the number of antichains is at
most (number of containers) * 2^(largest container), with the family
size estimated through the fingerprint binomials.  All thresholds are
exact rationals; irrational parameters are replaced by one-sided
rational roundings that only weaken the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .box import CapExceeded, GridBox, Point, iter_points, leq, middle_layer_size
from .counting import count_antichains
from .supersat import dominance_masks, pair_count_from_mask
from .rng import stream

SQRT_SCALE = 10 ** 6


@dataclass(frozen=True)
class ContainerParams:
    """Per-round density thresholds d_1 > ... > d_k and size thresholds
    m_0 >= ... (exact rationals; m_0 is the poset size)."""

    densities: tuple[Fraction, ...]
    sizes: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.sizes) != len(self.densities) + 1:
            raise ValueError("need one more size threshold than densities")
        if any(d <= 0 for d in self.densities):
            raise ValueError("densities must be positive")

    @property
    def rounds(self) -> int:
        return len(self.densities)


def sqrt_lower(x: int, scale: int = SQRT_SCALE) -> Fraction:
    """floor(sqrt(x) * scale) / scale, an exact rational <= sqrt(x)."""
    return Fraction(math.isqrt(x * scale * scale), scale)


def standard_params(box: GridBox) -> ContainerParams:
    """The two-round instantiation: d1 = D/(2n), d2 = sqrt(D)/(2n),
    m1 = N(2 + 6n/D), m2 = N(1 + 3n/D + 1/sqrt(D)).

    sqrt(D) is rounded down at scale 10^6 (so d2 only shrinks and
    1/sqrt(D) only grows), which weakens every inequality one-sidedly.
    """
    n, d = box.n, box.dims
    N = middle_layer_size(box)
    root = sqrt_lower(d)
    d1 = Fraction(d, 2 * n)
    d2 = root / (2 * n)
    m1 = N * (2 + Fraction(6 * n, d))
    m2 = N * (1 + Fraction(3 * n, d) + 1 / root)
    return ContainerParams(densities=(d1, d2),
                           sizes=(Fraction(box.size), m1, m2))


@lru_cache(maxsize=None)
def comparability_adjacency(box: GridBox) -> dict[Point, frozenset[Point]]:
    """Neighborhoods in the comparability graph (x adjacent to y iff
    x < y or y < x)."""
    points = iter_points(box)
    adj: dict[Point, set[Point]] = {p: set() for p in points}
    for i, x in enumerate(points):
        for y in points[i + 1:]:
            if leq(x, y) or leq(y, x):
                adj[x].add(y)
                adj[y].add(x)
    return {p: frozenset(s) for p, s in adj.items()}


def _max_degree_vertex(A: frozenset[Point], adj: dict[Point, frozenset[Point]]) -> Point:
    best: Point | None = None
    best_deg = -1
    for u in sorted(A):
        deg = len(adj[u] & A)
        if deg > best_deg:
            best, best_deg = u, deg
    assert best is not None
    return best


def container_for(box: GridBox, params: ContainerParams,
                  antichain: frozenset[Point]) -> frozenset[Point]:
    """The container assigned to one antichain (deterministic)."""
    adj = comparability_adjacency(box)
    A = frozenset(iter_points(box))
    S: set[Point] = set()
    for r in range(1, params.rounds + 1):
        m_r = params.sizes[r]
        while len(A) > m_r:
            u = _max_degree_vertex(A, adj)
            if u in antichain:
                S.add(u)
                A = A - adj[u] - {u}
            else:
                A = A - {u}
    return frozenset(S) | A


@dataclass(frozen=True)
class ContainerFamily:
    box: GridBox
    params: ContainerParams
    containers: tuple[frozenset[Point], ...]
    premise_status: str  # "exhaustive" | "audited" | "unchecked"

    @property
    def max_size(self) -> int:
        return max(len(c) for c in self.containers)

    def covers(self, antichain: frozenset[Point]) -> bool:
        target = container_for(self.box, self.params, antichain)
        return target in set(self.containers) and antichain <= target


def build_containers(box: GridBox, params: ContainerParams,
                     node_cap: int = 500_000,
                     premise_status: str = "unchecked") -> ContainerFamily:
    """Enumerate the complete container family via the decision tree."""
    adj = comparability_adjacency(box)
    containers: set[frozenset[Point]] = set()
    visited = 0

    def walk(r: int, A: frozenset[Point], S: frozenset[Point]) -> None:
        nonlocal visited
        visited += 1
        if visited > node_cap:
            raise CapExceeded(f"container decision tree exceeded {node_cap} nodes")
        if r > params.rounds:
            containers.add(S | A)
            return
        if len(A) <= params.sizes[r]:
            walk(r + 1, A, S)
            return
        u = _max_degree_vertex(A, adj)
        walk(r, A - {u}, S)
        walk(r, A - adj[u] - {u}, S | {u})

    walk(1, frozenset(iter_points(box)), frozenset())
    ordered = tuple(sorted(containers, key=sorted))
    return ContainerFamily(box=box, params=params, containers=ordered,
                           premise_status=premise_status)


# ---------------------------------------------------------------------------
# premise validation (the density hypothesis behind each round)
# ---------------------------------------------------------------------------

def validate_premises(box: GridBox, params: ContainerParams,
                      trials: int = 500, seed: int = 0,
                      exhaustive_limit: int = 300_000) -> tuple[str, list[str]]:
    """Check that sets larger than m_r carry >= d_r * |S| comparable pairs.

    Exhaustive over all subset sizes above the threshold when that is
    affordable, randomized otherwise.  Returns (status, failures).
    """
    points, _ = dominance_masks(box, 1)
    m0 = len(points)
    failures: list[str] = []
    status = "exhaustive"
    rng = stream(seed, 424243)
    for r in range(1, params.rounds + 1):
        m_r, d_r = params.sizes[r], params.densities[r - 1]
        lo = math.floor(m_r) + 1
        if lo > m0:
            continue  # vacuous round at this scale
        total = sum(math.comb(m0, s) for s in range(lo, m0 + 1))
        if total <= exhaustive_limit:
            for s in range(lo, m0 + 1):
                for combo in combinations(range(m0), s):
                    mask = 0
                    for i in combo:
                        mask |= 1 << i
                    if pair_count_from_mask(box, mask, 1) < d_r * s:
                        failures.append(f"round {r}: size-{s} subset below density")
        else:
            status = "audited"
            for _ in range(trials):
                s = rng.randrange(lo, m0 + 1)
                combo = rng.sample(range(m0), s)
                mask = 0
                for i in combo:
                    mask |= 1 << i
                if pair_count_from_mask(box, mask, 1) < d_r * s:
                    failures.append(f"round {r}: sampled size-{s} subset below density")
    return status, failures


# ---------------------------------------------------------------------------
# numeric bounds
# ---------------------------------------------------------------------------

def binomial_tail(m: int, t: Fraction) -> int:
    """Exact sum of C(m, s) over 0 <= s <= t (t may be fractional)."""
    top = min(m, math.floor(t))
    return sum(math.comb(m, s) for s in range(top + 1))


def binomial_sum_bound(m: int, t) -> tuple[int, float]:
    """Exact C(m, <= t) together with the analytic estimate (e*m/t)^t.

    The exact value never exceeds the estimate; both are returned so the
    inequality can be asserted.  Requires 1 <= t <= m.
    """
    t = Fraction(t)
    if not 1 <= t <= m:
        raise ValueError(f"need 1 <= t <= m, got t={t}, m={m}")
    exact = binomial_tail(m, t)
    tf = float(t)
    estimate = math.exp(tf * (1.0 + math.log(m / tf)))
    return exact, estimate


def item1_family_bound(params: ContainerParams) -> int:
    """Product over rounds of C(floor(m_{r-1}), <= m_{r-1}/(2 d_r + 1))."""
    total = 1
    for r in range(1, params.rounds + 1):
        m_prev = math.floor(params.sizes[r - 1])
        t = params.sizes[r - 1] / (2 * params.densities[r - 1] + 1)
        total *= binomial_tail(m_prev, t)
    return total


def item2_size_bound(params: ContainerParams) -> Fraction:
    """m_k + sum over rounds of (m_r - 1)/(2 d_r + 1)."""
    out = params.sizes[params.rounds]
    for r in range(1, params.rounds + 1):
        out += (params.sizes[r] - 1) / (2 * params.densities[r - 1] + 1)
    return out


def log2_upper(x: int) -> Fraction:
    """A rational upper bound on log2(x), float-backed with one-sided slack."""
    if x <= 1:
        return Fraction(0)
    return Fraction(math.log2(x)) + Fraction(1, 1 << 20)


def log2_lower(x: int) -> Fraction:
    if x <= 1:
        return Fraction(0)
    return Fraction(math.log2(x)) - Fraction(1, 1 << 20)


@dataclass(frozen=True)
class BoundReport:
    """The certified upper bound on log2 of the antichain count."""

    n: int
    dims: int
    middle_layer: int
    family_size: int
    family_max_container: int
    log2_count_bound: Fraction       # log2 of the fingerprint-binomial product
    size_bound: Fraction             # container size bound (capped at box size)
    certified_log2_upper: Fraction   # their sum
    premise_status: str
    exact_count: int | None = None
    exact_log2: Fraction | None = None


EXACT_COUNT_LIMIT = 32


def certified_upper_bound(box: GridBox, params: ContainerParams | None = None,
                          audit_trials: int = 200, seed: int = 0) -> BoundReport:
    """Build the container family and assemble the union bound.

    When the box is small enough the exact antichain count is computed
    alongside, so the certificate can be compared against the truth.
    """
    if params is None:
        params = standard_params(box)
    status, failures = validate_premises(box, params, trials=audit_trials, seed=seed)
    if failures:
        raise ValueError("density premises failed: " + "; ".join(failures[:3]))
    family = build_containers(box, params, premise_status=status)
    count_bound = item1_family_bound(params)
    size_bound = min(item2_size_bound(params), Fraction(box.size))
    if len(family.containers) > count_bound or family.max_size > size_bound:
        raise RuntimeError("constructed family exceeds its certified bounds")
    certified = log2_upper(count_bound) + size_bound
    exact = exact_log2 = None
    if box.size <= EXACT_COUNT_LIMIT:
        exact = count_antichains(box)
        exact_log2 = log2_lower(exact)
    return BoundReport(
        n=box.n, dims=box.dims, middle_layer=middle_layer_size(box),
        family_size=len(family.containers),
        family_max_container=family.max_size,
        log2_count_bound=log2_upper(count_bound),
        size_bound=size_bound,
        certified_log2_upper=certified,
        premise_status=status,
        exact_count=exact, exact_log2=exact_log2)
