"""Random chain decompositions of the box from per-level matchings.

Each level pair (V_i, V_{i+1}) carries a fractional matching built from
the weighted cover graph: below the middle, f(v,u) = w_{vu}/deg(v) so
every lower vertex is saturated; in a thin band just under the middle
the same f is scaled by the largest theta <= (D-3)/(D-1) that keeps the
total mass integral; above the middle the construction is mirrored
through the reflection x -> (n-1)-x, which turns f into w_{vu}/deg(u).
Decomposing each fractional matching exactly (see ``matching``) gives a
distribution over matchings per level; sampling one matching per level
and taking connected components of the union yields a partition of the
box into rank-consecutive chains.

The number of chains N is determined by the matching sizes alone, so the
bound N <= (1 + 3n/D) * N_{n,D} is checkable per sample with exact
rationals.  For D <= 3 the scaled band has no valid theta; those levels
fall back to one deterministic maximum matching and the decomposition is
flagged as out of theorem scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .box import GridBox, Point, iter_points, level_size, middle_layer_size
from .levelgraph import (LevelGraph, build_level_graph, raw_edge_fraction,
                         weighted_degree_upper)
from .matching import (BipartiteGraph, FractionalMatching, MatchingDistribution,
                       decompose_fractional_matching, maximum_matching,
                       sample_matching)
from .rng import derive_seed

PointEdge = tuple[Point, Point]


class ScaledRegimeUndefined(ValueError):
    """theta <= (D-3)/(D-1) is nonpositive for D <= 3; no fractional plan exists."""


@dataclass(frozen=True)
class LevelPlan:
    """Which construction a level uses, and the matching size it yields."""

    i: int
    regime: str  # full-lower | scaled | full-upper-mirrored | scaled-mirrored
    theta: Fraction
    m: int
    in_theorem_scope: bool = True


def _scaled_theta(d: int, side: int) -> tuple[Fraction, int]:
    """Largest theta <= (D-3)/(D-1) with theta*side integral, plus m."""
    if d <= 3:
        raise ScaledRegimeUndefined(f"(D-3)/(D-1) is not positive for D={d}")
    m = side * (d - 3) // (d - 1)
    theta = Fraction(m, side)
    if theta < 1 - Fraction(3, d):
        raise AssertionError(f"theta={theta} fell below 1 - 3/D at D={d}")
    if m < 1:
        raise AssertionError(f"scaled matching size vanished (side={side}, D={d})")
    return theta, m


def plan_level(box: GridBox, i: int) -> LevelPlan:
    """Regime, theta and matching size for level pair (V_i, V_{i+1})."""
    n, d = box.n, box.dims
    if not 0 <= i <= box.max_rank - 1:
        raise ValueError(f"no level pair at i={i}")
    full_cut = Fraction((n - 1) * (d - 1), 2)
    half = Fraction((n - 1) * d, 2)
    if i <= full_cut:
        return LevelPlan(i=i, regime="full-lower", theta=Fraction(1),
                         m=level_size(box, i))
    if i <= half:
        theta, m = _scaled_theta(d, level_size(box, i))
        return LevelPlan(i=i, regime="scaled", theta=theta, m=m)
    mirror = plan_level(box, box.max_rank - 1 - i)
    regime = ("full-upper-mirrored" if mirror.regime == "full-lower"
              else "scaled-mirrored")
    return LevelPlan(i=i, regime=regime, theta=mirror.theta, m=mirror.m)


def _level_bipartite(g: LevelGraph) -> BipartiteGraph:
    return BipartiteGraph(left=g.lower, right=g.upper,
                          edges=tuple((v, u) for (v, u, _, _) in g.edges))


def build_level_fraction(g: LevelGraph) -> tuple[FractionalMatching, LevelPlan]:
    """The fractional matching a level samples from, with its plan.

    Below the middle this is (theta *) w_{vu}/deg(v); above it is the
    mirror image, which works out to (theta *) w_{vu}/deg(u) because the
    weights a_j = j(n-j) are invariant under the reflection.  Raises
    ScaledRegimeUndefined for scaled levels of boxes with D <= 3.
    """
    plan = plan_level(g.box, g.i)
    if plan.regime in ("full-lower", "scaled"):
        raw = raw_edge_fraction(g)
        values = tuple(plan.theta * raw[(v, u)] for (v, u, _, _) in g.edges)
    else:
        upper_deg = {u: weighted_degree_upper(g, u) for u in g.upper}
        values = tuple(plan.theta * Fraction(w, upper_deg[u])
                       for (_, u, _, w) in g.edges)
    fm = FractionalMatching(graph=_level_bipartite(g), values=values, m=plan.m)
    return fm, plan


def check_marginal_sum_bound(g: LevelGraph, f=None) -> tuple[bool, Point | None]:
    """Exact dichotomy for the unscaled f: upper-vertex sums are <= 1 when
    delta >= n-1, and <= (D-1)/(D-3) when 0 <= delta < n-1 (for D >= 4).

    For 0 <= delta < n-1 with D <= 3 no bound is claimed (those levels are
    out of theorem scope).  Returns (True, None) or (False, witness u).
    """
    if f is None:
        f = raw_edge_fraction(g)
    n, d = g.n, g.dims
    delta = g.delta
    if delta < 0 or (delta < n - 1 and d <= 3):
        return True, None
    cap = Fraction(1) if delta >= n - 1 else Fraction(d - 1, d - 3)
    sums: dict[Point, Fraction] = {}
    for (v, u) in f:
        sums[u] = sums.get(u, Fraction(0)) + f[(v, u)]
    for u in g.upper:
        if sums.get(u, Fraction(0)) > cap:
            return False, u
    return True, None


@dataclass(frozen=True)
class LevelDistribution:
    graph: LevelGraph
    plan: LevelPlan
    dist: MatchingDistribution


@lru_cache(maxsize=None)
def level_distribution(box: GridBox, i: int) -> LevelDistribution:
    """The (cached) matching distribution for one level pair."""
    g = build_level_graph(box, i)
    try:
        fm, plan = build_level_fraction(g)
    except ScaledRegimeUndefined:
        bg = _level_bipartite(g)
        atom = maximum_matching(bg)
        side = min(len(g.lower), len(g.upper))
        plan0 = plan_level_regime_only(box, i)
        plan = LevelPlan(i=i, regime=plan0, theta=Fraction(len(atom), side),
                         m=len(atom), in_theorem_scope=False)
        dist = MatchingDistribution(graph=bg, m=len(atom),
                                    atoms=((atom, Fraction(1)),))
        return LevelDistribution(graph=g, plan=plan, dist=dist)
    dist = decompose_fractional_matching(fm)
    return LevelDistribution(graph=g, plan=plan, dist=dist)


def plan_level_regime_only(box: GridBox, i: int) -> str:
    """Regime label without computing theta (usable when theta is undefined)."""
    n, d = box.n, box.dims
    full_cut = Fraction((n - 1) * (d - 1), 2)
    half = Fraction((n - 1) * d, 2)
    if i <= full_cut:
        return "full-lower"
    if i <= half:
        return "scaled"
    mirrored = plan_level_regime_only(box, box.max_rank - 1 - i)
    return "full-upper-mirrored" if mirrored == "full-lower" else "scaled-mirrored"


@dataclass(frozen=True)
class ChainDecomposition:
    """A partition of the box into rank-consecutive chains, plus the
    sampled matchings it came from.  Chains are bottom-up and sorted by
    their minimal element, so equal seeds give identical objects."""

    box: GridBox
    seed: int
    chains: tuple[tuple[Point, ...], ...]
    matchings: tuple[frozenset[PointEdge], ...]
    in_theorem_scope: bool

    @property
    def n_chains(self) -> int:
        return len(self.chains)


@lru_cache(maxsize=None)
def _sorted_points(box: GridBox) -> tuple[Point, ...]:
    return tuple(iter_points(box))


def sample_chain_decomposition(box: GridBox, seed: int) -> ChainDecomposition:
    """Sample one matching per level (independent streams derived from the
    master seed) and split the box into the chains of their union."""
    matchings: list[frozenset[PointEdge]] = []
    in_scope = True
    for i in range(box.max_rank):
        ld = level_distribution(box, i)
        in_scope = in_scope and ld.plan.in_theorem_scope
        atom = sample_matching(ld.dist, derive_seed(seed, i))
        edges = ld.dist.graph.edges
        matchings.append(frozenset(edges[e] for e in atom))
    up: dict[Point, Point] = {}
    has_down: set[Point] = set()
    for level_matching in matchings:
        for v, u in level_matching:
            up[v] = u
            has_down.add(u)
    chains: list[tuple[Point, ...]] = []
    for p in _sorted_points(box):
        if p in has_down:
            continue
        chain = [p]
        while chain[-1] in up:
            chain.append(up[chain[-1]])
        chains.append(tuple(chain))
    return ChainDecomposition(box=box, seed=seed, chains=tuple(chains),
                              matchings=tuple(matchings),
                              in_theorem_scope=in_scope)


def chain_count_bound(box: GridBox) -> Fraction:
    """(1 + 3n/D) * N_{n,D}, the per-sample cap on the number of chains."""
    return (1 + Fraction(3 * box.n, box.dims)) * middle_layer_size(box)


def check_chain_count_bound(cd: ChainDecomposition) -> tuple[bool, Fraction]:
    bound = chain_count_bound(cd.box)
    return cd.n_chains <= bound, bound


def closest_ranks_in_window(cd: ChainDecomposition) -> tuple[bool, tuple[Point, ...] | None]:
    """Every chain's element closest to the middle layer has rank inside
    [k - (n-1)/2, k + (n+1)/2]; levels outside that window carry full
    matchings, so no chain can stop there."""
    box = cd.box
    k = box.middle_rank
    lo = k - Fraction(box.n - 1, 2)
    hi = k + Fraction(box.n + 1, 2)
    for chain in cd.chains:
        bottom, top = sum(chain[0]), sum(chain[-1])
        closest = min(max(k, bottom), top)
        if not lo <= closest <= hi:
            return False, chain
    return True, None


def estimate_pair_probability(box: GridBox, x: Point, y: Point,
                              trials: int, seed: int) -> Fraction:
    """Fraction of sampled decompositions placing x and y in one chain."""
    box.require(x)
    box.require(y)
    hits = 0
    for t in range(trials):
        cd = sample_chain_decomposition(box, derive_seed(seed, 1_000_003, t))
        owner: dict[Point, int] = {}
        for ci, chain in enumerate(cd.chains):
            for p in chain:
                owner[p] = ci
        if owner[x] == owner[y]:
            hits += 1
    return Fraction(hits, trials)


def pair_probability_bound(box: GridBox, a: int) -> Fraction:
    """a! * (n/D)^a, the same-chain probability cap for a rank gap of a."""
    import math
    return math.factorial(a) * Fraction(box.n, box.dims) ** a


def export_chains(cd: ChainDecomposition) -> str:
    """One chain per line; the header records box, seed, N and the cap."""
    bound = chain_count_bound(cd.box)
    lines = [
        f"# chains n={cd.box.n} dims={cd.box.dims} seed={cd.seed} "
        f"N={cd.n_chains} bound={bound.numerator}/{bound.denominator} "
        f"in_theorem_scope={cd.in_theorem_scope}"
    ]
    for chain in cd.chains:
        lines.append(" -> ".join(",".join(map(str, p)) for p in chain))
    return "\n".join(lines) + "\n"
