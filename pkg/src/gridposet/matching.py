"""Exact decomposition of fractional matchings into matching distributions.

A fractional matching on a bipartite (multi)graph assigns each edge a
rational f(e) in [0,1] with per-vertex sums at most 1; when the total
mass m is an integer, f lies in the convex hull of the characteristic
vectors of size-m matchings.  ``decompose_fractional_matching`` writes f
as an explicit convex combination of at most |E| + 1 such matchings,
entirely in exact rational arithmetic, so the marginal identity

    sum over atoms (p * chi_M) = f

holds coordinate-by-coordinate with no tolerance.

The algorithm peels one extreme point at a time.  The remainder r (with
remaining mass mu) always satisfies r/mu in the polytope; a matching M
is chosen inside the support of r, through every edge with r(e) = mu and
covering every vertex whose incident sum equals mu (a vertex of the
minimal face containing r/mu).  Peeling M with the largest feasible
coefficient keeps every tight constraint tight and pins at least one new
one, so the dimension of the carrying face drops every step and the atom
count is bounded by |E| + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Hashable, Sequence

from .rng import stream

Vertex = Hashable


class InfeasibleMatching(ValueError):
    """The given edge weights violate the fractional matching constraints."""


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite multigraph; edges reference vertices by label, parallel
    edges are allowed and are distinguished by their index."""

    left: tuple[Vertex, ...]
    right: tuple[Vertex, ...]
    edges: tuple[tuple[Vertex, Vertex], ...]

    def __post_init__(self):
        ls, rs = set(self.left), set(self.right)
        if len(ls) != len(self.left) or len(rs) != len(self.right):
            raise ValueError("duplicate vertex labels")
        if ls & rs:
            raise ValueError("left and right vertex sets overlap")
        for a, b in self.edges:
            if a not in ls or b not in rs:
                raise ValueError(f"edge ({a}, {b}) does not join left to right")


@dataclass(frozen=True)
class FractionalMatching:
    """Exact edge weights f (indexed like graph.edges) with integral mass m."""

    graph: BipartiteGraph
    values: tuple[Fraction, ...]
    m: int

    def vertex_sums(self) -> dict[Vertex, Fraction]:
        sums: dict[Vertex, Fraction] = {}
        for (a, b), f in zip(self.graph.edges, self.values):
            sums[a] = sums.get(a, Fraction(0)) + f
            sums[b] = sums.get(b, Fraction(0)) + f
        return sums


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_fractional_matching(fm: FractionalMatching) -> ValidationResult:
    """Check the polytope constraints exactly; report the first violation."""
    if len(fm.values) != len(fm.graph.edges):
        return ValidationResult(False, "value count does not match edge count")
    for e, f in enumerate(fm.values):
        if not 0 <= f <= 1:
            return ValidationResult(False, f"edge {e} has f={f} outside [0,1]")
    for v, s in fm.vertex_sums().items():
        if s > 1:
            return ValidationResult(False, f"vertex {v!r} has incident sum {s} > 1")
    total = sum(fm.values, Fraction(0))
    if total != fm.m:
        return ValidationResult(False, f"total mass {total} != m = {fm.m}")
    return ValidationResult(True)


@dataclass
class MatchingDistribution:
    """Finite distribution over size-m matchings, probabilities exact.

    Atoms are frozensets of edge indices; the marginal of every edge
    equals the fractional matching the distribution was built from.
    """

    graph: BipartiteGraph
    m: int
    atoms: tuple[tuple[frozenset[int], Fraction], ...]
    _cumulative: tuple[tuple[int, ...], int] | None = field(
        default=None, repr=False, compare=False)

    def total_probability(self) -> Fraction:
        return sum((p for _, p in self.atoms), Fraction(0))

    def marginals(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * len(self.graph.edges)
        for matching, p in self.atoms:
            for e in matching:
                out[e] += p
        return tuple(out)

    def _cumulative_weights(self) -> tuple[tuple[int, ...], int]:
        if self._cumulative is None:
            denom = lcm(*(p.denominator for _, p in self.atoms))
            acc = 0
            cum = []
            for _, p in self.atoms:
                acc += p.numerator * (denom // p.denominator)
                cum.append(acc)
            assert acc == denom
            self._cumulative = (tuple(cum), denom)
        return self._cumulative


def sample_matching(dist: MatchingDistribution, seed: int) -> frozenset[int]:
    """Draw one atom with its exact probability; same seed, same draw."""
    from bisect import bisect_right

    cum, denom = dist._cumulative_weights()
    k = stream(seed).randrange(denom)
    return dist.atoms[bisect_right(cum, k)][0]


def format_distribution(dist: MatchingDistribution) -> str:
    """Audit dump: one atom per line, 'p/q<TAB>edge,edge,...'."""
    lines = [f"# matching distribution m={dist.m} atoms={len(dist.atoms)}"]
    for matching, p in dist.atoms:
        edges = " ".join(
            f"{dist.graph.edges[e][0]}->{dist.graph.edges[e][1]}"
            for e in sorted(matching))
        lines.append(f"{p.numerator}/{p.denominator}\t{edges}")
    return "\n".join(lines) + "\n"


def maximum_matching(graph: BipartiteGraph) -> frozenset[int]:
    """A deterministic maximum-cardinality matching (edge indices).

    Augmenting paths are searched from left vertices in label order with
    lowest-index edges first, so repeated calls agree exactly.
    """
    incident: dict[Vertex, list[int]] = {}
    for e, (a, b) in enumerate(graph.edges):
        incident.setdefault(a, []).append(e)
        incident.setdefault(b, []).append(e)
    mate: dict[Vertex, int] = {}
    chosen: set[int] = set()

    def augment(source: Vertex) -> bool:
        parent: dict[Vertex, int] = {}
        seen = {source}
        queue = [source]
        target = None
        while queue and target is None:
            v = queue.pop(0)
            for e in incident.get(v, ()):
                if e in chosen:
                    continue
                a, b = graph.edges[e]
                u = b if v == a else a
                if u in seen:
                    continue
                seen.add(u)
                parent[u] = e
                if u not in mate:
                    target = u
                    break
                back = mate[u]
                w = graph.edges[back][0] if graph.edges[back][1] == u else graph.edges[back][1]
                if w not in seen:
                    seen.add(w)
                    parent[w] = back
                    queue.append(w)
        if target is None:
            return False
        v = target
        while True:
            e = parent[v]
            a, b = graph.edges[e]
            other = a if b == v else b
            if e in chosen:
                chosen.discard(e)
                v = other
            else:
                chosen.add(e)
                mate[a] = e
                mate[b] = e
                if other not in parent:
                    break
                v = other
        return True

    for v in sorted((v for v in graph.left if v in incident), key=str):
        if v not in mate:
            augment(v)
    return frozenset(chosen)


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

def decompose_fractional_matching(fm: FractionalMatching) -> MatchingDistribution:
    """Write fm as an exact distribution over size-m matchings.

    Raises InfeasibleMatching when validation fails; any internal failure
    to extract a matching signals a bug and raises RuntimeError.
    """
    check = validate_fractional_matching(fm)
    if not check:
        raise InfeasibleMatching(check.violation)

    graph = fm.graph
    edges = graph.edges
    n_edges = len(edges)
    if fm.m == 0:
        return MatchingDistribution(graph=graph, m=0,
                                    atoms=((frozenset(), Fraction(1)),))

    # mutable peeling state, all exact
    r = list(fm.values)
    mu = Fraction(1)
    sigma: dict[Vertex, Fraction] = {}
    incident: dict[Vertex, set[int]] = {}
    for e, ((a, b), f) in enumerate(zip(edges, fm.values)):
        if f > 0:
            for v in (a, b):
                sigma[v] = sigma.get(v, Fraction(0)) + f
                incident.setdefault(v, set()).add(e)
    supp = {e for e in range(n_edges) if r[e] > 0}

    atoms: list[tuple[frozenset[int], Fraction]] = []
    previous: frozenset[int] = frozenset()
    for _ in range(n_edges + 2):
        if mu == 0:
            break
        forced = {e for e in supp if r[e] == mu}
        tight = {v for v, s in sigma.items() if incident.get(v) and s == mu}
        matching = _extreme_matching(edges, supp, incident, forced, tight,
                                     fm.m, previous)
        covered = set()
        for e in matching:
            covered.update(edges[e])
        p = mu
        for e in matching:
            if r[e] < p:
                p = r[e]
        for e in supp:
            if e not in matching:
                slack = mu - r[e]
                if slack < p:
                    p = slack
        for v, eids in incident.items():
            if eids and v not in covered:
                slack = mu - sigma[v]
                if slack < p:
                    p = slack
        if p <= 0:
            raise RuntimeError("peeling step with nonpositive coefficient")
        atoms.append((matching, p))
        mu -= p
        for e in matching:
            r[e] -= p
            a, b = edges[e]
            sigma[a] -= p
            sigma[b] -= p
            if r[e] == 0:
                supp.discard(e)
                incident[a].discard(e)
                incident[b].discard(e)
        previous = matching
    else:
        raise RuntimeError("decomposition did not terminate within |E| + 1 steps")

    if mu != 0 or supp:
        raise RuntimeError("decomposition left residual mass")
    atoms.sort(key=lambda ap: sorted(ap[0]))
    return MatchingDistribution(graph=graph, m=fm.m, atoms=tuple(atoms))


def _extreme_matching(edges: Sequence[tuple[Vertex, Vertex]],
                      supp: set[int],
                      incident: dict[Vertex, set[int]],
                      forced: set[int],
                      tight: set[Vertex],
                      m: int,
                      hint: frozenset[int]) -> frozenset[int]:
    """A size-m matching M with forced ⊆ M ⊆ supp covering all tight vertices.

    Forced edges (full fractional value) are taken first; the rest of the
    matching is grown inside the reduced support by augmenting paths, then
    repaired with even alternating walks until every tight vertex is
    covered.  Existence of such M is exactly polytope membership, so any
    failure here is an internal error.
    """
    matched_edge: dict[Vertex, int] = {}
    for e in forced:
        a, b = edges[e]
        if a in matched_edge or b in matched_edge:
            raise RuntimeError("forced edges do not form a matching")
        matched_edge[a] = e
        matched_edge[b] = e
    blocked = set(matched_edge)  # endpoints of forced edges stay untouched

    def usable(e: int) -> bool:
        a, b = edges[e]
        return e in supp and a not in blocked and b not in blocked

    chosen: set[int] = set(forced)
    # greedy warm start from the previous atom's matching
    for e in sorted(hint):
        if len(chosen) == m:
            break
        a, b = edges[e]
        if usable(e) and a not in matched_edge and b not in matched_edge:
            chosen.add(e)
            matched_edge[a] = e
            matched_edge[b] = e

    lefts = sorted((v for v in incident if any(edges[e][0] == v for e in incident[v])),
                   key=str)

    def augment(source: Vertex) -> bool:
        """BFS an augmenting path from an uncovered left vertex; flip it."""
        parent_edge: dict[Vertex, int] = {}
        seen = {source}
        queue = [source]
        target = None
        while queue and target is None:
            v = queue.pop(0)
            for e in sorted(incident[v]):
                if not usable(e) or e in chosen:
                    continue
                a, b = edges[e]
                u = b if v == a else a
                if u in seen:
                    continue
                seen.add(u)
                parent_edge[u] = e
                if u not in matched_edge:
                    target = u
                    break
                back = matched_edge[u]
                w = edges[back][0] if edges[back][1] == u else edges[back][1]
                if w not in seen:
                    seen.add(w)
                    parent_edge[w] = back
                    queue.append(w)
        if target is None:
            return False
        v = target
        while True:
            e = parent_edge[v]
            a, b = edges[e]
            other = a if b == v else b
            if e in chosen:
                chosen.discard(e)
                v = other
            else:
                chosen.add(e)
                matched_edge[a] = e
                matched_edge[b] = e
                if other not in parent_edge:
                    break
                v = other
        return True

    for v in lefts:
        if len(chosen) == m:
            break
        if v in matched_edge or v in blocked:
            continue
        augment(v)
    if len(chosen) != m:
        raise RuntimeError(
            f"could not reach matching size {m} (got {len(chosen)})")

    for v in sorted(tight, key=str):
        if v in matched_edge:
            continue
        if not _cover_by_alternating_flip(edges, incident, supp, blocked,
                                          chosen, matched_edge, tight, v):
            raise RuntimeError(f"could not cover tight vertex {v!r}")
    return frozenset(chosen)


def _cover_by_alternating_flip(edges, incident, supp, blocked,
                               chosen: set[int],
                               matched_edge: dict[Vertex, int],
                               tight: set[Vertex],
                               source: Vertex) -> bool:
    """Cover `source` by flipping an even alternating walk that ends with a
    matched edge at a non-tight vertex (which becomes the only uncovered one)."""
    parent_edge: dict[Vertex, int] = {}
    seen = {source}
    # the source is uncovered, so the walk opens with an unmatched edge;
    # seeding via_matched=True makes the alternation rule enforce that
    frontier = [(source, True)]
    end = None
    while frontier and end is None:
        nxt = []
        for v, via_matched in frontier:
            for e in sorted(incident[v]):
                if e not in supp:
                    continue
                a, b = edges[e]
                if a in blocked or b in blocked:
                    continue
                in_m = e in chosen
                if in_m == via_matched:  # walk must alternate
                    continue
                u = b if v == a else a
                if u in seen:
                    continue
                seen.add(u)
                parent_edge[u] = e
                if in_m and u not in tight:
                    end = u
                    break
                nxt.append((u, in_m))
            if end is not None:
                break
        frontier = nxt
    if end is None:
        return False
    v = end
    while v != source:
        e = parent_edge[v]
        a, b = edges[e]
        other = a if b == v else b
        if e in chosen:
            chosen.discard(e)
            if matched_edge.get(a) == e:
                del matched_edge[a]
            if matched_edge.get(b) == e:
                del matched_edge[b]
        else:
            chosen.add(e)
            matched_edge[a] = e
            matched_edge[b] = e
        v = other
    return True
