"""Weighted bipartite cover graphs between consecutive level sets.

An edge joins v (rank i) to u (rank i+1) when u = v + e_t; its color is
l = u_t and its weight is a_l = l*(n-l).  Weights are exact integers
throughout.  The weighted degree of either endpoint has a closed form in
the coordinate profile b_j (number of coordinates equal to j), and every
edge ties the two degrees together through a linear identity in (i, l).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .box import GridBox, Point, enumerate_level, rank

Edge = tuple[Point, Point, int, int]  # (v, u, color, weight)


def color_weight(n: int, l: int) -> int:
    """a_l = l*(n-l); a_0 = a_n = 0 and a_{l+1} = a_l + n - 2l - 1."""
    return l * (n - l)


def coordinate_profile(x: Point, n: int) -> tuple[int, ...]:
    """b_j(x) = number of coordinates of x equal to j, for j = 0..n-1."""
    b = [0] * n
    for c in x:
        b[c] += 1
    return tuple(b)


@dataclass(frozen=True)
class LevelGraph:
    """All cover edges between V_i and V_{i+1}, with colors and weights."""

    box: GridBox
    i: int
    lower: tuple[Point, ...]
    upper: tuple[Point, ...]
    edges: tuple[Edge, ...]

    @property
    def n(self) -> int:
        return self.box.n

    @property
    def dims(self) -> int:
        return self.box.dims

    @property
    def delta(self) -> int:
        """delta = dims*(n-1) - 2*(i+1), the rank defect of this level pair."""
        return self.dims * (self.n - 1) - 2 * (self.i + 1)


def build_level_graph(box: GridBox, i: int, cap: int = 500_000) -> LevelGraph:
    """Construct G_i between V_i and V_{i+1} with all cover edges."""
    if not 0 <= i <= box.max_rank - 1:
        raise ValueError(f"no level graph at i={i} for max rank {box.max_rank}")
    lower = enumerate_level(box, i, cap=cap)
    upper = enumerate_level(box, i + 1, cap=cap)
    edges = []
    for v in lower:
        for t in range(box.dims):
            if v[t] + 1 < box.n:
                u = v[:t] + (v[t] + 1,) + v[t + 1:]
                l = u[t]
                edges.append((v, u, l, color_weight(box.n, l)))
    return LevelGraph(box=box, i=i, lower=tuple(lower), upper=tuple(upper),
                      edges=tuple(edges))


def weighted_degree_lower(g: LevelGraph, v: Point) -> int:
    """deg(v) = sum over j of b_j(v) * a_{j+1}, for v in the lower level."""
    if rank(v) != g.i:
        raise ValueError(f"{v} is not in level {g.i}")
    n = g.n
    b = coordinate_profile(v, n)
    return sum(b[j] * color_weight(n, j + 1) for j in range(n - 1))


def weighted_degree_upper(g: LevelGraph, u: Point) -> int:
    """deg(u) = sum over j of b_j(u) * a_j, for u in the upper level."""
    if rank(u) != g.i + 1:
        raise ValueError(f"{u} is not in level {g.i + 1}")
    n = g.n
    b = coordinate_profile(u, n)
    return sum(b[j] * color_weight(n, j) for j in range(1, n))


def direct_degree_lower(g: LevelGraph, v: Point) -> int:
    """Edge-weight sum out of v, straight from the edge list."""
    return sum(w for (a, _, _, w) in g.edges if a == v)


def direct_degree_upper(g: LevelGraph, u: Point) -> int:
    """Edge-weight sum into u, straight from the edge list."""
    return sum(w for (_, b, _, w) in g.edges if b == u)


def check_degree_identity(g: LevelGraph) -> tuple[bool, Edge | None]:
    """Verify deg(v) = deg(u) + dims*(n-1) - 2*(i+1) + 2l - n + 1 on every edge.

    Returns (True, None) if the identity holds throughout, otherwise
    (False, counterexample_edge).
    """
    n, dims, i = g.n, g.dims, g.i
    lower_deg = {v: weighted_degree_lower(g, v) for v in g.lower}
    upper_deg = {u: weighted_degree_upper(g, u) for u in g.upper}
    for edge in g.edges:
        v, u, l, _ = edge
        if lower_deg[v] != upper_deg[u] + dims * (n - 1) - 2 * (i + 1) + 2 * l - n + 1:
            return False, edge
    return True, None


def raw_edge_fraction(g: LevelGraph) -> dict[tuple[Point, Point], Fraction]:
    """f(v,u) = w_{vu} / deg(v), the unscaled per-edge fraction."""
    lower_deg = {v: weighted_degree_lower(g, v) for v in g.lower}
    return {(v, u): Fraction(w, lower_deg[v]) for (v, u, _, w) in g.edges}


def export_edge_list(g: LevelGraph) -> str:
    """Debug dump: one edge per line as 'v-coords u-coords color weight'."""
    lines = [f"# level graph n={g.n} dims={g.dims} i={g.i} edges={len(g.edges)}"]
    for v, u, l, w in g.edges:
        lines.append("%s %s %d %d" % (",".join(map(str, v)), ",".join(map(str, u)), l, w))
    return "\n".join(lines) + "\n"
