"""Zoned selection graph and max-sum path search.

Vertices are the sampling points 1..M. There is an edge ``i -> j`` iff
``j`` lies in the zone right after ``i``'s and ``j - i >= a_min``, so every
feasible selection is a path visiting one vertex per zone. The graph is a
layered DAG; max-sum paths are found by backward dynamic programming in
zone order rather than by a shortest-path search with negated weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelTable
from .errors import InfeasibleSelection, NoFeasibleCompletion
from .grid import GridSpec
from .secrecy import LN2, SystemParams

NEG_INF = -math.inf


@dataclass(frozen=True)
class ZonedGraph:
    """Implicit N-partite graph over the sampling points of `grid`."""

    grid: GridSpec

    def zone_of(self, i: int) -> int:
        return self.grid.zone_of(i)

    def part(self, n: int) -> range:
        """Vertex set V_n of zone n."""
        return self.grid.zone(n)

    def has_edge(self, i: int, j: int) -> bool:
        g = self.grid
        if not (1 <= i <= g.M and 1 <= j <= g.M):
            return False
        return j - i >= g.a_min and g.zone_of(j) == g.zone_of(i) + 1

    def neighbors(self, i: int) -> range:
        """Successors of `i`, ascending."""
        g = self.grid
        z = g.zone_of(i)
        if z >= g.N:
            return range(0)
        nxt = g.zone(z + 1)
        return range(max(nxt.start, i + g.a_min), nxt.stop)

    def edges(self):
        for i in range(1, self.grid.M + 1):
            for j in self.neighbors(i):
                yield i, j

    def num_edges(self) -> int:
        return sum(len(self.neighbors(i)) for i in range(1, self.grid.M + 1))


def build_graph(grid: GridSpec) -> ZonedGraph:
    return ZonedGraph(grid)


def edge_count_formula(grid: GridSpec) -> int:
    """Closed-form edge count of the zoned graph (0 once a_min exceeds 2b)."""
    N, b, a = grid.N, grid.b, grid.a_min
    if a > 2 * b:
        return 0
    if a >= b:
        return (N - 1) * (2 * b - a) * (2 * b - a + 1) // 2
    return (N - 1) * (b * b - a * (a - 1) // 2)


@dataclass(frozen=True)
class PathPrefix:
    """Vertices chosen for zones 1..r."""

    vertices: tuple[int, ...] = ()

    @property
    def r(self) -> int:
        return len(self.vertices)

    @property
    def tail(self) -> int | None:
        return self.vertices[-1] if self.vertices else None

    def extend(self, j: int) -> PathPrefix:
        return PathPrefix(self.vertices + (j,))

    def check(self, grid: GridSpec) -> None:
        if self.r > grid.N:
            raise InfeasibleSelection(f"prefix longer than N={grid.N}")
        for n, a in enumerate(self.vertices, start=1):
            if a not in grid.zone(n):
                raise InfeasibleSelection(f"prefix vertex {a} is not in zone {n}")
        for i, j in zip(self.vertices, self.vertices[1:]):
            if j - i < grid.a_min:
                raise InfeasibleSelection(f"prefix vertices {i}, {j} closer than a_min")


@dataclass(frozen=True)
class BoundResult:
    T: float
    completion: tuple[int, ...]


class SuffixTable:
    """Best score-to-go from every vertex, by backward DP over the zones.

    ``after[j]`` is the largest score sum over feasible paths from the zone
    after ``j``'s to the last zone (0 in the last zone, ``-inf`` if ``j``
    has no completion), ``best[j] = score(j) + after[j]`` and ``succ[j]``
    is the smallest successor attaining it.
    """

    def __init__(self, graph: ZonedGraph, score, first_zone: int = 1):
        g = graph.grid
        if len(score) != g.M:
            raise ValueError(f"score must have M={g.M} entries")
        self.graph = graph
        best = [NEG_INF] * (g.M + 1)
        after = [NEG_INF] * (g.M + 1)
        succ = [0] * (g.M + 1)
        for j in g.zone(g.N):
            best[j] = float(score[j - 1])
            after[j] = 0.0
        for z in range(g.N - 1, first_zone - 1, -1):
            nxt = g.zone(z + 1)
            # running max over V_{z+1} from the right; ">=" keeps the smallest argmax
            run = [NEG_INF] * (len(nxt) + 1)
            arg = [0] * (len(nxt) + 1)
            for k in range(len(nxt) - 1, -1, -1):
                v = nxt[k]
                if best[v] >= run[k + 1]:
                    run[k], arg[k] = best[v], v
                else:
                    run[k], arg[k] = run[k + 1], arg[k + 1]
            for j in g.zone(z):
                k = max(j + g.a_min, nxt.start) - nxt.start
                if k < len(nxt) and run[k] > NEG_INF:
                    after[j] = run[k]
                    best[j] = float(score[j - 1]) + run[k]
                    succ[j] = arg[k]
        self.best = best
        self.after = after
        self.succ = succ

    def path_from(self, j: int) -> tuple[int, ...]:
        out = [j]
        while self.succ[out[-1]]:
            out.append(self.succ[out[-1]])
        return tuple(out)

    def completion(self, start: PathPrefix) -> tuple[float, tuple[int, ...]]:
        g = self.graph.grid
        zone = g.zone(start.r + 1)
        lo = zone.start if start.r == 0 else max(zone.start, start.tail + g.a_min)
        top, arg = NEG_INF, 0
        for j in range(lo, zone.stop):
            if self.best[j] > top:
                top, arg = self.best[j], j
        if arg == 0:
            raise NoFeasibleCompletion(f"prefix {start.vertices} cannot reach zone {g.N}")
        return top, self.path_from(arg)


def max_sum_path(graph: ZonedGraph, vertex_score, start: PathPrefix = PathPrefix()):
    """Maximise ``sum(vertex_score[a_n - 1] for n = r+1..N)`` over completions.

    Parameters
    ----------
    graph : ZonedGraph
    vertex_score : sequence of float
        One score per sampling point, 0-based (``vertex_score[m - 1]``).
    start : PathPrefix
        Fixed vertices for zones 1..r, ``r < N``. The empty prefix searches
        over whole selections.

    Returns
    -------
    best_sum : float
    completion : tuple of int
        Indices ``a_{r+1}, ..., a_N``; among equal sums the lexicographically
        smallest.

    Raises
    ------
    NoFeasibleCompletion
    """
    g = graph.grid
    if start.r >= g.N:
        raise ValueError("prefix already covers every zone")
    start.check(g)
    table = SuffixTable(graph, vertex_score, first_zone=start.r + 1)
    return table.completion(start)


def bob_scores(table: ChannelTable) -> list[float]:
    return [abs(h) ** 2 for h in table.h_B.tolist()]


def best_completion_bound(prefix: PathPrefix, table: ChannelTable, p: SystemParams) -> BoundResult:
    """MRT upper bound on the secrecy rate of any completion of `prefix`.

    ``T = log2(1 + P_t/sigma2 * (sum of |h_B|^2 over the prefix + best
    completion sum))``. Bob's rate under MRT on the full selection bounds
    its secrecy rate, so T is never below the secrecy rate of any feasible
    completion.
    """
    g = table.grid
    prefix.check(g)
    if prefix.r == 0:
        raise ValueError("bound needs a nonempty prefix")
    scores = bob_scores(table)
    fixed = 0.0
    for a in prefix.vertices:
        fixed += scores[a - 1]
    if prefix.r == g.N:
        return BoundResult(math.log1p(p.snr * fixed) / LN2, ())
    rest, completion = max_sum_path(build_graph(g), scores, prefix)
    return BoundResult(math.log1p(p.snr * (fixed + rest)) / LN2, completion)
