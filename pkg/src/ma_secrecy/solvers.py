"""Point-selection solvers: exact partial enumeration, sequential update,
brute force and the three reference schemes (MRT, channel difference, FPA).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import ChannelTable, complex_to_pairs
from .errors import EmptyCandidateSet, FpaInfeasible
from .graph import NEG_INF, SuffixTable, bob_scores, build_graph, max_sum_path
from .grid import GridSpec, greedy_witness
from .secrecy import (
    LN2,
    Selection,
    SelectionEvaluator,
    SystemParams,
    channels_of,
    excess_eigenvalue,
    max_secrecy_rate,
    mrt_beamformer,
    optimal_beamformer,
    secrecy_rate_given_w,
)

SCHEMA_VERSION = 1


@dataclass
class SolveStats:
    nodes_expanded: int = 0
    bound_calls: int = 0
    bound_prunes: int = 0
    rate_evaluations: int = 0


@dataclass(eq=False)
class SolveReport:
    method: str
    selection: Selection
    rate: float
    beamformer: np.ndarray
    stats: SolveStats = field(default_factory=SolveStats)
    trace: tuple[float, ...] = ()  # incumbent rates, in update order

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "method": self.method,
            "selection": list(self.selection.indices),
            "rate": self.rate,
            "beamformer": complex_to_pairs(self.beamformer),
            "stats": asdict(self.stats),
        }


def _report(method, table, p, indices, rate, stats, trace=()):
    sel = Selection(tuple(indices), table.grid)
    h_B, h_E = channels_of(sel, table)
    return SolveReport(method, sel, rate, optimal_beamformer(h_B, h_E, p), stats, tuple(trace))


def _vector_rate(table, p, indices) -> float:
    """Max secrecy rate straight from the stacked channel vectors."""
    idx = np.asarray(indices) - 1
    scale = math.sqrt(p.snr)
    u = scale * np.conj(table.h_B[idx])
    v = scale * np.conj(table.h_E[idx])
    pu = float(np.vdot(u, u).real)
    qv = float(np.vdot(v, v).real)
    if len(idx) == 1:
        return (math.log1p(pu) - math.log1p(qv)) / LN2
    s = np.vdot(u, v)
    g = 0.0
    if pu > 0:
        r = v - (s / pu) * u
        g = pu * float(np.vdot(r, r).real) / (1.0 + qv)
    return math.log1p(excess_eigenvalue(pu, qv, abs(s) ** 2, g)) / LN2


def feasible_selections(grid: GridSpec):
    """All feasible selections in lexicographic order."""
    N, a_min = grid.N, grid.a_min

    def rec(n, prefix):
        if n > N:
            yield tuple(prefix)
            return
        zone = grid.zone(n)
        lo = zone.start if not prefix else max(zone.start, prefix[-1] + a_min)
        for m in range(lo, zone.stop):
            prefix.append(m)
            yield from rec(n + 1, prefix)
            prefix.pop()

    yield from rec(1, [])


def brute_force(table: ChannelTable, p: SystemParams) -> SolveReport:
    """Exhaustive search; ties go to the lexicographically smallest selection.

    Rates are computed from the channel vectors directly, independently of
    the additive-sum evaluator used by the other solvers. Only meant for
    small grids.
    """
    stats = SolveStats()
    best, best_rate = None, NEG_INF
    for sel in feasible_selections(table.grid):
        rate = _vector_rate(table, p, sel)
        stats.rate_evaluations += 1
        stats.nodes_expanded += 1
        if rate > best_rate:
            best, best_rate = sel, rate
    return _report("brute", table, p, best, best_rate, stats)


def fpa_selection(grid: GridSpec) -> tuple[int, ...]:
    """Antenna n at the midpoint of zone n, offset ceil(b/2) into the zone."""
    if grid.b < grid.a_min:
        raise FpaInfeasible(f"zone midpoints are b={grid.b} apart but a_min={grid.a_min}")
    off = -(-grid.b // 2)
    return tuple(grid.b * (n - 1) + off for n in range(1, grid.N + 1))


def default_init(grid: GridSpec) -> tuple[int, ...]:
    """FPA layout when it is feasible, else the leftmost feasible packing."""
    if grid.b >= grid.a_min:
        return fpa_selection(grid)
    return tuple(greedy_witness(grid.M, grid.N, grid.a_min))


def sequential_update(table: ChannelTable, p: SystemParams, init=None) -> SolveReport:
    """One in-order pass re-choosing each antenna's point given its neighbours.

    Antenna n picks the best point of its zone that keeps ``a_min`` to the
    already-updated antenna n-1 and to the not-yet-updated antenna n+1. The
    current point is always kept as a candidate, so the rate never drops
    below that of `init`. At most M rate evaluations.
    """
    grid = table.grid
    a = list(Selection(tuple(init if init is not None else default_init(grid)), grid))
    ev = SelectionEvaluator(table, p)
    N, a_min = grid.N, grid.a_min
    trace = []
    rate = NEG_INF
    for k in range(N):
        cand = [m for m in grid.zone(k + 1)
                if (k == 0 or m - a[k - 1] >= a_min) and (k == N - 1 or a[k + 1] - m >= a_min)]
        if a[k] not in cand:
            cand = sorted(cand + [a[k]])
        if not cand:
            raise EmptyCandidateSet(f"no candidate point for antenna {k + 1}")
        best_m, best_rate = None, NEG_INF
        for m in cand:
            a[k] = m
            r = ev.rate(a)
            if r > best_rate:
                best_m, best_rate = m, r
        a[k] = best_m
        rate = best_rate
        trace.append(rate)
    stats = SolveStats(rate_evaluations=ev.evaluations)
    return _report("sequential", table, p, a, rate, stats, trace)


def partial_enumeration(table: ChannelTable, p: SystemParams, warm_start=None) -> SolveReport:
    """Exact optimum by depth-first prefix enumeration with MRT bounding.

    The incumbent starts from `warm_start` (or the sequential-update
    solution). A prefix is extended only while its completion bound is
    strictly above the incumbent rate; complete selections replace the
    incumbent when strictly better. Children are visited in ascending
    index order.
    """
    grid = table.grid
    N, a_min = grid.N, grid.a_min
    ev = SelectionEvaluator(table, p)
    stats = SolveStats()
    if warm_start is None:
        seq = sequential_update(table, p)
        inc, inc_rate = list(seq.selection.indices), seq.rate
        stats.rate_evaluations += seq.stats.rate_evaluations
    else:
        inc = list(Selection(tuple(warm_start), grid))
        inc_rate = ev.rate(inc)
    trace = [inc_rate]

    # best completion sum (scaled Bob power) strictly after each vertex
    rest = SuffixTable(build_graph(grid), ev.bob).after

    bob, eve, cross = ev.bob, ev.eve, ev.cross
    path = []

    def rec(r, pb, qe, s):
        nonlocal inc, inc_rate
        zone = grid.zone(r)
        lo = zone.start if r == 1 else max(zone.start, path[-1] + a_min)
        for j in range(lo, zone.stop):
            stats.bound_calls += 1
            pb2 = pb + bob[j - 1]
            if rest[j] == NEG_INF:
                stats.bound_prunes += 1
                continue
            T = math.log1p(pb2 + rest[j]) / LN2
            if T <= inc_rate:
                stats.bound_prunes += 1
                continue
            stats.nodes_expanded += 1
            qe2 = qe + eve[j - 1]
            s2 = s + cross[j - 1]
            path.append(j)
            if r == N:
                rate = ev.rate_from_sums(pb2, qe2, s2)
                if rate > inc_rate:
                    inc, inc_rate = list(path), rate
                    trace.append(rate)
            else:
                rec(r + 1, pb2, qe2, s2)
            path.pop()

    rec(1, 0.0, 0.0, 0j)
    stats.rate_evaluations += ev.evaluations
    return _report("optimal", table, p, inc, inc_rate, stats, trace)


def benchmark_mrt(table: ChannelTable, p: SystemParams) -> SolveReport:
    """Maximise Bob's total channel power, then beamform by MRT (Eve ignored)."""
    graph = build_graph(table.grid)
    _, sel = max_sum_path(graph, bob_scores(table))
    selection = Selection(sel, table.grid)
    h_B, h_E = channels_of(selection, table)
    w = mrt_beamformer(h_B, p)
    return SolveReport("mrt", selection, secrecy_rate_given_w(w, h_B, h_E, p), w)


def benchmark_chandiff(table: ChannelTable, p: SystemParams) -> SolveReport:
    """Maximise sum of |h_B|^2 - |h_E|^2 over the selection, then beamform optimally."""
    graph = build_graph(table.grid)
    score = (np.abs(table.h_B) ** 2 - np.abs(table.h_E) ** 2).tolist()
    _, sel = max_sum_path(graph, score)
    selection = Selection(sel, table.grid)
    rep = max_secrecy_rate(*channels_of(selection, table), p)
    return SolveReport("chandiff", selection, rep.rate, rep.w, SolveStats(rate_evaluations=1))


def benchmark_fpa(grid: GridSpec, table: ChannelTable, p: SystemParams) -> SolveReport:
    if grid != table.grid:
        raise ValueError("grid does not match the channel table")
    selection = Selection(fpa_selection(grid), grid)
    rep = max_secrecy_rate(*channels_of(selection, table), p)
    return SolveReport("fpa", selection, rep.rate, rep.w, SolveStats(rate_evaluations=1))


METHODS = {
    "optimal": partial_enumeration,
    "sequential": sequential_update,
    "mrt": benchmark_mrt,
    "chandiff": benchmark_chandiff,
    "fpa": lambda table, p: benchmark_fpa(table.grid, table, p),
    "brute": brute_force,
}


def solve(method: str, table: ChannelTable, p: SystemParams) -> SolveReport:
    try:
        fn = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    return fn(table, p)
