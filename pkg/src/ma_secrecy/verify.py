"""Randomised self-checks behind ``ma-secrecy verify``.

Each check returns a list of human-readable violation strings; an empty
list means the check passed.
"""

from __future__ import annotations

import numpy as np

from .channel import ChannelTable
from .graph import PathPrefix, best_completion_bound, build_graph, edge_count_formula
from .grid import GridSpec
from .secrecy import SystemParams, dense_pencil_oracle, max_secrecy_rate, secrecy_rate_given_w
from .solvers import (
    benchmark_chandiff,
    benchmark_fpa,
    benchmark_mrt,
    brute_force,
    feasible_selections,
    partial_enumeration,
    sequential_update,
    _vector_rate,
)


def random_grid(rng, M_range=(8, 20), N_range=(2, 4), a_min_max=None) -> GridSpec:
    """Random feasible grid with M = N*b inside `M_range`, 1 <= a_min <= b."""
    while True:
        N = int(rng.integers(N_range[0], N_range[1] + 1))
        bs = [b for b in range(1, M_range[1] // N + 1) if M_range[0] <= N * b <= M_range[1]]
        if not bs:
            continue
        b = int(rng.choice(bs))
        hi = b if a_min_max is None else min(b, a_min_max)
        return GridSpec.discrete(N * b, N, int(rng.integers(1, hi + 1)))


def random_table(rng, grid: GridSpec) -> ChannelTable:
    M = grid.M
    h_B = (rng.standard_normal(M) + 1j * rng.standard_normal(M)) / np.sqrt(2)
    h_E = (rng.standard_normal(M) + 1j * rng.standard_normal(M)) / np.sqrt(2)
    return ChannelTable(h_B, h_E, grid)


def random_params(rng) -> SystemParams:
    return SystemParams(P_t=float(10 ** rng.uniform(-1, 1.5)), sigma2=1.0)


def check_oracle_equivalence(rng, trials, tol=1e-9):
    bad = []
    for t in range(trials):
        grid = random_grid(rng)
        table, p = random_table(rng, grid), random_params(rng)
        opt = partial_enumeration(table, p)
        ref = brute_force(table, p)
        if abs(opt.rate - ref.rate) > tol:
            bad.append(f"instance {t} ({grid}): optimal {opt.rate!r} != brute force {ref.rate!r}")
        others = {
            "sequential": sequential_update(table, p),
            "mrt": benchmark_mrt(table, p),
            "chandiff": benchmark_chandiff(table, p),
        }
        if grid.b >= grid.a_min:
            others["fpa"] = benchmark_fpa(grid, table, p)
        for name, rep in others.items():
            if rep.rate > opt.rate + tol:
                bad.append(f"instance {t}: {name} rate {rep.rate!r} beats optimal {opt.rate!r}")
        if others["sequential"].stats.rate_evaluations > grid.M:
            bad.append(f"instance {t}: sequential used more than M evaluations")
    return bad


def check_bound_soundness(rng, trials, tol=1e-12):
    bad = []
    for t in range(trials):
        grid = random_grid(rng, M_range=(4, 16), N_range=(2, 4))
        table, p = random_table(rng, grid), random_params(rng)
        sels = list(feasible_selections(grid))
        full = sels[int(rng.integers(len(sels)))]
        r = int(rng.integers(1, grid.N + 1))
        prefix = PathPrefix(full[:r])
        T = best_completion_bound(prefix, table, p).T
        best = max(_vector_rate(table, p, s) for s in sels if s[:r] == prefix.vertices)
        if best > T + tol:
            bad.append(f"prefix {prefix.vertices} on {grid}: bound {T!r} < completion {best!r}")
    return bad


def check_eigen(rng, trials, tol=1e-9):
    bad = []
    for t in range(trials):
        n = int(rng.integers(1, 9))
        h_B = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        h_E = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        p = SystemParams(float(10 ** rng.uniform(-2, 2)), float(10 ** rng.uniform(-2, 2)))
        rep = max_secrecy_rate(h_B, h_E, p)
        lam, _ = dense_pencil_oracle(h_B, h_E, p)
        if abs(rep.lambda_max - lam) > tol * abs(lam):
            bad.append(f"eigen instance {t}: 2x2 {rep.lambda_max!r} vs dense {lam!r}")
        if abs(secrecy_rate_given_w(rep.w, h_B, h_E, p) - np.log2(rep.lambda_max)) > tol:
            bad.append(f"eigen instance {t}: beamformer does not attain log2(lambda_max)")
    return bad


def check_edge_counts(rng, trials):
    bad = []
    for _ in range(trials):
        N = int(rng.integers(1, 7))
        b = int(rng.integers(1, 9))
        a_min = int(rng.integers(1, 2 * b + 1))
        grid = GridSpec.unchecked(N * b, N, a_min)
        got, want = build_graph(grid).num_edges(), edge_count_formula(grid)
        if got != want:
            bad.append(f"edge count N={N} b={b} a_min={a_min}: enumerated {got}, formula {want}")
    return bad


def run_all(seed: int, trials: int) -> dict[str, list[str]]:
    rng = np.random.default_rng(seed)
    return {
        "oracle_equivalence": check_oracle_equivalence(rng, trials),
        "bound_soundness": check_bound_soundness(rng, trials),
        "eigen_crosscheck": check_eigen(rng, trials),
        "edge_count": check_edge_counts(rng, trials),
    }
