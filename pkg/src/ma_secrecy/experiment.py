"""Seeded Monte-Carlo sweeps over M, L or N and their CSV output.

Trial ``t`` draws its Bob/Eve path sets from ``default_rng(seed + t)`` and
re-tabulates those same path sets at every sweep point, so curves are
coupled per trial and results do not depend on execution order.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .channel import ChannelConfig, sample_paths, tabulate
from .errors import InfeasibleConfiguration, InfeasibleSweepPoint
from .grid import GridSpec, build_grid
from .secrecy import SystemParams
from .solvers import fpa_selection, solve

SCHEMA_VERSION = 1
SWEEP_PARAMS = ("M", "L", "N")
ALL_METHODS = ("optimal", "sequential", "mrt", "chandiff", "fpa")

RAW_COLUMNS = ("sweep_param", "sweep_value", "method", "trial", "rate_bps_hz",
               "nodes_expanded", "bound_calls", "rate_evaluations")
SUMMARY_COLUMNS = ("sweep_param", "sweep_value", "method", "trials", "mean_rate_bps_hz",
                   "std_rate_bps_hz")


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep. Defaults are the reference simulation settings.

    The swept parameter overrides the matching fixed value. For an ``L``
    sweep the point count follows from ``M = L / delta_s``.
    """

    seed: int = 0
    trials: int = 200
    sweep_param: str = "M"
    sweep_values: tuple = (12, 24, 36, 48, 60)
    methods: tuple = ALL_METHODS
    N: int = 6
    M: int = 60
    L: float = 0.36
    delta_s: float | None = None
    d_min: float = 0.03
    wavelength: float = 0.06
    alpha: float = 2.8
    beta_db: float = -46.0
    D_B: float = 100.0
    D_E: float = 100.0
    n_paths: int = 9
    snr_db: float = 100.0

    def __post_init__(self):
        object.__setattr__(self, "sweep_values", tuple(self.sweep_values))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.sweep_param not in SWEEP_PARAMS:
            raise ValueError(f"sweep_param must be one of {SWEEP_PARAMS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        unknown = set(self.methods) - set(ALL_METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")
        if self.sweep_param == "L" and not self.delta_s:
            raise ValueError("an L sweep needs delta_s")

    @property
    def beta(self) -> float:
        return 10 ** (self.beta_db / 10)

    @property
    def snr(self) -> float:
        return 10 ** (self.snr_db / 10)

    def channel_config(self) -> ChannelConfig:
        return ChannelConfig(wavelength=self.wavelength, alpha=self.alpha, beta=self.beta,
                             D_B=self.D_B, D_E=self.D_E, n_paths=self.n_paths)

    def system_params(self) -> SystemParams:
        return SystemParams.from_snr_db(self.snr_db)

    def grid_for(self, value) -> GridSpec:
        M, N, L = self.M, self.N, self.L
        if self.sweep_param == "M":
            M = int(value)
        elif self.sweep_param == "N":
            N = int(value)
        else:
            L = float(value)
            ratio = L / self.delta_s
            M = round(ratio)
            if abs(ratio - M) > 1e-9:
                raise InfeasibleSweepPoint("L", value, f"L/delta_s = {ratio} is not an integer")
        try:
            grid = build_grid(M, N, L, self.d_min)
            if "fpa" in self.methods:
                fpa_selection(grid)
        except InfeasibleConfiguration as exc:
            raise InfeasibleSweepPoint(self.sweep_param, value,
                                       f"M={M}, N={N}, L={L}, d_min={self.d_min}: {exc}") from exc
        return grid

    def grids(self) -> list[GridSpec]:
        """Validate every sweep point up front."""
        return [self.grid_for(v) for v in self.sweep_values]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sweep_values"] = list(self.sweep_values)
        d["methods"] = list(self.methods)
        return {"schema_version": SCHEMA_VERSION, **d}

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        names = {f.name for f in fields(cls)}
        extra = set(d) - names - {"schema_version"}
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        return cls(**{k: v for k, v in d.items() if k in names})

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class TrialRecord:
    sweep_index: int
    sweep_value: object
    method: str
    trial: int
    rate: float
    nodes_expanded: int
    bound_calls: int
    rate_evaluations: int


@dataclass(frozen=True)
class SummaryRow:
    sweep_value: object
    method: str
    trials: int
    mean: float
    std: float


@dataclass
class SweepResult:
    config: ExperimentConfig
    records: list[TrialRecord] = field(default_factory=list)

    def rates(self, method: str, sweep_value) -> np.ndarray:
        """Per-trial rates ordered by trial id."""
        rows = [r for r in self.records if r.method == method and r.sweep_value == sweep_value]
        return np.array([r.rate for r in sorted(rows, key=lambda r: r.trial)])

    def summary(self) -> list[SummaryRow]:
        groups: dict = {}
        for r in self.records:
            groups.setdefault((r.sweep_index, r.sweep_value, r.method), []).append(r.rate)
        out = []
        for (_, value, method), rates in groups.items():
            out.append(SummaryRow(value, method, len(rates), *mean_std(rates)))
        return out

    def mean(self, method: str, sweep_value) -> float:
        return mean_std(self.rates(method, sweep_value))[0]


def mean_std(values) -> tuple[float, float]:
    """Mean and sample standard deviation (nan for a single value)."""
    values = list(values)
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return mean, math.nan
    return mean, math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))


def run_trial(cfg: ExperimentConfig, trial: int, grids=None) -> list[TrialRecord]:
    grids = grids if grids is not None else cfg.grids()
    rng = np.random.default_rng(cfg.seed + trial)
    chan = cfg.channel_config()
    bob = sample_paths(rng, chan, chan.D_B)
    eve = sample_paths(rng, chan, chan.D_E)
    params = cfg.system_params()
    out = []
    for k, (value, grid) in enumerate(zip(cfg.sweep_values, grids)):
        table = tabulate(grid, bob, eve, chan.wavelength)
        for method in cfg.methods:
            rep = solve(method, table, params)
            st = rep.stats
            out.append(TrialRecord(k, value, method, trial, rep.rate, st.nodes_expanded,
                                   st.bound_calls, st.rate_evaluations))
    return out


def _run_trial_star(args):
    return run_trial(*args)


def run_sweep(cfg: ExperimentConfig, workers: int = 1, trial_order=None) -> SweepResult:
    """Run every trial of `cfg` and collect per-trial records.

    `workers` > 1 spreads trials over processes; `trial_order` permutes the
    execution order. Neither changes the result.
    """
    grids = cfg.grids()
    order = list(trial_order) if trial_order is not None else list(range(cfg.trials))
    if sorted(order) != list(range(cfg.trials)):
        raise ValueError("trial_order must be a permutation of range(trials)")
    jobs = [(cfg, t, grids) for t in order]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_trial_star, jobs))
    else:
        chunks = [run_trial(*job) for job in jobs]
    method_rank = {m: i for i, m in enumerate(cfg.methods)}
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r.sweep_index, method_rank[r.method], r.trial))
    return SweepResult(cfg, records)


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def companion_paths(path) -> tuple[Path, Path]:
    path = Path(path)
    return (path.with_name(path.stem + "_summary.csv"), path.with_name(path.stem + "_meta.json"))


def emit_csv(result: SweepResult, path) -> tuple[Path, Path, Path]:
    """Write raw rows to `path`, plus ``<stem>_summary.csv`` and ``<stem>_meta.json``."""
    path = Path(path)
    summary_path, meta_path = companion_paths(path)
    param = result.config.sweep_param
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RAW_COLUMNS)
        for r in result.records:
            w.writerow([param, _fmt(r.sweep_value), r.method, r.trial, _fmt(r.rate),
                        r.nodes_expanded, r.bound_calls, r.rate_evaluations])
    with open(summary_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for s in result.summary():
            w.writerow([param, _fmt(s.sweep_value), s.method, s.trials, _fmt(s.mean), _fmt(s.std)])
    meta = {
        "schema_version": SCHEMA_VERSION,
        "config": result.config.to_dict(),
        "coupled_sweep": True,
        "rng": "numpy default_rng(seed + trial); Bob paths drawn before Eve paths",
        "chandiff_objective": "sum of |h_B|^2 - |h_E|^2 over selected points",
        "raw_columns": list(RAW_COLUMNS),
        "summary_columns": list(SUMMARY_COLUMNS),
    }
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path, summary_path, meta_path
