"""Discrete movable-antenna position selection for MISO secrecy-rate maximisation."""

from .channel import ChannelConfig, ChannelTable, PathSet, field_response, sample_paths, tabulate
from .errors import (
    EmptyCandidateSet,
    FpaInfeasible,
    IndexOutOfRange,
    InfeasibleConfiguration,
    InfeasibleGrid,
    InfeasibleSelection,
    InfeasibleSweepPoint,
    MASecrecyError,
    NoFeasibleCompletion,
    NonIntegerSpacingRatio,
    NonIntegerZoneSize,
)
from .experiment import ExperimentConfig, SweepResult, emit_csv, run_sweep
from .graph import (
    BoundResult,
    PathPrefix,
    ZonedGraph,
    best_completion_bound,
    build_graph,
    edge_count_formula,
    max_sum_path,
)
from .grid import GridSpec, build_grid
from .secrecy import (
    RateReport,
    Selection,
    SystemParams,
    channels_of,
    dense_pencil_oracle,
    max_secrecy_rate,
    optimal_beamformer,
    secrecy_rate_given_w,
)
from .solvers import (
    SolveReport,
    SolveStats,
    benchmark_chandiff,
    benchmark_fpa,
    benchmark_mrt,
    brute_force,
    partial_enumeration,
    sequential_update,
    solve,
)

__version__ = "0.1.0"
