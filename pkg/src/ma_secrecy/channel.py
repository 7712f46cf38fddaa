"""Field-response multipath channels tabulated on the sampling grid.

Each receiver sees ``Lp`` transmit paths. Path ``i`` has a complex gain
``gamma_i ~ CN(0, beta * D**-alpha * l_i)`` and an angle of departure
``theta_i`` measured from the array axis, so a point at distance ``s`` from
the array origin gets the phase ``2*pi/lambda * s * cos(theta_i)``::

    h(s) = sum_i gamma_i * exp(1j * 2*pi/lambda * s * cos(theta_i))

The power ratios ``l_i`` are i.i.d. uniform(0, 1) draws normalised to sum
to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridSpec

SCHEMA_VERSION = 1


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def complex_to_pairs(z) -> list[list[float]]:
    return [[float(c.real), float(c.imag)] for c in np.asarray(z, dtype=complex)]


def pairs_to_complex(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


@dataclass(frozen=True, eq=False)
class PathSet:
    """Multipath parameters of one receiver: gains, AoDs (rad), power ratios."""

    gains: np.ndarray
    aods: np.ndarray
    power_ratios: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gains", _frozen(self.gains, complex))
        object.__setattr__(self, "aods", _frozen(self.aods, float))
        object.__setattr__(self, "power_ratios", _frozen(self.power_ratios, float))
        n = len(self.gains)
        if n < 1 or len(self.aods) != n or len(self.power_ratios) != n:
            raise ValueError("gains, aods and power_ratios must have the same nonzero length")
        if np.any(self.aods < 0) or np.any(self.aods > math.pi):
            raise ValueError("angles of departure must lie in [0, pi]")
        if np.any(self.power_ratios < 0) or abs(self.power_ratios.sum() - 1.0) > 1e-12:
            raise ValueError("power ratios must be nonnegative and sum to 1")

    @property
    def count(self) -> int:
        return len(self.gains)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "gains": complex_to_pairs(self.gains),
            "aods": [float(x) for x in self.aods],
            "power_ratios": [float(x) for x in self.power_ratios],
        }

    @classmethod
    def from_dict(cls, d: dict) -> PathSet:
        return cls(pairs_to_complex(d["gains"]), d["aods"], d["power_ratios"])

    def __eq__(self, other):
        if not isinstance(other, PathSet):
            return NotImplemented
        return (np.array_equal(self.gains, other.gains)
                and np.array_equal(self.aods, other.aods)
                and np.array_equal(self.power_ratios, other.power_ratios))


@dataclass(frozen=True)
class ChannelConfig:
    """Propagation constants shared by Bob and Eve.

    `beta` is the linear path loss at 1 m; distances are in meters.
    """

    wavelength: float = 0.06
    alpha: float = 2.8
    beta: float = 10 ** (-46 / 10)
    D_B: float = 100.0
    D_E: float = 100.0
    n_paths: int = 9

    def __post_init__(self):
        for name in ("wavelength", "alpha", "beta", "D_B", "D_E"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.n_paths < 1:
            raise ValueError("n_paths must be >= 1")

    def path_power(self, D: float) -> float:
        """Average total power gain beta * D**-alpha."""
        return self.beta * D ** (-self.alpha)


def sample_paths(rng: np.random.Generator, cfg: ChannelConfig, D: float) -> PathSet:
    """Draw one receiver's multipath parameters at distance `D`."""
    n = cfg.n_paths
    ratios = rng.uniform(0.0, 1.0, n)
    ratios = ratios / ratios.sum()
    aods = rng.uniform(0.0, math.pi, n)
    std = np.sqrt(cfg.path_power(D) * ratios / 2)
    re, im = rng.standard_normal((2, n))
    return PathSet(std * (re + 1j * im), aods, ratios)


def field_response(paths: PathSet, s: float, wavelength: float) -> complex:
    """Complex gain of `paths` seen from position `s` (meters) on the array."""
    k = 2 * math.pi / wavelength
    h = 0j
    # plain scalar loop: fixed operation order so tables are reproducible bit for bit
    for g, theta in zip(paths.gains.tolist(), paths.aods.tolist()):
        phase = k * s * math.cos(theta)
        h += g * complex(math.cos(phase), math.sin(phase))
    return h


@dataclass(frozen=True, eq=False)
class ChannelTable:
    """Bob's and Eve's gains at every sampling point of `grid`.

    ``h_B[m-1]`` is the gain of sampling point ``m``.
    """

    h_B: np.ndarray
    h_E: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        object.__setattr__(self, "h_B", _frozen(self.h_B, complex))
        object.__setattr__(self, "h_E", _frozen(self.h_E, complex))
        if len(self.h_B) != self.grid.M or len(self.h_E) != self.grid.M:
            raise ValueError(f"tables must have M={self.grid.M} entries")
        if not (np.all(np.isfinite(self.h_B)) and np.all(np.isfinite(self.h_E))):
            raise ValueError("channel table contains non-finite values")

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "grid": self.grid.to_dict(),
            "h_B": complex_to_pairs(self.h_B),
            "h_E": complex_to_pairs(self.h_E),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ChannelTable:
        return cls(pairs_to_complex(d["h_B"]), pairs_to_complex(d["h_E"]),
                   GridSpec.from_dict(d["grid"]))

    def __eq__(self, other):
        if not isinstance(other, ChannelTable):
            return NotImplemented
        return (self.grid == other.grid and np.array_equal(self.h_B, other.h_B)
                and np.array_equal(self.h_E, other.h_E))


def tabulate(grid: GridSpec, bob: PathSet, eve: PathSet, wavelength: float) -> ChannelTable:
    positions = [grid.position_of(m) for m in range(1, grid.M + 1)]
    h_B = [field_response(bob, s, wavelength) for s in positions]
    h_E = [field_response(eve, s, wavelength) for s in positions]
    return ChannelTable(np.array(h_B), np.array(h_E), grid)
