"""Discretised transmit array: sampling points, zones and spacing rules.

Sampling points are numbered 1..M as in the usual formulation of the
problem; zone ``n`` (also 1-based) holds the points ``b(n-1)+1 .. bn``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InfeasibleGrid, NonIntegerSpacingRatio, NonIntegerZoneSize

RATIO_TOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """A linear array of length ``L`` sampled at ``M`` points for ``N`` antennas.

    Use :func:`build_grid` (physical units) or :meth:`GridSpec.discrete`
    (index units) rather than calling the constructor directly; both check
    that at least one feasible selection exists.
    """

    M: int
    N: int
    L: float
    d_min: float
    a_min: int

    def __post_init__(self):
        if self.M <= 0 or self.N <= 0:
            raise NonIntegerZoneSize(f"M and N must be positive, got M={self.M}, N={self.N}")
        if self.M % self.N:
            raise NonIntegerZoneSize(f"M={self.M} is not a multiple of N={self.N}")
        if self.a_min < 1:
            raise NonIntegerSpacingRatio(f"a_min must be >= 1, got {self.a_min}")
        if not self.L > 0:
            raise InfeasibleGrid(f"array length must be positive, got {self.L}")
        witness = greedy_witness(self.M, self.N, self.a_min)
        for n, a in enumerate(witness, start=1):
            if a > self.b * n:
                raise InfeasibleGrid(
                    f"no feasible selection: greedy witness {tuple(witness)} leaves "
                    f"zone {n} (a_{n}={a} > {self.b * n}) with M={self.M}, N={self.N}, "
                    f"a_min={self.a_min}"
                )

    @classmethod
    def discrete(cls, M: int, N: int, a_min: int, L: float = 1.0) -> GridSpec:
        """Build a grid directly in index units (``d_min = a_min * L / M``)."""
        return cls(M=M, N=N, L=L, d_min=a_min * L / M, a_min=a_min)

    @classmethod
    def unchecked(cls, M: int, N: int, a_min: int, L: float = 1.0) -> GridSpec:
        """Skip the feasibility check (graph-counting only; N must divide M)."""
        grid = object.__new__(cls)
        for name, value in (("M", M), ("N", N), ("L", L), ("d_min", a_min * L / M), ("a_min", a_min)):
            object.__setattr__(grid, name, value)
        return grid

    @property
    def b(self) -> int:
        return self.M // self.N

    @property
    def delta_s(self) -> float:
        return self.L / self.M

    def position_of(self, m: int) -> float:
        # m/M is a correctly rounded ratio of integers, so (k*m)/(k*M) gives the
        # same float and points shared by nested grids sit at identical positions
        return (m / self.M) * self.L

    def zone_of(self, m: int) -> int:
        return (m - 1) // self.b + 1

    def zone(self, n: int) -> range:
        return range(self.b * (n - 1) + 1, self.b * n + 1)

    def to_dict(self) -> dict:
        return {"M": self.M, "N": self.N, "L": self.L, "d_min": self.d_min, "a_min": self.a_min}

    @classmethod
    def from_dict(cls, d: dict) -> GridSpec:
        return cls(M=int(d["M"]), N=int(d["N"]), L=float(d["L"]),
                   d_min=float(d["d_min"]), a_min=int(d["a_min"]))


def greedy_witness(M: int, N: int, a_min: int) -> list[int]:
    """Leftmost packing a_n = max(b(n-1)+1, a_{n-1}+a_min).

    The grid is feasible iff every entry stays inside its zone.
    """
    b = M // N
    out = []
    prev = None
    for n in range(1, N + 1):
        a = b * (n - 1) + 1
        if prev is not None:
            a = max(a, prev + a_min)
        out.append(a)
        prev = a
    return out


def build_grid(M: int, N: int, L: float, d_min: float, round_up: bool = False) -> GridSpec:
    """Sample an array of length `L` into `M` points for `N` zoned antennas.

    Parameters
    ----------
    M, N : int
        Number of sampling points and of antennas (zones). N must divide M.
    L : float
        Array length in meters.
    d_min : float
        Minimum physical distance between antennas in meters. It must be an
        integer multiple of the spacing ``L/M`` unless `round_up` is set, in
        which case the index separation is rounded up. ``d_min = 0`` maps to
        ``a_min = 1``.

    Raises
    ------
    NonIntegerZoneSize, NonIntegerSpacingRatio, InfeasibleGrid
    """
    if M <= 0 or N <= 0:
        raise NonIntegerZoneSize(f"M and N must be positive, got M={M}, N={N}")
    if M % N:
        raise NonIntegerZoneSize(f"M={M} is not a multiple of N={N}")
    if d_min < 0:
        raise NonIntegerSpacingRatio(f"d_min must be nonnegative, got {d_min}")
    ratio = d_min / (L / M)
    nearest = round(ratio)
    if abs(ratio - nearest) <= RATIO_TOL:
        a_min = int(nearest)
    elif round_up:
        a_min = math.ceil(ratio)
    else:
        raise NonIntegerSpacingRatio(
            f"d_min/delta_s = {ratio!r} is not an integer (d_min={d_min}, delta_s={L / M})"
        )
    return GridSpec(M=M, N=N, L=L, d_min=d_min, a_min=max(a_min, 1))
