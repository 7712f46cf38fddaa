"""Exception hierarchy.

Everything raised on purpose by this package derives from `MASecrecyError`.
Configuration problems (grids that cannot host the antennas, sweep points
that cannot be built) derive from `InfeasibleConfiguration`, which the CLI
maps to exit status 2.
"""


class MASecrecyError(Exception):
    """Base class for all package errors."""


class InfeasibleConfiguration(MASecrecyError, ValueError):
    """The requested geometry or experiment cannot be realised."""


class NonIntegerZoneSize(InfeasibleConfiguration):
    """M is not a multiple of N."""


class NonIntegerSpacingRatio(InfeasibleConfiguration):
    """d_min is not an integer number of grid steps."""


class InfeasibleGrid(InfeasibleConfiguration):
    """No selection satisfies both the zone and the minimum-spacing rules."""


class FpaInfeasible(InfeasibleConfiguration):
    """Zone midpoints are closer than the minimum spacing (b < a_min)."""


class InfeasibleSweepPoint(InfeasibleConfiguration):
    """A sweep value maps to an invalid grid."""

    def __init__(self, param, value, reason):
        self.param = param
        self.value = value
        self.reason = reason
        super().__init__(f"sweep point {param}={value!r} is infeasible: {reason}")


class InfeasibleSelection(MASecrecyError, ValueError):
    """A selection violates the zone or minimum-spacing constraints."""


class IndexOutOfRange(MASecrecyError, IndexError):
    """A sampling-point index falls outside 1..M."""


class NoFeasibleCompletion(MASecrecyError):
    """A path prefix cannot be extended to the last zone."""


class EmptyCandidateSet(MASecrecyError):
    """A sequential-update candidate set came out empty."""
