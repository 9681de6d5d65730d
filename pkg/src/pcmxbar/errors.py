"""Error types raised by the simulator."""


class SimulationError(Exception):
    """Base class for all simulator errors."""


class AmplitudeBelowThreshold(SimulationError):
    """Programming pulse amplitude is too small to switch the cell."""


class InvalidDimension(SimulationError):
    """Requested array dimension is not supported."""


class IndexOutOfRange(SimulationError):
    """Bitline or wordline index outside the array."""


class DimensionMismatch(SimulationError):
    """Pattern or vector length does not match the array dimension."""


class EmptyStimulus(SimulationError):
    """A read or probe was requested with no neurons firing."""


class DegeneratePattern(SimulationError):
    """Pattern has no ON bits or no OFF bits, so a contrast is undefined."""


class NoConvergence(SimulationError):
    """Recall probe was still growing when the step budget ran out."""


class NoSnapshots(SimulationError):
    """Distribution history was requested from a run that kept no snapshots."""


class ConfigParseError(SimulationError):
    """Configuration file is missing, malformed, or fails validation."""
