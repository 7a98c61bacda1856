"""
Simulation Errors

Exception hierarchy shared by every chain_simulation module.
"""


class ChainSimulationError(Exception):
    """Base class for all simulator errors."""


class InvalidPairError(ChainSimulationError):
    """An edge was queried between a node and itself."""


class InvalidPathError(ChainSimulationError):
    """A proposed chain extension is not a directed path in the graph."""


class DoubleServiceError(ChainSimulationError):
    """A node that is not waiting was offered for service."""


class UnfinalizedTraceError(ChainSimulationError):
    """A summary was requested before every service time was set."""


class SizeGuardError(ChainSimulationError):
    """An exhaustive routine was called on a graph that is too large."""


class RegimeError(ChainSimulationError):
    """Random-walk parameters are outside the range the analysis covers."""


class ConfigError(ChainSimulationError):
    """An experiment or sweep configuration is invalid."""


class InvariantViolation(ChainSimulationError):
    """A model or policy invariant failed at runtime."""
