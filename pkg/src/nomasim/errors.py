"""Exception hierarchy shared by every module of the package."""


class NomaError(Exception):
    """Base class for all errors raised by nomasim."""


class OrderingViolationError(NomaError):
    """The declared SIC decoding order disagrees with the channel strengths."""


class InfeasibleError(NomaError):
    """A power-allocation or QoS problem has no solution.

    Attributes
    ----------
    details : dict
        Quantities that explain the failure (bounds, shortfall, ...).
    """

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class DimensionError(NomaError, ValueError):
    """Antenna or matrix dimensions do not admit the requested construction."""


class NoNullSpaceError(NomaError):
    """A constraint matrix has full column rank, so no annihilating vector exists."""


class DegenerateClusterError(NomaError):
    """Both users of a cluster have zero effective gain."""


class ConfigError(NomaError, ValueError):
    """An experiment configuration failed validation."""
