"""Exception hierarchy.

Errors split into two families so front ends can map them to exit codes:
``ConfigError`` for bad input (geometry, ranges, degrees) and
``NumericalError`` for failures of an otherwise valid computation.
"""


class SzegoError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(SzegoError, ValueError):
    pass


class NumericalError(SzegoError, ArithmeticError):
    pass


# boundary
class NonClosedChain(ConfigError):
    pass


class DegenerateArc(ConfigError):
    pass


class WrongOrientation(ConfigError):
    pass


class CapacityTooLarge(ConfigError):
    pass


# orthopoly / szego
class CapacityExceeded(ConfigError):
    pass


class DegreeExceeded(ConfigError):
    pass


class BadRange(ConfigError):
    pass


class OutsideDomain(ConfigError):
    pass


class Breakdown(NumericalError):
    pass


# reference
class PoleAtZ(ConfigError):
    pass


class NewtonDiverged(NumericalError):
    pass


class NotUnivalent(ConfigError):
    pass


# analysis
class LambdaOutOfRange(ConfigError):
    pass


class TooFewPoints(ConfigError):
    pass


class NonpositiveError(ConfigError):
    pass


class AllZero(NumericalError):
    pass


class ProbeTooCloseToBoundary(ConfigError):
    pass


class LengthMismatch(ConfigError):
    pass
