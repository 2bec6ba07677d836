"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`StackRobustError`, so callers can catch the whole family at once.
Errors caused by a bad argument also derive from :class:`ValueError`.
"""


class StackRobustError(Exception):
    pass


class GameError(StackRobustError, ValueError):
    """Malformed game (bad shapes, non-finite payoffs)."""


class GameLoadError(GameError):
    """A game file could not be read or parsed."""


class InvalidStrategy(StackRobustError, ValueError):
    pass


class DimensionTooSmall(StackRobustError, ValueError):
    pass


class WrongDimension(StackRobustError, ValueError):
    pass


class InvalidId(StackRobustError, ValueError):
    pass


class SolverError(StackRobustError):
    """Base class for failures inside the optimisation routines."""


class Infeasible(SolverError):
    pass


class Unbounded(SolverError):
    pass


class NoFeasibleResponse(SolverError):
    pass


class EmptyActiveSet(SolverError):
    pass


class DegenerateVertex(SolverError):
    pass


class NullspaceEscape(SolverError):
    pass


class OutOfRange(StackRobustError, ValueError):
    pass


class InvalidExponent(StackRobustError, ValueError):
    pass


class InvalidN(StackRobustError, ValueError):
    pass


class InvalidTrials(StackRobustError, ValueError):
    pass


class EnumerationTooLarge(StackRobustError, ValueError):
    """Exact enumeration would exceed the configured limit; use Monte Carlo."""


class EmptyRegion(StackRobustError, ValueError):
    pass


class ConfigError(StackRobustError, ValueError):
    pass
