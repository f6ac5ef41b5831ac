"""Exception hierarchy.

Everything raised on purpose by the package derives from :class:`SmaxError`.
:class:`ConfigError` marks bad user input; every other subclass is a numerical
or geometric failure and is treated as a solver error by the command line.
"""


class SmaxError(Exception):
    pass


class ConfigError(SmaxError, ValueError):
    pass


class SolverError(SmaxError):
    pass


# geometry / preconditions
class SpacelikeViolation(SolverError):
    pass


class PositivityViolation(SolverError):
    pass


class HalfspaceViolation(SolverError):
    pass


class DegenerateStar(SolverError):
    pass


class DenominatorZero(SolverError):
    pass


class DomainEmpty(SolverError):
    pass


class InvalidTransform(SolverError):
    pass


# ODE solvers
class InvalidInitial(SolverError, ValueError):
    pass


class StepCollapse(SolverError):
    pass


class NoContraction(SolverError):
    pass


class ClassificationMismatch(SolverError):
    pass


class NoIntersection(SolverError):
    pass


# PDE solver
class NewtonDiverged(SolverError):
    pass


class SpacelikeBreach(SolverError):
    pass


class ContinuationStalled(SolverError):
    pass


class PositivityBreach(SolverError):
    pass
