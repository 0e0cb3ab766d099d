"""Exception hierarchy shared by every package.

Each class carries the process exit code the CLI reports for it:
2 for invalid input or configuration, 3 for numerical-tolerance failures,
4 when an enumeration budget is exceeded.
"""


class KleinianError(Exception):
    exit_code = 2


class ConfigError(KleinianError):
    exit_code = 2


class DomainError(KleinianError, ValueError):
    exit_code = 2


class NotLoxodromic(DomainError):
    pass


class TrivialCharacter(DomainError):
    pass


class NotSingularVector(DomainError):
    pass


class InexactInput(DomainError):
    pass


class NonUnitaryInput(DomainError):
    pass


class RelationViolation(DomainError):
    pass


class CaseUnsupported(DomainError):
    pass


class UnsupportedRegime(DomainError):
    pass


class NumericalFailure(KleinianError, ArithmeticError):
    exit_code = 3


class QuadratureFailure(NumericalFailure):
    pass


class SeriesDivergence(NumericalFailure):
    pass


class ConvergenceFailure(NumericalFailure):
    pass


class PeriodicityViolation(NumericalFailure):
    pass


class BudgetExceeded(KleinianError, RuntimeError):
    exit_code = 4
