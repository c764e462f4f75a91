"""Exception types raised by the solver.

The class names are part of the command line contract: the CLI prints the
name of the exception on stderr.
"""


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(SolverError, ValueError):
    pass


class SchemaError(SolverError):
    pass


# operator validation
class SingularAtI(SolverError):
    pass


class SpaceMismatch(SolverError):
    pass


class NegativeIterationCount(SolverError):
    pass


# kernel / reduction
class PivotZero(SolverError):
    def __init__(self, n, m):
        super().__init__("pivot b_%d^%d vanishes" % (m, n))
        self.n = n
        self.m = m


class IterationCapExceeded(SolverError):
    pass


class AllDegenerate(SolverError):
    pass


class DependentReplenish(SolverError):
    pass


# bounds
class InfeasibleParams(SolverError):
    pass


class InfeasibleBound(SolverError):
    pass


# evaluation
class DivisionByZeroValue(SolverError, ZeroDivisionError):
    pass


class DivisionByZeroCoeff(SolverError, ZeroDivisionError):
    pass


class DegenerateNormalization(SolverError):
    pass


OPERATOR_ERRORS = (SingularAtI, SpaceMismatch, NegativeIterationCount)
