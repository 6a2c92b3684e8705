"""Exception hierarchy shared by all modules."""


class QSPError(Exception):
    """Base class for every error raised by :mod:`qsp`."""


class InvalidScalar(QSPError, ZeroDivisionError):
    pass


class InvalidArgument(QSPError, ValueError):
    pass


class ParseError(QSPError, ValueError):
    pass


class InvalidRootDatum(QSPError, ValueError):
    pass


class NonFiniteType(QSPError, ValueError):
    pass


class NotInUPlus(QSPError, ArithmeticError):
    pass


# -- Satake diagram validation ------------------------------------------------

class SatakeError(QSPError, ValueError):
    """The pair (X, tau) is not a generalized Satake diagram."""


class NotFiniteTypeX(SatakeError):
    pass


class NotDiagramInvolution(SatakeError):
    pass


class ConditionOneFailure(SatakeError):
    pass


class ConditionTwoPrimeFailure(SatakeError):
    pass


# -- parameters -----------------------------------------------------------------

class ParameterError(QSPError, ValueError):
    pass


class OddExponent(ParameterError):
    def __init__(self, index: int, exponent: int):
        super().__init__(
            f"node {index}: exponent {exponent} is odd, a solution needs q^(1/2)")
        self.index = index
        self.exponent = exponent


class InconsistentOrbit(ParameterError):
    pass


class CViolation(ParameterError):
    pass


# -- quasi K-matrix -----------------------------------------------------------

class NoSolution(QSPError, ArithmeticError):
    pass


class NonUniqueSolution(QSPError, ArithmeticError):
    pass


class VerificationFailure(QSPError, AssertionError):
    def __init__(self, message: str, generator=None, residual=None):
        super().__init__(message)
        self.generator = generator
        self.residual = residual
