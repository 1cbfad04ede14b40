"""Exception hierarchy shared by every module."""


class FGLCharError(Exception):
    """Base class for all library errors."""


class InputError(FGLCharError, ValueError):
    """Malformed or inconsistent user input."""


# arithmetic

class NotIrreducible(InputError):
    pass


class NotEisenstein(InputError):
    pass


class DegreeCapExceeded(InputError):
    pass


class NotAUnit(FGLCharError, ArithmeticError):
    pass


class RamifiedUnsupported(FGLCharError, NotImplementedError):
    pass


class CapExceeded(FGLCharError):
    pass


class ModeMismatch(FGLCharError, TypeError):
    pass


class NonzeroConstantTerm(InputError):
    pass


class NonUnitLinearTerm(InputError):
    pass


# formal groups

class IntegralityViolation(FGLCharError):
    pass


class NonIntegralParameter(InputError):
    pass


class NotPTypical(FGLCharError):
    pass


class NotPTypifiable(FGLCharError):
    pass


class BadUniformizerSeries(InputError):
    pass


class PrecisionExhausted(FGLCharError):
    pass


class TruncationTooSmall(FGLCharError):
    pass


class NonUnitScale(InputError):
    pass


# groups

class NotAssociative(InputError):
    pass


class NoIdentity(InputError):
    pass


class NoInverse(InputError):
    pass


class ClosureCapExceeded(CapExceeded):
    pass


class BudgetExceeded(CapExceeded):
    pass


class MatrixNotInvertible(InputError):
    pass


class NotACharacter(InputError):
    pass


class MissingCorpus(FGLCharError):
    pass


class NotDivisible(FGLCharError, ArithmeticError):
    pass


class CheckFailed(FGLCharError, AssertionError):
    """A mathematical identity that must hold did not."""
