"""Exception types shared across the engine."""


class ConresError(Exception):
    """Base class for all engine errors."""


# exact linear algebra
class NegativeDegree(ConresError):
    pass


class NotDivisible(ConresError):
    pass


class CompositionNonzero(ConresError):
    pass


class DimensionMismatch(ConresError):
    pass


# space catalog
class UnsupportedIntegral(ConresError):
    pass


class UnsupportedTwist(ConresError):
    pass


class BadRange(ConresError):
    pass


class UnsupportedPair(ConresError):
    pass


class UnsupportedRank(ConresError):
    pass


# link calculus
class AmbiguousAssembly(ConresError):
    """An MV/stratified evaluation has an undetermined connecting map
    whose source and target are both nonzero.  Never guessed."""


# strata catalog
class UnknownCase(ConresError):
    pass


class ParseError(ConresError):
    pass


# spectral engine
class ShapeMismatch(ConresError):
    pass


class Ambiguous(ConresError):
    """Several differential patterns satisfy every constraint."""

    def __init__(self, message, candidates=None):
        super().__init__(message)
        self.candidates = candidates or []


class Inconsistent(ConresError):
    """No differential pattern satisfies the constraints (bad spec)."""


# duality report
class OutOfRange(ConresError):
    pass


class NoFactorization(ConresError):
    pass


# census
class BudgetExceeded(ConresError):
    pass


class NonIntegerResult(ConresError):
    pass
