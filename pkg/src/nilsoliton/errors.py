"""Exception hierarchy shared by all modules."""


class NilsolitonError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(NilsolitonError):
    pass


class SingularMap(NilsolitonError):
    pass


class ZeroBracket(NilsolitonError):
    pass


class NotALieBracket(NilsolitonError):
    pass


class NotJacobi(NotALieBracket):
    pass


class NotNilpotent(NilsolitonError):
    pass


class AbelianInput(NilsolitonError):
    pass


class NonMonotone(NilsolitonError):
    """Flow step could not be made monotone even after halving."""


class FlowTimeout(NilsolitonError):
    """Flow exceeded its time budget; carries the partial trajectory."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class Diverged(NilsolitonError):
    """Orbit descent escaped every bounded region of the group."""


class NotDiagonalizable(NilsolitonError):
    pass


class NonPositiveEigenvalues(NilsolitonError):
    pass


class RicNotDiagonal(NilsolitonError):
    pass


class NotNice(NilsolitonError):
    pass


class NotPositive(NilsolitonError):
    pass


class DegenerateDenominator(NilsolitonError):
    pass


class UnknownName(NilsolitonError):
    pass


class ParamOutOfRange(NilsolitonError):
    pass


class NotSimpleGraph(NilsolitonError):
    pass


class WrongType(NilsolitonError):
    pass


class ZeroForm(NilsolitonError):
    pass


class ParseError(NilsolitonError):
    pass
