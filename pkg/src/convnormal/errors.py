"""Exception hierarchy shared by all modules."""


class PolytopeError(ValueError):
    """Base class for every error raised by this package."""


class ZeroVector(PolytopeError):
    pass


class DimensionMismatch(PolytopeError):
    pass


class DegenerateSegment(PolytopeError):
    pass


class ZeroDimensional(PolytopeError):
    pass


class NotAFacet(PolytopeError):
    pass


class NotAVertex(PolytopeError):
    pass


class EpsilonOutOfRange(PolytopeError):
    pass


class NonUnimodularMatrix(PolytopeError):
    pass


class NotLattice(PolytopeError):
    pass


class LowerDimensional(PolytopeError):
    pass


class EmptyInput(PolytopeError):
    pass


class PointNotInMultiple(PolytopeError):
    pass


class NotFullRankInOwnSpan(PolytopeError):
    pass


class NotSimple(PolytopeError):
    pass


class EmptyTarget(PolytopeError):
    pass


class GridOutOfRange(PolytopeError):
    pass


class COutOfRange(PolytopeError):
    pass


class DegenerateRegion(PolytopeError):
    pass


class NotASimplex(PolytopeError):
    pass


class FacetNotVisible(PolytopeError):
    pass


class BadParams(PolytopeError):
    pass


class ParseError(PolytopeError):
    def __init__(self, msg, line=None, column=None):
        super().__init__(msg if line is None else f"{msg} (line {line}, column {column})")
        self.line = line
        self.column = column


class BudgetExceeded(PolytopeError):
    """Raised when an exact cover search exhausts its region budget.

    The partial report gathered so far is attached as ``report``.
    """

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report
