"""Exception types raised across troplab."""


class TroplabError(Exception):
    """Base class for all package errors."""


class ZeroVector(TroplabError, ValueError):
    pass


class DegeneratePiece(TroplabError, ValueError):
    pass


class DimensionMismatch(TroplabError, ValueError):
    pass


class TooFewTerms(TroplabError, ValueError):
    pass


class UnknownExponent(TroplabError, KeyError):
    pass


class DimensionTooLarge(TroplabError, ValueError):
    pass


class TooManyTerms(TroplabError, ValueError):
    pass


class ZeroDirection(TroplabError, ValueError):
    pass


class LineInsideHypersurface(TroplabError, ValueError):
    """A whole interval of the line lies on the tropical hypersurface."""


class MalformedGraph(TroplabError, ValueError):
    pass


class NotWeaklyBalanced(TroplabError):
    def __init__(self, vertex, witness):
        super().__init__(f"vertex {vertex} is not weakly balanced (witness {witness})")
        self.vertex = vertex
        self.witness = witness


class NoAscendingEdge(TroplabError):
    pass


class PointNotOnGraph(TroplabError, ValueError):
    pass


class RootFindingDiverged(TroplabError, ArithmeticError):
    pass


class DegenerateFamily(TroplabError, ValueError):
    pass


class EmptySample(TroplabError, ValueError):
    pass


class EmptyTarget(TroplabError, ValueError):
    pass


class ZMeetsTropicalLimit(TroplabError, ValueError):
    pass


class NotTransverseError(TroplabError, ValueError):
    def __init__(self, reasons):
        super().__init__("hyperplane is not transverse: " + ", ".join(reasons))
        self.reasons = tuple(reasons)


class ParseError(TroplabError, ValueError):
    pass
