"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
3 for violated invariants or bad inputs, 4 for numeric failures.
"""

from __future__ import annotations


class QuadrexError(Exception):
    exit_code = 3


class ParseError(QuadrexError):
    exit_code = 2


class DegenerateQuadrilateral(QuadrexError):
    pass


class NotGeneric(QuadrexError):
    pass


class NotTrapezoid(QuadrexError):
    pass


class NotParallelogram(QuadrexError):
    pass


class IsParallelogram(QuadrexError):
    pass


class InvalidParams(QuadrexError):
    pass


class NonPositiveScaling(QuadrexError):
    pass


class NonConvexPL(QuadrexError):
    pass


class EndpointSignViolation(QuadrexError):
    pass


class BoundaryPoint(QuadrexError):
    pass


class EmptyCone(QuadrexError):
    pass


class CoincidentPoints(QuadrexError):
    pass


class IrrationalInput(QuadrexError):
    pass


class NotStronglyRational(QuadrexError):
    pass


class GridTooCoarse(QuadrexError):
    pass


class ReebOutsideDual(QuadrexError):
    pass


class NotFourFacets(QuadrexError):
    pass


class NotGood(QuadrexError):
    pass


class NumericFailure(QuadrexError):
    exit_code = 4


class QuadratureFailure(NumericFailure):
    pass


class NonPositivePolynomial(NumericFailure):
    pass


class ConstructionFailed(NumericFailure):
    pass


class NonConvexSample(NumericFailure):
    pass
