"""Exception classes shared by the engine and the command line front end."""


class BergcurveError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for this failure."""

    exit_code = 2


class ParseError(BergcurveError):
    exit_code = 2


class InconsistentInput(BergcurveError):
    exit_code = 2


class TruncationInsufficient(BergcurveError):
    """A truncated computation was inconclusive; re-expand with a larger order."""

    exit_code = 3


class NotSquareFree(BergcurveError):
    exit_code = 2


class UnresolvedLocus(BergcurveError):
    """Special points with irrational coordinates; use parametrized mode."""

    exit_code = 3


class IrrationalCoefficients(BergcurveError):
    """A branch needs Puiseux coefficients outside Q; use parametrized mode."""

    exit_code = 3


class NotOnCurve(BergcurveError):
    exit_code = 2


class InconsistentMultiplicity(BergcurveError):
    exit_code = 2


class BoundTooSmall(BergcurveError):
    exit_code = 2


class NegativeGenus(BergcurveError):
    exit_code = 2


class UnclassifiedPoint(BergcurveError):
    exit_code = 4


class UnsupportedGenus(BergcurveError):
    exit_code = 5


class GridUnderflow(BergcurveError):
    exit_code = 6
