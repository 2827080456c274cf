"""Exception hierarchy shared by all forestcalc modules."""


class ForestcalcError(Exception):
    """Base class for all library errors."""


class ValidationError(ForestcalcError):
    """Malformed input: bad vertex labels, inconsistent dimensions, ..."""


class SizeLimitError(ForestcalcError):
    """Requested computation exceeds the documented size bounds."""


class IdentityFailure(ForestcalcError):
    """An identity that must hold exactly produced a nonzero residual.

    Carries the offending report in ``self.report`` when available.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InequalityFailure(ForestcalcError):
    """A certified inequality was violated; carries a witness in ``self.witness``."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class QuadratureError(ForestcalcError):
    """Numeric quadrature failed to reach the requested tolerance."""


class FitError(ForestcalcError):
    """No admissible constant found on the search range."""


class GenerationError(ForestcalcError):
    """Covariance generation failed (e.g. rationalization broke positivity)."""
