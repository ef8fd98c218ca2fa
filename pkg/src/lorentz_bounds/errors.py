"""Exception types raised across the package."""


class LorentzBoundsError(Exception):
    """Base class for all domain errors."""


class ChartMismatch(LorentzBoundsError):
    pass


class NotChronological(LorentzBoundsError):
    pass


class SizeBound(LorentzBoundsError):
    pass


class ReverseTriangleViolation(LorentzBoundsError):
    pass


class OutOfRange(LorentzBoundsError):
    pass


class DegenerateVertex(LorentzBoundsError):
    pass


class NotCausal(LorentzBoundsError):
    pass


class BoundaryMismatch(LorentzBoundsError):
    pass


class PreconditionFailed(LorentzBoundsError):
    pass


class NonMonotoneVerdicts(LorentzBoundsError):
    pass


class VacuousBracket(LorentzBoundsError):
    pass


class FundamentalDomainError(OutOfRange):
    """Two anti-de Sitter points lie outside a common fundamental domain."""


class SpaceFormatError(LorentzBoundsError):
    """A serialized space or plan does not match the expected schema."""
