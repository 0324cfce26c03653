"""Exception types raised across the package."""


class DiamGraphError(Exception):
    """Base class for all package errors."""


class NearZeroVector(DiamGraphError, ValueError):
    pass


class InvalidArc(DiamGraphError, ValueError):
    pass


class NotInHemisphere(DiamGraphError):
    """Direction set is not contained in any open hemisphere."""


class TooFewPoints(DiamGraphError, ValueError):
    pass


class DuplicatePoints(DiamGraphError, ValueError):
    pass


class ZeroDiameter(DiamGraphError, ValueError):
    pass


class DimensionUnsupported(DiamGraphError, ValueError):
    pass


class DegenerateRegion(DiamGraphError):
    pass


class InvalidInstance(DiamGraphError, ValueError):
    pass


class SamplingExhausted(DiamGraphError, RuntimeError):
    pass


class JunctionCoincidesWithHub(DiamGraphError):
    pass


class InconsistentRotation(DiamGraphError):
    pass


class NotACycle(DiamGraphError, ValueError):
    pass


class BoundViolation(DiamGraphError, AssertionError):
    """An exact recount exceeded 2n-2; always a numerical or logic defect."""


class SchemaError(DiamGraphError, ValueError):
    """Input file is not valid JSON or does not match the expected layout."""


class InvariantError(DiamGraphError, ValueError):
    """Input parsed but violates a point-set invariant."""
