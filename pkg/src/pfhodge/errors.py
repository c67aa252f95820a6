"""Exception hierarchy for pfhodge."""

from __future__ import annotations


class PFHodgeError(Exception):
    """Base class for all pfhodge errors."""


class OperatorSyntaxError(PFHodgeError):
    """Raised when an operator or polynomial string fails to parse.

    Carries the character position of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class IrregularSingularityError(PFHodgeError):
    """Raised when a computation requires a regular singular point but the
    operator is irregular there."""


class IrrationalExponentsError(PFHodgeError):
    """Raised when an indicial polynomial has non-rational roots.

    ``cofactor`` is the root-free polynomial factor witnessing this.
    """

    def __init__(self, message: str, cofactor=None):
        super().__init__(message)
        self.cofactor = cofactor


class ExponentConsistencyError(PFHodgeError):
    """Raised when the Fuchs-relation self-check on a Riemann scheme fails."""


class MissingAnnotationError(PFHodgeError):
    """Raised when a computation needs Jordan-type annotations that are
    absent from the profile.  ``points`` lists the offending points."""

    def __init__(self, message: str, points=()):
        super().__init__(message)
        self.points = tuple(points)


class InconsistentProfileError(PFHodgeError):
    """Raised when local data cannot come from a polarized variation of
    Hodge structure as annotated (non-integral degrees, negative Hodge
    numbers, invariant mismatches...)."""


class CoverValidationError(PFHodgeError):
    """Raised when a cover specification violates partition or
    Riemann-Hurwitz constraints."""


class CertificationError(PFHodgeError):
    """Raised when an enumeration cap cannot be certified complete."""
