"""Exception types shared across the package."""

from __future__ import annotations


class MatImageError(Exception):
    """Base class for every error raised by this package."""


class PolyParseError(MatImageError):
    """Syntax error in polynomial input text, annotated with a position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ConstantTermError(MatImageError):
    """The parsed polynomial has a nonzero constant term."""


class ArityError(MatImageError):
    """Evaluation received the wrong number of arguments."""


class DomainError(MatImageError):
    """Unsupported scalar domain, mixed domains, or a singular matrix."""


class NotMultilinearError(MatImageError):
    """Operation requires a multilinear polynomial."""


class TooLargeError(MatImageError):
    """Problem size exceeds a documented cap (variable count, field size, degree)."""


class StructuralViolationError(MatImageError):
    """Internal consistency assertion failed.

    Raised when computed data violates a structural fact the algorithms rely
    on (unit-table value shapes, the four-way span dichotomy, vanishing of
    cross terms in the plane construction).  Carries diagnostics; never
    silenced.
    """

    def __init__(self, message: str, diagnostics: object = None):
        self.diagnostics = diagnostics
        super().__init__(message)


class NoOffdiagonalError(MatImageError):
    """No matrix-unit tuple evaluates to an off-diagonal value."""


class NoPlaneError(MatImageError):
    """The requested 2-dimensional plane is not realizable for this polynomial."""

    def __init__(self, message: str, evidence: object = None):
        self.evidence = evidence
        super().__init__(message)


class NotInImageError(MatImageError):
    """Target matrix is outside the (certified part of the) image."""

    def __init__(self, message: str, image_class: object = None):
        self.image_class = image_class
        super().__init__(message)


class SeedFailureError(MatImageError):
    """Perturbed seed tuples could not satisfy their side conditions."""


class BisectionStallError(MatImageError):
    """Bisection failed to reach its tolerance within the iteration cap."""


class DegeneratePathError(MatImageError):
    """Path following hit a scalar or nilpotent point that retries could not avoid."""


class ZeroTraceError(MatImageError):
    """det/trace-squared ratio undefined: the evaluation has zero trace."""


class NoWeightProfileError(MatImageError):
    """The polynomial admits no weight vector with common nonzero weighted degree."""


class NonUnitEntryError(MatImageError):
    """An input matrix is not a matrix unit where one is required."""
