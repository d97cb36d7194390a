"""
Custom exceptions for the confocal diagram pipeline.

Every error raised by the library derives from `ConfocalError`, which
carries a message plus optional structured details. The CLI maps the
subclasses onto its exit codes.
"""
from typing import Any, Optional


class ConfocalError(Exception):
    """Base exception for all confocal diagram errors."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        """Initialize exception with message and optional details."""
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ConfigError(ConfocalError):
    """Raised when a run configuration is invalid."""
    pass


class InputFormatError(ConfocalError):
    """Raised when an input file cannot be parsed or fails validation."""
    pass


class DegenerateSimplexError(ConfocalError):
    """Raised when a predicate or construction receives a flat simplex."""
    pass


class CoincidentSitesError(ConfocalError):
    """Raised when two weighted points define no radical plane."""
    pass


class GeometryError(ConfocalError):
    """Raised when a geometric precondition does not hold."""
    pass


class FixtureParameterError(ConfocalError):
    """Raised when fixture parameters violate their construction bounds."""
    pass


class ResolutionError(ConfocalError):
    """Raised when a raster oracle cannot resolve the requested features."""
    pass


class ConvergenceError(ConfocalError):
    """Raised when the reflector solver stops before reaching tolerance."""

    def __init__(self, message: str, solution: Any = None, details: Optional[dict[str, Any]] = None):
        super().__init__(message, details)
        self.solution = solution


class VerificationError(ConfocalError):
    """Raised when an oracle check disagrees with a computed result."""
    pass
