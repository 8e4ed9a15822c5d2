"""Exception hierarchy shared across the package.

The command-line interface maps these onto process exit codes:
``InvalidProblemError`` -> 2, ``NumericalFailure`` (and subclasses) -> 3,
``HypothesisViolation`` -> 4.
"""

from __future__ import annotations


class SlindefError(Exception):
    """Base class for all package-specific errors."""


class InvalidProblemError(SlindefError, ValueError):
    """Malformed problem data: bad piece layout, signs, windows, or arguments."""


class NumericalFailure(SlindefError, RuntimeError):
    """A numerical routine could not reach its accuracy or robustness target."""


class ContourError(NumericalFailure):
    """A contour used for complex root counting passes too close to a root."""


class EmptyWindowError(NumericalFailure):
    """A scan window contains no eigenvalues, so a report cannot be formed."""


class DriftUndefined(NumericalFailure):
    """A zero-drift derivative is not well defined at the requested point."""


class HypothesisViolation(SlindefError):
    """Inputs fail the hypotheses required by a bound certificate."""
