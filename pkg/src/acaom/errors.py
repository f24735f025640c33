"""Exception hierarchy shared across the package.

Validation problems (bad parameters, bad configs) and numerical problems
(unstable drift, singular solves) are kept distinct so the CLI can map them
to different exit codes.
"""


class AcaomError(Exception):
    """Base class for all package errors."""


class ParameterError(AcaomError, ValueError):
    """A physical parameter violates its invariants. Names the field."""


class ConfigError(AcaomError, ValueError):
    """A scenario configuration failed validation."""


class StabilityError(AcaomError, RuntimeError):
    """An operation requiring a stable drift matrix was given an unstable one."""

    def __init__(self, message, margin=None):
        super().__init__(message)
        self.margin = margin


class NumericsError(AcaomError, RuntimeError):
    """A numerical routine failed (singular system, non-convergence, ...)."""


class CovarianceError(AcaomError, RuntimeError):
    """A covariance matrix violates a physicality constraint."""
