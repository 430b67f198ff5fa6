"""Semantic exception hierarchy.

Public functions never raise bare ValueError; every failure mode maps to one
of the classes below so callers (and the CLI exit-code logic) can dispatch on
type.
"""


class AlphaleakError(Exception):
    """Base class for all errors raised by this package."""


class InputValidationError(AlphaleakError, ValueError):
    """Inputs violate a structural contract: shapes, normalization, labels,
    NaN/Inf entries, malformed files."""


class AlphabetMismatchError(InputValidationError):
    """Two objects that must share an alphabet do not."""


class DomainError(AlphaleakError, ValueError):
    """An operation was applied outside its mathematical domain
    (support violations, zero denominators, degenerate entropies)."""


class RefusedComputationError(AlphaleakError):
    """A verification was refused because it cannot certify anything
    (e.g. the target quantity is infinite)."""


class OptimizerError(AlphaleakError):
    """The objective misbehaved during optimization (NaN/Inf at a point).

    Carries the offending point in ``.point``.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class CostGuardError(AlphaleakError):
    """An exhaustive computation was refused because it would exceed the
    configured size limits."""
