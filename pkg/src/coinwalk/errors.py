"""Exception hierarchy.

Every error carries a machine-readable ``category`` used by the CLI for exit
codes and by the HTTP service for error bodies.
"""


class CoinWalkError(Exception):
    """Base class for all package errors."""

    category = "internal"


class DomainError(CoinWalkError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    category = "validation"


class ContractViolation(CoinWalkError, ValueError):
    """Objects passed together do not fit (geometry, size, or time mismatch)."""

    category = "validation"


class ConfigValidationError(CoinWalkError, ValueError):
    """One or more experiment-configuration fields are invalid."""

    category = "validation"

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration: " + "; ".join(self.violations))


class WindowOverflowError(CoinWalkError, RuntimeError):
    """Amplitude would leave the preallocated line window (too few sites)."""

    category = "window-overflow"


class QuadratureAccuracyError(CoinWalkError, RuntimeError):
    """Doubling the quadrature grid moved the result beyond tolerance."""

    category = "accuracy"


class EigenSolverError(CoinWalkError, RuntimeError):
    """Dense Hermitian eigensolver failed to converge."""

    category = "numeric"


class OutputError(CoinWalkError, OSError):
    """Result table could not be written or read."""

    category = "io"
