"""Exception types shared across the package."""


class TwpasimError(Exception):
    """Base class for all package errors."""


class DomainError(TwpasimError, ValueError):
    """An argument is outside the physically meaningful domain."""


class SingularityError(TwpasimError, ValueError):
    """Evaluation requested inside a guarded pole/zero band."""

    def __init__(self, message, frequency=None):
        super().__init__(message)
        self.frequency = frequency


class ProfileError(TwpasimError, ValueError):
    """A taper profile violates its structural invariants."""


class ConfigurationError(TwpasimError, ValueError):
    """A device or run configuration is inconsistent."""


class CascadeOverflowError(TwpasimError, FloatingPointError):
    """Numerical overflow while cascading the transfer matrices."""

    def __init__(self, message, cell_index=None):
        super().__init__(message)
        self.cell_index = cell_index


class ConvergenceError(TwpasimError, RuntimeError):
    """An iterative solver failed to reach its accuracy target."""


class FitError(TwpasimError, RuntimeError):
    """A calibration fit could not be performed."""
