"""Exception types shared across the solver suite."""


class HypersorbError(Exception):
    """Base class for all package errors."""


class InvalidInput(HypersorbError, ValueError):
    """A user-supplied value violates a documented precondition."""


class PoleError(HypersorbError, ValueError):
    """Evaluation requested inside the guard band of a tan(alpha/2) pole."""


class BracketingError(HypersorbError, RuntimeError):
    """Root bracketing failed; message carries the interval diagnostics."""


class PartialResultError(BracketingError):
    """Fewer roots could be resolved than requested.

    The modes found so far are attached as ``modes``.
    """

    def __init__(self, message, modes=()):
        super().__init__(message)
        self.modes = list(modes)


class DegenerateBasisError(HypersorbError, RuntimeError):
    """The mode Gram matrix is numerically singular; use fewer modes."""


class DegenerateModeError(HypersorbError, RuntimeError):
    """A mode sits at the critical point where both exponents coincide."""


class StabilityError(HypersorbError, RuntimeError):
    """The explicit scheme produced non-finite values (time step too large)."""


class ConfigError(HypersorbError, ValueError):
    """Run configuration is inconsistent or incomplete."""
