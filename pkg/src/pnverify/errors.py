"""Exception hierarchy shared by every module.

The CLI maps :class:`ConfigurationError` and :class:`UsageError` to exit code 2,
as it does for the structural and numeric failures.
"""


class PNVerifyError(Exception):
    pass


class ConfigurationError(PNVerifyError, ValueError):
    """Unsupported family, rank or space parameters."""


class UsageError(PNVerifyError, ValueError):
    """An operation was called outside its domain."""


class StructuralError(PNVerifyError, RuntimeError):
    """A construction produced data violating a structural invariant."""


class NumericError(PNVerifyError, ArithmeticError):
    """Two numerical evaluation paths disagree beyond their tolerance."""
