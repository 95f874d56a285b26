"""
Exception hierarchy shared by the services and the command line.

Every error carries the exit code the CLI reports for it.
"""


class PspinError(Exception):
    exit_code = 1


class DomainError(PspinError, ValueError):
    """An argument lies outside the domain of the operation."""


class OrderingError(DomainError):
    """Probe points are not strictly ordered."""


class CapacityError(PspinError):
    """The closed form is only implemented for a bounded number of atoms."""


class QuadratureError(PspinError, ArithmeticError):
    """An integrand was not finite on a node, or a result overflowed."""


class NoTransitionError(PspinError):
    """The SK model (p = 2) has no RS/1RSB boundary."""

    exit_code = 2


class BracketError(PspinError, RuntimeError):
    """No sign change of the boundary function was found."""

    exit_code = 3


class BelowTransitionError(PspinError):
    """A 1RSB solution was requested at or below the first critical temperature."""


class NotInWindowError(PspinError):
    """Newton iteration did not produce a 1RSB solution in (0,1)^2."""


class LemmaVerificationError(PspinError):
    exit_code = 4


class UsageError(PspinError):
    """Invalid command-line flags."""
