"""Exception hierarchy shared across the package."""

from __future__ import annotations


class FrontFixError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(FrontFixError, ValueError):
    """Invalid or inconsistent user-supplied parameter."""


class StabilityError(FrontFixError):
    """Grid violates the positivity/stability inequalities and force was not set."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BlowUpError(FrontFixError):
    """Time marching diverged.

    Carries the failing step index, the free-boundary value at that step,
    the last computed price row and a short machine-readable reason.
    """

    def __init__(self, step, s_f, p_row, reason):
        super().__init__(
            f"scheme blew up at step n={step} ({reason}): s_f={s_f!r}"
        )
        self.step = step
        self.s_f = s_f
        self.p_row = p_row
        self.reason = reason


class SingularDenominatorError(BlowUpError):
    """The free-boundary update denominator vanished."""

    def __init__(self, step, s_f, p_row):
        super().__init__(step, s_f, p_row, "singular denominator")


class NestingError(FrontFixError, ValueError):
    """Grids passed to restriction are not exactly nested."""


class ToleranceUnreachableError(FrontFixError):
    """The refinement ladder was exhausted before the tolerance was met.

    The partial report (all levels solved so far) is attached.
    """

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class LatticeError(FrontFixError, ValueError):
    """Binomial lattice parameters yield an invalid risk-neutral probability."""
