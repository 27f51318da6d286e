"""Exception types shared across the package.

Two families matter for the CLI exit codes: configuration problems
(``ConfigError`` and subclasses, exit code 1) and numerical failures
(``NumericalError`` and subclasses, exit code 2).
"""


class ScivrError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ScivrError):
    """Invalid or inconsistent experiment configuration."""


class MissingBaselineError(ConfigError):
    """A comparison was requested but no quantum reference series exists."""


class NumericalError(ScivrError):
    """Base class for runtime numerical failures."""


class PotentialRangeError(NumericalError):
    """Potential evaluated outside its floating-point guard region."""


class EnergyDomainError(NumericalError):
    """Energy at or below the potential minimum; no classical motion."""


class UnboundMotionError(NumericalError):
    """Requested a bound-motion quantity for an unbound orbit."""


class TrajectoryEscapeError(NumericalError):
    """A trajectory left the guard region during integration.

    Carries the last valid time and state vector for diagnostics.
    """

    def __init__(self, message, time=None, last_state=None):
        super().__init__(message)
        self.time = time
        self.last_state = last_state


class BranchAmbiguityError(NumericalError):
    """The prefactor radicand passed through zero within one step.

    Continuity cannot decide the square-root branch; rerun with a
    smaller time step.
    """


class GridCoverageError(NumericalError):
    """A spatial grid is too small for the state it must represent."""
