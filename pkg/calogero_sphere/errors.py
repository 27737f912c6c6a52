"""Exception hierarchy for calogero_sphere."""

from typing import Any, Optional, Tuple


class CalogeroError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(CalogeroError, ValueError):
    """A model or run parameter is outside its allowed range."""


class InvalidInputError(CalogeroError, ValueError):
    """An input value has the wrong shape, range or content."""


class SingularConfigurationError(CalogeroError, ArithmeticError):
    """
    A potential was requested on (or numerically at) a collision hyperplane.

    Attributes:
        pair: 1-based particle pair (i, j) whose root is orthogonal to the configuration,
            or None when the singularity is not tied to a single pair
        value: The offending projection (y·b^a, a cosine, or a denominator)
    """

    def __init__(
        self,
        message: str,
        pair: Optional[Tuple[int, int]] = None,
        value: Optional[float] = None,
    ):
        super().__init__(message)
        self.pair = pair
        self.value = value


class ChartSingularityError(SingularConfigurationError):
    """A chart coordinate is undefined at the requested point (pole or origin)."""


class DegenerateDenominatorError(CalogeroError, ArithmeticError):
    """The solved form of the algebraic relation has a vanishing denominator."""


class IntegrationAbortedError(CalogeroError):
    """
    A trajectory hit the collision guard.

    Attributes:
        last_state: Last state that passed the guard
        time: Time of last_state
        step: Step index of last_state
        trajectory: Samples recorded before the abort
    """

    def __init__(
        self,
        message: str,
        last_state: Any = None,
        time: float = 0.0,
        step: int = 0,
        trajectory: Any = None,
    ):
        super().__init__(message)
        self.last_state = last_state
        self.time = time
        self.step = step
        self.trajectory = trajectory
