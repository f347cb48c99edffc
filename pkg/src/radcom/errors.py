"""Exception types shared across the package."""


class RadcomError(Exception):
    """Base class for all radcom-specific errors."""


class ValidationError(RadcomError, ValueError):
    """An input value or precondition is outside its documented domain."""


class ScenarioParseError(ValidationError):
    """A scenario source could not be parsed.

    Carries the 1-based line number of the offending entry when known.
    """

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class InfeasibleError(RadcomError):
    """A constrained problem has no solution for the requested inputs.

    ``kappa_min`` (when set) is the minimum communications power budget
    1 - ar_sq required for feasibility.
    """

    def __init__(self, message: str, kappa_min: float | None = None):
        super().__init__(message)
        self.kappa_min = kappa_min


class InfiniteCrlbError(RadcomError):
    """Delay-estimation bound is unbounded (zero radar power, zero Fisher information)."""
