"""Error taxonomy shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class UniqmaxError(Exception):
    """Base class for all package-specific errors."""


class ModelSpecError(UniqmaxError):
    """A payoff model definition is malformed (user input error)."""


class DomainError(UniqmaxError):
    """A mathematically ill-posed request, e.g. a threshold at n <= 2."""


class FeasibilityError(UniqmaxError):
    """A computation exceeds a configured resource cap.

    ``required`` carries the offending size (outcome count or support
    length) so callers can report it.
    """

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required
