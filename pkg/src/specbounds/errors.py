"""Exception types raised across the package."""


class SpecBoundsError(Exception):
    """Base class for all package errors."""


class NotSymmetricError(SpecBoundsError, ValueError):
    def __init__(self, max_asymmetry: float, threshold: float):
        self.max_asymmetry = max_asymmetry
        self.threshold = threshold
        super().__init__(
            f"matrix is not symmetric: max |M - M^T| = {max_asymmetry:.3e} "
            f"exceeds {threshold:.3e}"
        )


class CapacityError(SpecBoundsError, RuntimeError):
    """Requested problem size exceeds a configured cap."""


class ParameterRangeError(SpecBoundsError, ValueError):
    """A parameter lies outside the range where a law or family is defined."""


class PositivityError(SpecBoundsError, ValueError):
    """A nonpositive eigenvalue was met where a negative or fractional power is taken."""


class ConstantsRequired(SpecBoundsError, ValueError):
    def __init__(self, what: str = "this check"):
        super().__init__(f"commutator constants (alpha, beta, gamma) required for {what}")


class HypothesisViolation(SpecBoundsError, ValueError):
    """A function fails one of H1-H4 (or a boundary condition) needed by a law."""

    def __init__(self, item: str, witness, message: str = ""):
        self.item = item
        self.witness = witness
        text = f"hypothesis {item} violated"
        if message:
            text += f": {message}"
        text += f" (witness {witness})"
        super().__init__(text)


class TrustRegionError(SpecBoundsError, ValueError):
    """A truncated spectrum cannot certify the requested quantity."""

    def __init__(self, message: str, threshold: float | None = None):
        self.threshold = threshold
        super().__init__(message)


class IdentityMismatch(SpecBoundsError, ArithmeticError):
    """An exact identity failed its self-check beyond roundoff."""
