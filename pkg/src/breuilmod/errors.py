"""Exception types shared across the package."""


class BreuilmodError(Exception):
    """Base class for all domain errors."""


class ParameterError(BreuilmodError):
    """Invalid global parameters (p, e, r, f)."""


class DomainError(BreuilmodError):
    """Operation applied outside its mathematical domain (e.g. inverting zero)."""


class DivisibilityError(BreuilmodError):
    """Exact division by a power of u requested for a non-divisible element."""


class FiltrationError(BreuilmodError):
    """A vector expected inside the filtration submodule was not."""


class NotAMorphismError(BreuilmodError):
    """A matrix fails the compatibility conditions of a category morphism."""


class InvariantViolation(BreuilmodError):
    """An internal guarantee failed; indicates invalid input data or a bug."""


class SchemaError(BreuilmodError):
    """Malformed JSON document; carries the offending JSON path."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class NeedsFieldExtension(BreuilmodError):
    """Raised internally when a computation requires a larger coefficient field."""

    def __init__(self, degree: int):
        self.degree = degree
        super().__init__(f"coefficient field of degree {degree} over F_p required")
