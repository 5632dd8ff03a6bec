class EdgeStatesError(ValueError):
    """Base class for invalid inputs to this package."""


class ShapeError(EdgeStatesError):
    pass


class NotHermitianError(EdgeStatesError):
    pass


class NotPSDError(EdgeStatesError):
    pass


class NotPPTError(EdgeStatesError):
    pass


class ParameterError(EdgeStatesError):
    """A construction parameter violates the family's admissible range."""
