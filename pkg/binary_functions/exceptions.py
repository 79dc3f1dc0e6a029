class BinaryFunctionError(Exception):
    """Base class for everything raised by the binary_functions app."""


class WrongLength(BinaryFunctionError):
    pass


class EmptySetNotOne(BinaryFunctionError):
    pass


class DimensionMismatch(BinaryFunctionError):
    pass


class IndexOutOfRange(BinaryFunctionError, IndexError):
    pass


class GroundSetTooLarge(BinaryFunctionError):
    pass


class SingularTransform(BinaryFunctionError):
    pass


class PoleError(BinaryFunctionError):
    """The minor parameter sits on 3+2*sqrt(2), where lambda(mu) blows up."""


class NormalizationError(BinaryFunctionError):
    """The empty-set entry vanished, so the result exists only up to scale."""


class BinaryFunctionFileError(BinaryFunctionError, ValueError):
    pass


class NonFiniteValue(BinaryFunctionError, ValueError):
    """A vector entry is NaN or infinite."""
