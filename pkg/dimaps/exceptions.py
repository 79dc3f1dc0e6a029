class DimapError(Exception):
    """Base class for everything raised by the dimaps app."""


class InvalidMap(DimapError):

    def __init__(self, violations, message=None):
        self.violations = list(violations)
        if message is None:
            message = '; '.join(str(v) for v in self.violations) or 'invalid alternating dimap'
        super().__init__(message)


class UnknownEdge(DimapError, LookupError):
    pass


class NonIntegerGenus(DimapError):
    """Euler characteristic gave a fractional or negative genus."""


class InternalInvariantViolation(DimapError):
    """A reduction produced something that is not an alternating dimap."""


class CapExceeded(DimapError):
    pass


class DimapFileError(DimapError, ValueError):
    pass
