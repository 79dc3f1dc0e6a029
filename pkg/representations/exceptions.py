class RepresentationError(Exception):
    """Base class for everything raised by the representations app."""


class NotMinorClosed(RepresentationError):
    """A reduction of a member has no isomorphic copy in the class."""
