"""Exception hierarchy shared by every scrollsys module."""


class ScrollsysError(Exception):
    """Base class for all library errors."""


class InvalidInputError(ScrollsysError, ValueError):
    pass


class OutOfRangeError(ScrollsysError, ValueError):
    """A formula was asked for outside the range where it is valid."""


class NotEffectiveError(ScrollsysError, ValueError):
    pass


class ParseError(InvalidInputError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class FieldTooSmallError(ScrollsysError, ValueError):
    pass


class UnsupportedError(ScrollsysError, ValueError):
    pass


class NonTerminationError(ScrollsysError, RuntimeError):
    def __init__(self, message: str, partial_trace=None):
        super().__init__(message)
        self.partial_trace = partial_trace


class OpenCaseError(ScrollsysError, RuntimeError):
    """The degeneration prover found no admissible step for a sub-system."""

    def __init__(self, message: str, stuck):
        super().__init__(message)
        self.stuck = stuck
