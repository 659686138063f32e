"""Exception hierarchy shared by all modules."""


class LabyrinthError(Exception):
    """Base class for every error raised by this package."""


class UsageError(LabyrinthError, ValueError):
    """Bad arguments: out-of-range coordinates, invalid parameters, mismatched shapes."""


class UnsupportedImageError(LabyrinthError, ValueError):
    """Image is well formed but cannot be processed (e.g. smaller than 2x2)."""


class InputFormatError(LabyrinthError):
    """An input file could not be decoded."""


class IntervalTableError(InputFormatError, ValueError):
    """A tone interval table violates one of its invariants."""


class PGMError(InputFormatError):
    """A PGM stream could not be decoded; ``offset`` is the byte where decoding failed."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class MalformedHeaderError(PGMError):
    pass


class UnsupportedMaxvalError(PGMError):
    pass


class TruncatedPayloadError(PGMError):
    pass
