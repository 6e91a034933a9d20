"""Exception hierarchy for the slugfest pipeline.

Every exception carries a single human-readable message so callers can
re-wrap them with stage labels without losing information.  ``DataError``
and its subclasses signal problems with input *data* (the CLI maps them
to exit code 2); plain ``ValueError`` is reserved for parameter misuse.
"""


class SlugfestError(Exception):
    """Base class for all package-specific errors."""


class DataError(SlugfestError):
    """Input data violates a documented contract."""


class FormatError(DataError):
    """A file or stream is not in the declared format."""


class DuplicateRecordError(DataError):
    """The same game appears more than once in a game log."""


class InsufficientDataError(DataError):
    """Not enough observations to perform the requested operation."""


class OrderingError(DataError):
    """A sequence that must be ordered is not."""


class EventLookupError(DataError):
    """A game expected to be present in a record list is missing."""


class DegenerateDataError(DataError):
    """Data is degenerate for the requested statistic (e.g. zero variance)."""
