"""Exception types shared across the package."""


class ParsememError(Exception):
    """Base class for errors raised by this package."""


class EmptyInputError(ParsememError, ValueError):
    """An operation that needs at least one symbol got an empty input."""


class WindowError(ParsememError, ValueError):
    """The input is shorter than the hashing window, so no window hash exists."""


class ItemKindMismatch(ParsememError, TypeError):
    """A filter was queried with an item of the wrong kind (k-mer vs phrase ID)."""


class IndexFormatError(ParsememError, ValueError):
    """An index file is corrupt, truncated, or has an unsupported version."""


class ParameterMismatch(ParsememError, ValueError):
    """Query-time parsing parameters differ from the ones the index was built with."""
