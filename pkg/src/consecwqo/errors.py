"""Exception types shared by the library and the command line."""


class ConsecWQOError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ConsecWQOError, ValueError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class LimitError(ConsecWQOError, RuntimeError):
    """An enumeration, search or lifting cap was exceeded (CLI exit code 3)."""
