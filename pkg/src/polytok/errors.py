"""Exception hierarchy shared across the toolkit.

DataError subclasses map to CLI exit code 3, InternalError to 4.
"""


class PolytokError(Exception):
    """Base class for all toolkit errors."""


class DataError(PolytokError):
    """Malformed or inconsistent input data."""


class AlignmentError(DataError):
    """Parallel files disagree on line count."""


class SplitSizeError(DataError):
    """Requested dev/test sizes do not fit the corpus."""


class InputError(DataError):
    """An operation received empty or otherwise unusable input."""


class ParseError(DataError):
    """A structured file failed to parse."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        elif line is not None:
            prefix = f"line {line}: "
        super().__init__(prefix + message)


class GenerationError(DataError):
    """A morphophonological join operator could not be applied."""


class ComparisonError(DataError):
    """Experiment runs cannot be compared."""


class StageError(PolytokError):
    """A pipeline stage failed; carries the stage name."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")


class InternalError(PolytokError):
    """An internal invariant was violated."""
