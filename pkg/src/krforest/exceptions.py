"""Exception types raised by krforest."""


class InvalidInputError(ValueError):
    """Input arrays have the wrong shape, length or contain non-finite values."""


class DegenerateMeanError(ArithmeticError):
    """The circular mean is undefined because the resultant vector vanishes."""


class NotComputableError(ArithmeticError):
    """A BIC score cannot be evaluated for this clustering."""


class SelectionFailedError(RuntimeError):
    """No candidate number of clusters produced a computable BIC."""


class ModelFormatError(ValueError):
    """A model file is malformed, truncated, corrupt or of an unknown version."""


class CsvParseError(InvalidInputError):
    """A dataset file could not be parsed."""

    def __init__(self, message, row=None, column=None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column}")
        if loc:
            message = f"{', '.join(loc)}: {message}"
        super().__init__(message)
        self.row = row
        self.column = column
