"""Exception types raised across the toolkit."""


class ToolkitError(Exception):
    """Base class for every rssikit error; the CLI maps these to exit 1."""


class InvalidCoordinateError(ToolkitError, ValueError):
    pass


class CsvParseError(ToolkitError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SplitError(ToolkitError, ValueError):
    pass


class MetricError(ToolkitError, ValueError):
    pass


class FitError(ToolkitError, ValueError):
    pass


class PredictError(ToolkitError, ValueError):
    pass


class GridError(ToolkitError, ValueError):
    pass


class OobUnavailableError(ToolkitError, ValueError):
    pass
