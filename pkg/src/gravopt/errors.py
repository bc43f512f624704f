"""Exception hierarchy shared across the package."""


class GravoptError(Exception):
    """Base class for all gravopt errors."""


class ConfigError(GravoptError):
    """Invalid algorithm, space, or objective configuration."""


class DimensionError(GravoptError):
    """A vector's length does not match the search space dimension."""


class EvaluationError(GravoptError):
    """A single objective evaluation failed (timeout, crash, bad value)."""


class ProtocolError(EvaluationError):
    """An external worker violated the line-delimited JSON protocol."""


class RunAbortedError(GravoptError):
    """An optimization run stopped early; carries the partial result."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
