"""Exception types shared across the package."""


class WsclustError(Exception):
    """Base class for all package errors."""


class ConfigurationError(WsclustError, ValueError):
    """Invalid parameters, ranges, or usage (CLI exit code 1)."""


class DataError(WsclustError, ValueError):
    """Malformed or non-finite input data (CLI exit code 2)."""


class PipelineError(WsclustError, RuntimeError):
    """Degenerate state reached while running the clustering stages."""
